#include "gazelens/cli.hpp"

#include "gazelens/csv.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <future>
#include <ostream>
#include <sstream>

namespace gazelens {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

class MissingInputError : public Error {
public:
    using Error::Error;
};

int exit_code_for(const std::exception_ptr& ep, std::string& message) {
    try {
        std::rethrow_exception(ep);
    } catch (const MissingInputError& e) {
        message = e.what();
        return kExitMissingInput;
    } catch (const ParseError& e) {
        message = e.what();
        return kExitParse;
    } catch (const EmptySessionError& e) {
        message = e.what();
        return kExitEmptySession;
    } catch (const ConfigError& e) {
        message = e.what();
        return kExitConfig;
    } catch (const SpecError& e) {
        message = e.what();
        return kExitSpec;
    } catch (const IoError& e) {
        message = e.what();
        return kExitOutput;
    } catch (const std::exception& e) {
        message = std::string("internal error: ") + e.what();
        return kExitInternal;
    } catch (...) {
        message = "internal error";
        return kExitInternal;
    }
}

std::ifstream open_input(const fs::path& p) {
    if (!fs::is_regular_file(p)) throw MissingInputError("input not found: " + p.string());
    std::ifstream in(p, std::ios::binary);
    if (!in) throw MissingInputError("cannot open input: " + p.string());
    return in;
}

std::vector<fs::path> expand_inputs(const std::vector<fs::path>& inputs, bool& batch) {
    std::vector<fs::path> files;
    batch = inputs.size() > 1;
    for (const auto& in : inputs) {
        if (fs::is_directory(in)) {
            batch = true;
            std::vector<fs::path> found;
            for (const auto& entry : fs::directory_iterator(in)) {
                if (!entry.is_regular_file()) continue;
                auto ext = entry.path().extension().string();
                std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
                if (ext == ".csv" || ext == ".tsv") found.push_back(entry.path());
            }
            std::sort(found.begin(), found.end());
            files.insert(files.end(), found.begin(), found.end());
        } else {
            files.push_back(in);
        }
    }
    return files;
}

struct SessionOutcome {
    std::string student_id;
    fs::path out_dir;
    int code = kExitOk;
    std::string message;
    std::optional<SessionReport> report;
    std::string json_text;
};

SessionOutcome run_one(const fs::path& file, const fs::path& out_dir, const RunConfig& run, const AnalysisConfig& cfg) {
    SessionOutcome o;
    o.student_id = file.stem().string();
    o.out_dir = out_dir;
    try {
        const CleanSession session = load_session(file, cfg, run.aoi_file);
        DebugDump dump;
        SessionReport report = analyze_session(session, cfg, o.student_id, run.dump_samples ? &dump : nullptr);
        emit_reports(report, run.formats, out_dir, cfg.histogram, run.dump_samples ? &dump : nullptr);
        if (run.print_json) o.json_text = render_json(report);
        if (!report.failed_levels.empty()) {
            o.code = kExitPartial;
            o.message = std::to_string(report.failed_levels.size()) + " level(s) could not be analyzed";
        }
        o.report = std::move(report);
    } catch (...) {
        o.code = exit_code_for(std::current_exception(), o.message);
    }
    return o;
}

json index_entry(const SessionOutcome& o) {
    json e;
    e["student_id"] = o.student_id;
    e["exit_code"] = o.code;
    e["status"] = o.code == kExitOk ? "ok" : (o.code == kExitPartial ? "partial" : "failed");
    e["out_dir"] = o.out_dir.generic_string();
    if (!o.message.empty()) e["message"] = o.message;
    if (o.report) {
        e["levels_analyzed"] = o.report->per_level.size();
        e["levels_failed"] = o.report->failed_levels.size();
        if (!o.report->per_level.empty()) {
            e["max_urgency"] = to_string(o.report->plan.max_urgency);
            e["avg_relevance"] = o.report->plan.avg_relevance;
        }
    }
    return e;
}

}  // namespace

std::string tool_version() { return std::string("gazelens ") + GAZELENS_VERSION; }

AnalysisConfig effective_config(const std::optional<fs::path>& config_file,
                                const std::vector<std::pair<std::string, std::string>>& overrides) {
    AnalysisConfig cfg;
    if (config_file) {
        std::ifstream in(*config_file);
        if (!in) throw ConfigError("cannot read config file: " + config_file->string());
        apply_config(cfg, in, config_file->string());
    }
    for (const auto& [key, value] : overrides) cfg.set(key, value);
    cfg.validate();
    return cfg;
}

CleanSession load_session(const fs::path& csv, const AnalysisConfig& cfg, const std::optional<fs::path>& aoi_file) {
    std::vector<AoiRect> sidecar;
    if (aoi_file) {
        auto in = open_input(*aoi_file);
        sidecar = read_aoi_sidecar(in);
    }
    auto in = open_input(csv);
    IngestOptions opts = cfg.ingest;
    if (csv.extension() == ".tsv") opts.delimiter = '\t';
    RawSession raw = read_session(in, opts, cfg.screen);
    std::vector<AoiRect> aois = raw.inline_aois;
    aois.insert(aois.end(), sidecar.begin(), sidecar.end());
    if (aois.empty()) raw.diag.warn("no AOIs defined; task relevance is 0 and transitions are 0");
    raw.aoi_map = make_aoi_map(aois, cfg.screen, &raw.diag);
    return filter_samples(raw);
}

SessionReport analyze_session(const CleanSession& session, const AnalysisConfig& cfg, const std::string& student_id,
                              DebugDump* dump) {
    SessionReport report;
    report.student_id = student_id;
    report.tool_version = tool_version();
    report.config_echo = cfg.echo();
    report.sample_count = session.samples.size();
    report.dropped_count = session.dropped_count;
    report.diverted_count = session.diverted_count;
    report.diagnostics = session.diag.warnings;

    std::vector<SessionMetrics> metrics;
    std::vector<RiskAssessment> risks;
    std::vector<LevelId> ids;

    for (LevelId level : session.levels) {
        const auto samples = session.level_samples(level);
        if (samples.empty()) {
            report.failed_levels.push_back({level, "no valid gaze samples"});
            continue;
        }
        try {
            const EventSet detected = detect_events(samples, cfg.detect, session.aoi_map);
            LevelReport lr;
            lr.level = level;
            lr.events = session.level_events(level);
            lr.metrics = compute_metrics(samples, lr.events, detected, session.aoi_map, cfg.metrics);
            lr.risk = risk_score(lr.metrics, cfg.risk);
            lr.profile = risk_profile(lr.metrics);
            lr.performance = performance_label(lr.metrics.task_relevance.value_or(0.0), cfg.labels);
            lr.trend_score = trend_score(lr.profile);
            lr.fixations = detected.fixations;
            lr.saccades = detected.saccades;

            if (dump) {
                const auto labels = classify_ivt(samples, cfg.detect);
                auto& trace = dump->samples[level];
                trace.reserve(samples.size());
                for (std::size_t i = 0; i < samples.size(); ++i) {
                    SampleTrace t;
                    t.index = i;
                    t.timestamp = samples[i].timestamp;
                    t.pos = samples[i].pos;
                    t.cluster = i < detected.cluster_of.size() ? detected.cluster_of[i] : -1;
                    if (i == 0) {
                        t.basic_label = to_string(MovementKind::fixation);
                    } else {
                        t.velocity = labels[i - 1].velocity;
                        t.basic_label = to_string(labels[i - 1].kind);
                    }
                    trace.push_back(std::move(t));
                }
            }

            metrics.push_back(lr.metrics);
            risks.push_back(lr.risk);
            ids.push_back(level);
            report.per_level.push_back(std::move(lr));
        } catch (const Error& e) {
            report.failed_levels.push_back({level, e.what()});
        }
    }

    if (report.per_level.empty()) throw EmptySessionError("no level of session '" + student_id + "' could be analyzed");
    report.plan = plan_interventions(metrics, risks, cfg.plan, cfg.labels, ids);
    quantize_report(report);
    return report;
}

int cmd_analyze(const RunConfig& run, std::ostream& out, std::ostream& err) {
    AnalysisConfig cfg;
    try {
        cfg = effective_config(run.config_file, run.overrides);
    } catch (...) {
        std::string msg;
        const int code = exit_code_for(std::current_exception(), msg);
        err << "error: " << msg << "\n";
        return code;
    }
    if (run.inputs.empty()) {
        err << "error: no input given\n";
        return kExitUsage;
    }
    for (const auto& in : run.inputs) {
        if (!fs::exists(in)) {
            err << "error: input not found: " << in.string() << "\n";
            return kExitMissingInput;
        }
    }

    bool batch = false;
    const auto files = expand_inputs(run.inputs, batch);
    if (files.empty()) {
        err << "error: no session files found\n";
        return kExitMissingInput;
    }

    std::vector<SessionOutcome> outcomes(files.size());
    auto target_dir = [&](const fs::path& f) { return batch ? run.out_dir / f.stem() : run.out_dir; };
    const std::size_t jobs = std::max<std::size_t>(1, run.jobs);
    for (std::size_t begin = 0; begin < files.size(); begin += jobs) {
        const std::size_t end = std::min(files.size(), begin + jobs);
        if (jobs == 1) {
            outcomes[begin] = run_one(files[begin], target_dir(files[begin]), run, cfg);
            continue;
        }
        std::vector<std::future<SessionOutcome>> pending;
        for (std::size_t i = begin; i < end; ++i)
            pending.push_back(std::async(std::launch::async, run_one, files[i], target_dir(files[i]), std::cref(run),
                                         std::cref(cfg)));
        for (std::size_t i = begin; i < end; ++i) outcomes[i] = pending[i - begin].get();
    }

    int code = kExitOk;
    for (const auto& o : outcomes) {
        if (o.report && run.verbosity > 0)
            for (const auto& w : o.report->diagnostics) err << "warning: " << o.student_id << ": " << w << "\n";
        if (o.code != kExitOk) err << (o.code == kExitPartial ? "warning: " : "error: ") << o.student_id << ": "
                                   << o.message << "\n";
        if (run.print_json)
            out << o.json_text;
        else if (o.report)
            out << o.student_id << ": wrote " << o.out_dir.generic_string() << "\n";
        if (code == kExitOk || (code == kExitPartial && o.code != kExitOk)) code = o.code;
    }

    if (batch) {
        json index;
        index["tool_version"] = tool_version();
        index["sessions"] = json::array();
        for (const auto& o : outcomes) index["sessions"].push_back(index_entry(o));
        try {
            fs::create_directories(run.out_dir);
            std::ofstream f(run.out_dir / "index.json");
            if (!(f << index.dump(2) << "\n")) throw IoError("cannot write", (run.out_dir / "index.json").string());
        } catch (const std::exception& e) {
            err << "error: " << e.what() << "\n";
            return kExitOutput;
        }
    }
    return code;
}

int cmd_synth(const SynthRun& run, std::ostream& out, std::ostream& err) {
    try {
        SynthSpec spec;
        if (run.spec_file) {
            auto in = open_input(*run.spec_file);
            spec = parse_synth_spec(in);
        } else {
            spec = demo_spec();
        }
        if (run.seed) spec.seed = *run.seed;
        const SynthSession synth = generate_session(spec);

        const fs::path csv = run.out_file;
        if (csv.has_parent_path()) fs::create_directories(csv.parent_path());
        const fs::path truth = csv.parent_path() / (csv.stem().string() + ".truth.json");
        {
            std::ofstream f(csv, std::ios::binary);
            if (!f) throw IoError("cannot write", csv.string());
            write_session_csv(f, synth);
            if (!f) throw IoError("cannot write", csv.string());
        }
        {
            std::ofstream f(truth, std::ios::binary);
            if (!f) throw IoError("cannot write", truth.string());
            write_ground_truth(f, spec, synth.truth);
            if (!f) throw IoError("cannot write", truth.string());
        }
        if (run.emit_spec) {
            std::ofstream f(*run.emit_spec, std::ios::binary);
            if (!(f << synth_spec_to_json(spec))) throw IoError("cannot write", run.emit_spec->string());
        }
        out << "wrote " << csv.generic_string() << " (" << synth.session.samples.size() << " samples) and "
            << truth.generic_string() << "\n";
        return kExitOk;
    } catch (...) {
        std::string msg;
        const int code = exit_code_for(std::current_exception(), msg);
        err << "error: " << msg << "\n";
        return code;
    }
}

int cmd_validate_config(const std::optional<fs::path>& config_file,
                        const std::vector<std::pair<std::string, std::string>>& overrides, std::ostream& out,
                        std::ostream& err) {
    try {
        const AnalysisConfig cfg = effective_config(config_file, overrides);
        for (const auto& [k, v] : cfg.echo()) out << k << " = " << v << "\n";
        return kExitOk;
    } catch (...) {
        std::string msg;
        const int code = exit_code_for(std::current_exception(), msg);
        err << "error: " << msg << "\n";
        return code;
    }
}

namespace {

struct FlagOverride {
    const char* flag;
    const char* key;
    const char* help;
};

constexpr FlagOverride kFlagOverrides[] = {
    {"--screen-width", "screen.width", "Screen width in px"},
    {"--screen-height", "screen.height", "Screen height in px"},
    {"--y-origin", "screen.y_origin", "top or bottom"},
    {"--coords", "coords.mode", "auto, normalized or pixel"},
    {"--aoi-tolerance", "aoi.tolerance", "AOI hit tolerance in px"},
    {"--min-aoi-size", "aoi.min_size", "Minimum AOI side in px"},
    {"--v-basic", "detect.v_basic", "I-VT velocity threshold (px/s)"},
    {"--v-advanced", "detect.v_advanced", "Clustering velocity threshold (px/s)"},
    {"--spatial-threshold", "detect.spatial_threshold", "Cluster radius (px)"},
    {"--min-duration", "detect.min_duration", "Minimum fixation duration (ms)"},
    {"--min-cluster-size", "detect.min_cluster_size", "Minimum samples per fixation"},
    {"--min-latency", "match.min_latency", "Minimum click latency (ms)"},
    {"--max-latency", "match.max_latency", "Maximum click latency (ms)"},
};

std::optional<fs::path> config_from_env() {
    const char* env = std::getenv(kConfigEnvVar);
    if (env && *env) return fs::path(env);
    return std::nullopt;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Gaze-based attention screening for serious-game sessions", "gazelens"};
    app.require_subcommand(1);
    app.set_version_flag("--version", tool_version());

    RunConfig run;
    std::vector<std::string> inputs;
    std::string config_path;
    std::string aoi_path;
    std::string out_dir = run.out_dir.string();
    std::string formats = "json,md,plots";
    std::vector<std::string> sets;
    std::vector<std::string> flag_values(std::size(kFlagOverrides));

    auto* analyze = app.add_subcommand("analyze", "Analyze one session file or a directory of sessions");
    analyze->add_option("inputs", inputs, "Session files or directories")->required();
    analyze->add_option("-o,--out", out_dir, "Output directory")->capture_default_str();
    analyze->add_option("--aoi", aoi_path, "AOI sidecar file");
    analyze->add_option("-c,--config", config_path, std::string("Config file (default: $") + kConfigEnvVar + ")");
    analyze->add_option("--format", formats, "Comma list of json, md, plots")->capture_default_str();
    analyze->add_option("--set", sets, "Override a config key (key=value); repeatable");
    for (std::size_t i = 0; i < std::size(kFlagOverrides); ++i)
        analyze->add_option(kFlagOverrides[i].flag, flag_values[i],
                            std::string(kFlagOverrides[i].help) + " [" + kFlagOverrides[i].key + "]");
    analyze->add_flag("--dump-samples", run.dump_samples, "Also write per-sample detector traces");
    analyze->add_flag("--json", run.print_json, "Print the structured report to stdout");
    analyze->add_option("-j,--jobs", run.jobs, "Sessions analyzed concurrently in batch mode")->check(CLI::PositiveNumber);
    analyze->add_flag("-v,--verbose", run.verbosity, "Print diagnostics to stderr");

    SynthRun synth;
    std::string spec_path;
    std::string synth_out = synth.out_file.string();
    std::string emit_spec;
    std::uint64_t seed = 0;
    bool demo = false;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic session with ground truth");
    synth_cmd->add_option("--spec", spec_path, "JSON generator spec");
    synth_cmd->add_flag("--demo", demo, "Use the built-in three-level demo spec");
    synth_cmd->add_option("-o,--out", synth_out, "Session file to write")->capture_default_str();
    auto* seed_opt = synth_cmd->add_option("--seed", seed, "Override the spec seed");
    synth_cmd->add_option("--emit-spec", emit_spec, "Also write the effective spec as JSON");

    auto* validate = app.add_subcommand("validate-config", "Check a config and print the effective values");
    std::string validate_path;
    std::vector<std::string> validate_sets;
    validate->add_option("config", validate_path, "Config file");
    validate->add_option("--set", validate_sets, "Override a config key (key=value); repeatable");

    app.add_subcommand("version", "Print the tool version");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    auto resolve_config = [](const std::string& flag) -> std::optional<fs::path> {
        if (!flag.empty()) return fs::path(flag);
        return config_from_env();
    };

    try {
        if (analyze->parsed()) {
            for (const auto& i : inputs) run.inputs.emplace_back(i);
            run.out_dir = out_dir;
            run.config_file = resolve_config(config_path);
            if (!aoi_path.empty()) run.aoi_file = fs::path(aoi_path);
            run.formats = {false, false, false};
            std::stringstream ss(formats);
            for (std::string f; std::getline(ss, f, ',');) {
                f = csv::trim(f);
                if (f == "json") run.formats.json = true;
                else if (f == "md" || f == "markdown") run.formats.markdown = true;
                else if (f == "plots") run.formats.plots = true;
                else {
                    err << "error: unknown format '" << f << "'\n";
                    return kExitUsage;
                }
            }
            for (std::size_t i = 0; i < std::size(kFlagOverrides); ++i)
                if (!flag_values[i].empty()) run.overrides.emplace_back(kFlagOverrides[i].key, flag_values[i]);
            for (const auto& s : sets) run.overrides.push_back(split_assignment(s));
            return cmd_analyze(run, out, err);
        }
        if (synth_cmd->parsed()) {
            if (!spec_path.empty() && demo) {
                err << "error: --spec and --demo are mutually exclusive\n";
                return kExitUsage;
            }
            if (!spec_path.empty()) synth.spec_file = fs::path(spec_path);
            synth.out_file = synth_out;
            if (seed_opt->count() > 0) synth.seed = seed;
            if (!emit_spec.empty()) synth.emit_spec = fs::path(emit_spec);
            return cmd_synth(synth, out, err);
        }
        if (validate->parsed()) {
            std::vector<std::pair<std::string, std::string>> overrides;
            for (const auto& s : validate_sets) overrides.push_back(split_assignment(s));
            return cmd_validate_config(resolve_config(validate_path), overrides, out, err);
        }
        out << tool_version() << "\n";
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}

}  // namespace gazelens
