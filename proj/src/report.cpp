#include "gazelens/report.hpp"

#include "gazelens/csv.hpp"
#include "gazelens/format.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace gazelens {

using nlohmann::json;

namespace {

void q(double& v, int d) { v = quantize(v, d); }

void q(std::optional<double>& v, int d) {
    if (v) *v = quantize(*v, d);
}

void q(Point2& p, int d) {
    p.x() = quantize(p.x(), d);
    p.y() = quantize(p.y(), d);
}

}  // namespace

void quantize_report(SessionReport& report) {
    for (auto& lv : report.per_level) {
        SessionMetrics& m = lv.metrics;
        q(m.hit_rate, 1);
        q(m.attention_scatter, 1);
        q(m.task_relevance, 3);
        q(m.gaze_efficiency, 3);
        q(m.avg_fixation_duration, 1);
        q(m.avg_saccade_amplitude, 1);
        q(m.avg_saccade_velocity, 1);
        q(m.fix_sacc_ratio, 3);
        q(m.scan_path, 1);
        q(lv.profile.task_focus, 1);
        q(lv.profile.attention_control, 1);
        q(lv.profile.movement_efficiency, 1);
        q(lv.profile.scanning_pattern, 1);
        q(lv.trend_score, 1);
        for (auto& f : lv.fixations) {
            q(f.center, 1);
            q(f.dispersion, 1);
        }
        for (auto& s : lv.saccades) {
            q(s.from, 1);
            q(s.to, 1);
            q(s.amplitude, 1);
            q(s.peak_velocity, 1);
        }
    }
    q(report.plan.avg_relevance, 1);
}

std::vector<CrossLevelRow> cross_level_table(std::span<const LevelReport> per_level) {
    std::vector<CrossLevelRow> rows;
    for (const auto& lv : per_level) {
        CrossLevelRow r;
        r.level = lv.level;
        r.fixations = lv.fixations.size();
        r.saccades = lv.saccades.size();
        r.avg_fixation_duration = format_fixed(lv.metrics.avg_fixation_duration, 1);
        r.avg_saccade_amplitude = format_fixed(lv.metrics.avg_saccade_amplitude, 1);
        r.avg_saccade_velocity = format_fixed(lv.metrics.avg_saccade_velocity, 1);
        r.fix_sacc_ratio = r.saccades == 0
                               ? std::string(kUndefinedMarker)
                               : format_fixed(static_cast<double>(r.fixations) / static_cast<double>(r.saccades), 1);
        rows.push_back(std::move(r));
    }
    return rows;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> opt_from(const json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<double>();
}

json point(const Point2& p) { return json::array({p.x(), p.y()}); }

Point2 point_from(const json& j) { return Point2(j.at(0).get<double>(), j.at(1).get<double>()); }

Urgency urgency_from(const std::string& s) {
    if (s == "HIGH") return Urgency::high;
    if (s == "MODERATE") return Urgency::moderate;
    if (s == "LOW") return Urgency::low;
    throw ParseError("unknown urgency '" + s + "'", 0);
}

EventKind kind_from(const std::string& s) {
    if (s == "target") return EventKind::target;
    if (s == "click") return EventKind::click;
    return EventKind::other;
}

json metrics_json(const SessionMetrics& m) {
    return {{"hit_rate", m.hit_rate},
            {"matched", m.matched},
            {"target_count", m.target_count},
            {"no_targets", m.no_targets},
            {"attention_scatter", opt(m.attention_scatter)},
            {"task_relevance", opt(m.task_relevance)},
            {"aoi_transitions", m.aoi_transitions},
            {"gaze_efficiency", opt(m.gaze_efficiency)},
            {"avg_fixation_duration", opt(m.avg_fixation_duration)},
            {"avg_saccade_amplitude", opt(m.avg_saccade_amplitude)},
            {"avg_saccade_velocity", opt(m.avg_saccade_velocity)},
            {"fix_sacc_ratio", opt(m.fix_sacc_ratio)},
            {"scan_path", m.scan_path},
            {"processing_style", m.processing_style},
            {"search_pattern", m.search_pattern},
            {"sample_count", m.sample_count},
            {"fixation_count", m.fixation_count},
            {"saccade_count", m.saccade_count}};
}

SessionMetrics metrics_from(const json& j) {
    SessionMetrics m;
    m.hit_rate = j.at("hit_rate").get<double>();
    m.matched = j.at("matched").get<std::size_t>();
    m.target_count = j.at("target_count").get<std::size_t>();
    m.no_targets = j.at("no_targets").get<bool>();
    m.attention_scatter = opt_from(j.at("attention_scatter"));
    m.task_relevance = opt_from(j.at("task_relevance"));
    m.aoi_transitions = j.at("aoi_transitions").get<std::size_t>();
    m.gaze_efficiency = opt_from(j.at("gaze_efficiency"));
    m.avg_fixation_duration = opt_from(j.at("avg_fixation_duration"));
    m.avg_saccade_amplitude = opt_from(j.at("avg_saccade_amplitude"));
    m.avg_saccade_velocity = opt_from(j.at("avg_saccade_velocity"));
    m.fix_sacc_ratio = opt_from(j.at("fix_sacc_ratio"));
    m.scan_path = j.at("scan_path").get<double>();
    m.processing_style = j.at("processing_style").get<std::string>();
    m.search_pattern = j.at("search_pattern").get<std::string>();
    m.sample_count = j.at("sample_count").get<std::size_t>();
    m.fixation_count = j.at("fixation_count").get<std::size_t>();
    m.saccade_count = j.at("saccade_count").get<std::size_t>();
    return m;
}

json fixation_json(const Fixation& f) {
    return {{"center", point(f.center)},
            {"start", f.start},
            {"end", f.end},
            {"duration", f.duration},
            {"dispersion", f.dispersion},
            {"sample_count", f.sample_count},
            {"dominant_aoi", f.dominant_aoi ? json(*f.dominant_aoi) : json(nullptr)}};
}

Fixation fixation_from(const json& j) {
    Fixation f;
    f.center = point_from(j.at("center"));
    f.start = j.at("start").get<Millis>();
    f.end = j.at("end").get<Millis>();
    f.duration = j.at("duration").get<Millis>();
    f.dispersion = j.at("dispersion").get<double>();
    f.sample_count = j.at("sample_count").get<std::size_t>();
    if (!j.at("dominant_aoi").is_null()) f.dominant_aoi = j.at("dominant_aoi").get<std::string>();
    return f;
}

json saccade_json(const Saccade& s) {
    return {{"from", point(s.from)},
            {"to", point(s.to)},
            {"amplitude", s.amplitude},
            {"peak_velocity", s.peak_velocity},
            {"start", s.start},
            {"end", s.end},
            {"duration", s.duration},
            {"degenerate", s.degenerate}};
}

Saccade saccade_from(const json& j) {
    Saccade s;
    s.from = point_from(j.at("from"));
    s.to = point_from(j.at("to"));
    s.amplitude = j.at("amplitude").get<double>();
    s.peak_velocity = j.at("peak_velocity").get<double>();
    s.start = j.at("start").get<Millis>();
    s.end = j.at("end").get<Millis>();
    s.duration = j.at("duration").get<Millis>();
    s.degenerate = j.at("degenerate").get<bool>();
    return s;
}

json level_json(const LevelReport& lv) {
    json fixations = json::array();
    for (const auto& f : lv.fixations) fixations.push_back(fixation_json(f));
    json saccades = json::array();
    for (const auto& s : lv.saccades) saccades.push_back(saccade_json(s));
    json events = json::array();
    for (const auto& e : lv.events) {
        events.push_back({{"timestamp", e.timestamp}, {"kind", to_string(e.kind)}, {"payload", e.payload}});
    }
    return {{"level", lv.level},
            {"metrics", metrics_json(lv.metrics)},
            {"risk",
             {{"raw_score", lv.risk.raw_score},
              {"display_score", lv.risk.display_score},
              {"factors", lv.risk.factors},
              {"urgency", to_string(lv.risk.urgency)},
              {"notes", lv.risk.notes}}},
            {"profile",
             {{"task_focus", lv.profile.task_focus},
              {"attention_control", lv.profile.attention_control},
              {"movement_efficiency", lv.profile.movement_efficiency},
              {"scanning_pattern", lv.profile.scanning_pattern},
              {"flags", lv.profile.flags}}},
            {"performance", lv.performance},
            {"trend_score", lv.trend_score},
            {"fixations", std::move(fixations)},
            {"saccades", std::move(saccades)},
            {"events", std::move(events)}};
}

LevelReport level_from(const json& j) {
    LevelReport lv;
    lv.level = j.at("level").get<LevelId>();
    lv.metrics = metrics_from(j.at("metrics"));
    const json& r = j.at("risk");
    lv.risk.raw_score = r.at("raw_score").get<int>();
    lv.risk.display_score = r.at("display_score").get<int>();
    lv.risk.factors = r.at("factors").get<std::vector<std::string>>();
    lv.risk.urgency = urgency_from(r.at("urgency").get<std::string>());
    lv.risk.notes = r.at("notes").get<std::vector<std::string>>();
    const json& p = j.at("profile");
    lv.profile.task_focus = p.at("task_focus").get<double>();
    lv.profile.attention_control = p.at("attention_control").get<double>();
    lv.profile.movement_efficiency = p.at("movement_efficiency").get<double>();
    lv.profile.scanning_pattern = p.at("scanning_pattern").get<double>();
    lv.profile.flags = p.at("flags").get<std::vector<std::string>>();
    lv.performance = j.at("performance").get<std::string>();
    lv.trend_score = j.at("trend_score").get<double>();
    for (const auto& f : j.at("fixations")) lv.fixations.push_back(fixation_from(f));
    for (const auto& s : j.at("saccades")) lv.saccades.push_back(saccade_from(s));
    for (const auto& e : j.at("events")) {
        lv.events.push_back(TimelineEvent{e.at("timestamp").get<Millis>(), kind_from(e.at("kind").get<std::string>()),
                                          e.at("payload").get<std::string>(), lv.level});
    }
    return lv;
}

}  // namespace

json to_json(const SessionReport& report) {
    json levels = json::array();
    for (const auto& lv : report.per_level) levels.push_back(level_json(lv));
    json failed = json::array();
    for (const auto& f : report.failed_levels) failed.push_back({{"level", f.level}, {"reason", f.reason}});
    json table = json::array();
    for (const auto& row : cross_level_table(report.per_level)) {
        table.push_back({{"level", row.level},
                         {"fixations", row.fixations},
                         {"saccades", row.saccades},
                         {"avg_fixation_duration", row.avg_fixation_duration},
                         {"avg_saccade_amplitude", row.avg_saccade_amplitude},
                         {"avg_saccade_velocity", row.avg_saccade_velocity},
                         {"fix_sacc_ratio", row.fix_sacc_ratio}});
    }
    json config = json::object();
    for (const auto& [k, v] : report.config_echo) config[k] = v;
    return {{"student_id", report.student_id},
            {"tool_version", report.tool_version},
            {"config", std::move(config)},
            {"input",
             {{"sample_count", report.sample_count},
              {"dropped_count", report.dropped_count},
              {"diverted_count", report.diverted_count}}},
            {"diagnostics", report.diagnostics},
            {"levels", std::move(levels)},
            {"failed_levels", std::move(failed)},
            {"cross_level_table", std::move(table)},
            {"plan",
             {{"avg_relevance", report.plan.avg_relevance},
              {"max_urgency", to_string(report.plan.max_urgency)},
              {"interventions", report.plan.interventions},
              {"audience_notes",
               {{"student", report.plan.audience_notes.student},
                {"teacher", report.plan.audience_notes.teacher},
                {"specialist", report.plan.audience_notes.specialist}}}}}};
}

SessionReport report_from_json(const json& j) {
    SessionReport r;
    try {
        r.student_id = j.at("student_id").get<std::string>();
        r.tool_version = j.at("tool_version").get<std::string>();
        for (const auto& [k, v] : j.at("config").items()) r.config_echo[k] = v.get<std::string>();
        const json& in = j.at("input");
        r.sample_count = in.at("sample_count").get<std::size_t>();
        r.dropped_count = in.at("dropped_count").get<std::size_t>();
        r.diverted_count = in.at("diverted_count").get<std::size_t>();
        r.diagnostics = j.at("diagnostics").get<std::vector<std::string>>();
        for (const auto& lv : j.at("levels")) r.per_level.push_back(level_from(lv));
        for (const auto& f : j.at("failed_levels")) {
            r.failed_levels.push_back({f.at("level").get<LevelId>(), f.at("reason").get<std::string>()});
        }
        const json& p = j.at("plan");
        r.plan.avg_relevance = p.at("avg_relevance").get<double>();
        r.plan.max_urgency = urgency_from(p.at("max_urgency").get<std::string>());
        r.plan.interventions = p.at("interventions").get<std::vector<std::string>>();
        const json& notes = p.at("audience_notes");
        r.plan.audience_notes = {notes.at("student").get<std::string>(), notes.at("teacher").get<std::string>(),
                                 notes.at("specialist").get<std::string>()};
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed report: ") + e.what(), 0);
    }
    return r;
}

std::string render_json(const SessionReport& report) { return to_json(report).dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Markdown

std::string render_markdown(const SessionReport& report) {
    std::ostringstream md;
    md << "# Gaze analysis report: " << report.student_id << "\n\n";
    md << "Tool version: " << report.tool_version << "  \n";
    md << "Gaze samples analyzed: " << report.sample_count << " (dropped " << report.dropped_count
       << ", event-only rows " << report.diverted_count << ")\n\n";

    md << "## Cross-level comparison\n\n";
    md << "| Level | Fixations | Saccades | Avg fixation duration (ms) | Avg saccade amplitude (px) | "
          "Avg saccade velocity (px/s) | Fix/sacc ratio |\n";
    md << "|---|---|---|---|---|---|---|\n";
    for (const auto& row : cross_level_table(report.per_level)) {
        md << "| " << row.level << " | " << row.fixations << " | " << row.saccades << " | "
           << row.avg_fixation_duration << " | " << row.avg_saccade_amplitude << " | " << row.avg_saccade_velocity
           << " | " << row.fix_sacc_ratio << " |\n";
    }
    md << "\n";

    md << "## For the student\n\n" << report.plan.audience_notes.student << "\n";

    md << "## For the teacher\n\n" << report.plan.audience_notes.teacher << "\n";
    md << "### Risk factors by level\n\n";
    for (const auto& lv : report.per_level) {
        md << "- Level " << lv.level << " (" << to_string(lv.risk.urgency) << ", " << lv.risk.display_score
           << "/10):";
        if (lv.risk.factors.empty()) md << " none";
        md << "\n";
        for (const auto& f : lv.risk.factors) md << "  - " << f << "\n";
    }
    md << "\n### Recommended interventions\n\n";
    if (report.plan.interventions.empty()) md << "- none\n";
    for (const auto& i : report.plan.interventions) md << "- " << i << "\n";
    md << "\n";

    md << "## For specialists\n\n" << report.plan.audience_notes.specialist << "\n";

    md << "## Level details\n\n";
    for (const auto& lv : report.per_level) {
        const SessionMetrics& m = lv.metrics;
        md << "### Level " << lv.level << "\n\n";
        md << "| Measure | Value |\n|---|---|\n";
        md << "| Performance | " << lv.performance << " |\n";
        md << "| Hit rate (%) | " << format_fixed(m.hit_rate, 1) << (m.no_targets ? " (no targets)" : "") << " |\n";
        md << "| Targets matched | " << m.matched << " / " << m.target_count << " |\n";
        md << "| Task relevance | " << format_fixed(m.task_relevance, 3) << " |\n";
        md << "| Attention scatter (px) | " << format_fixed(m.attention_scatter, 1) << " |\n";
        md << "| AOI transitions | " << m.aoi_transitions << " |\n";
        md << "| Gaze efficiency | " << format_fixed(m.gaze_efficiency, 3) << " |\n";
        md << "| Scan path (px) | " << format_fixed(m.scan_path, 1) << " |\n";
        md << "| Processing style | " << m.processing_style << " |\n";
        md << "| Search pattern | " << m.search_pattern << " |\n";
        md << "| Risk score | " << lv.risk.raw_score << " (display " << lv.risk.display_score << "/10, "
           << to_string(lv.risk.urgency) << ") |\n";
        md << "| Task focus | " << format_fixed(lv.profile.task_focus, 1) << " |\n";
        md << "| Attention control | " << format_fixed(lv.profile.attention_control, 1) << " |\n";
        md << "| Movement efficiency | " << format_fixed(lv.profile.movement_efficiency, 1) << " |\n";
        md << "| Scanning pattern | " << format_fixed(lv.profile.scanning_pattern, 1) << " |\n";
        md << "| Trend score | " << format_fixed(lv.trend_score, 1) << " |\n\n";
    }

    if (!report.failed_levels.empty()) {
        md << "## Levels not analyzed\n\n";
        for (const auto& f : report.failed_levels) md << "- Level " << f.level << ": " << f.reason << "\n";
        md << "\n";
    }

    md << "## Notes\n\n";
    md << "- \"" << performance::kNeedsSupport << "\" is the same label some charts show as \""
       << performance::kNeedsSupportAlias << "\".\n";
    md << "- Trend score is a local composite: the mean of task focus, attention control, movement efficiency "
          "and (100 - scanning pattern).\n";
    md << "- " << kUndefinedMarker << " marks a measure that is undefined for the level.\n";
    for (const auto& d : report.diagnostics) md << "- " << d << "\n";
    md << "\n## Configuration\n\n```text\n";
    for (const auto& [k, v] : report.config_echo) md << k << " = " << v << "\n";
    md << "```\n";
    return md.str();
}

// ---------------------------------------------------------------------------
// Plot series

std::vector<HistogramBin> histogram(std::span<const double> values, double width) {
    std::vector<HistogramBin> bins;
    if (values.empty() || !(width > 0.0)) return bins;
    const double max = *std::max_element(values.begin(), values.end());
    const auto count = static_cast<std::size_t>(std::floor(std::max(0.0, max) / width)) + 1;
    bins.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        bins[i].start = static_cast<double>(i) * width;
        bins[i].end = static_cast<double>(i + 1) * width;
    }
    for (double v : values) {
        const auto idx = std::min(count - 1, static_cast<std::size_t>(std::floor(std::max(0.0, v) / width)));
        ++bins[idx].count;
    }
    return bins;
}

namespace {

class Writer {
public:
    explicit Writer(std::vector<std::filesystem::path>& written) : written_(written) {}

    void write(const std::filesystem::path& path, const std::string& content) {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open output file", path.string());
        out << content;
        out.close();
        if (!out) throw IoError("failed writing output file", path.string());
        written_.push_back(path);
    }

private:
    std::vector<std::filesystem::path>& written_;
};

std::string histogram_csv(std::span<const double> values, double width) {
    std::ostringstream out;
    out << "bin_start,bin_end,count\n";
    for (const auto& b : histogram(values, width)) {
        out << format_fixed(b.start, 1) << ',' << format_fixed(b.end, 1) << ',' << b.count << '\n';
    }
    return out.str();
}

std::string cell(const std::optional<double>& v, int decimals) { return v ? format_fixed(*v, decimals) : ""; }

std::string timeline_csv(const LevelReport& lv) {
    struct Row {
        Millis t;
        int rank;
        std::string kind;
        Millis duration;
    };
    std::vector<Row> rows;
    for (const auto& f : lv.fixations) rows.push_back({f.start, 0, "fixation", f.duration});
    for (const auto& s : lv.saccades) rows.push_back({s.start, 1, "saccade", s.duration});
    for (const auto& e : lv.events) rows.push_back({e.timestamp, 2, to_string(e.kind), 0});
    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) { return a.t != b.t ? a.t < b.t : a.rank < b.rank; });
    std::ostringstream out;
    out << "timestamp,kind,duration\n";
    for (const auto& r : rows) out << r.t << ',' << r.kind << ',' << r.duration << '\n';
    return out.str();
}

}  // namespace

std::vector<std::filesystem::path> emit_reports(const SessionReport& report, const ReportFormats& formats,
                                                const std::filesystem::path& out_dir, const HistogramBins& bins,
                                                const DebugDump* dump) {
    std::vector<std::filesystem::path> written;
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec || !std::filesystem::is_directory(out_dir)) throw IoError("cannot create output directory", out_dir.string());
    Writer w(written);

    if (formats.json) w.write(out_dir / "report.json", render_json(report));
    if (formats.markdown) w.write(out_dir / "report.md", render_markdown(report));
    if (!formats.plots) return written;

    const auto plots = out_dir / "plots";
    std::filesystem::create_directories(plots, ec);
    if (ec || !std::filesystem::is_directory(plots)) throw IoError("cannot create plot directory", plots.string());

    std::ostringstream levels;
    levels << "level,fixations,saccades,avg_fixation_duration,task_relevance_pct,attention_scatter,aoi_transitions,"
              "avg_saccade_velocity,gaze_efficiency,hit_rate,trend_score,performance\n";
    std::ostringstream risk;
    risk << "level,raw_score,display_score,urgency,task_focus,attention_control,movement_efficiency,"
            "scanning_pattern\n";

    for (const auto& lv : report.per_level) {
        const std::string suffix = "_L" + std::to_string(lv.level) + ".csv";
        const SessionMetrics& m = lv.metrics;

        std::ostringstream fix;
        fix << "x,y,duration\n";
        for (const auto& f : lv.fixations) {
            fix << format_fixed(f.center.x(), 1) << ',' << format_fixed(f.center.y(), 1) << ',' << f.duration << '\n';
        }
        w.write(plots / ("fixations" + suffix), fix.str());

        std::ostringstream sac;
        sac << "x1,y1,x2,y2,amplitude,peak_velocity\n";
        for (const auto& s : lv.saccades) {
            sac << format_fixed(s.from.x(), 1) << ',' << format_fixed(s.from.y(), 1) << ',' << format_fixed(s.to.x(), 1)
                << ',' << format_fixed(s.to.y(), 1) << ',' << format_fixed(s.amplitude, 1) << ','
                << format_fixed(s.peak_velocity, 1) << '\n';
        }
        w.write(plots / ("saccades" + suffix), sac.str());

        std::ostringstream path;
        path << "index,x,y\n";
        for (std::size_t i = 0; i < lv.fixations.size(); ++i) {
            path << i + 1 << ',' << format_fixed(lv.fixations[i].center.x(), 1) << ','
                 << format_fixed(lv.fixations[i].center.y(), 1) << '\n';
        }
        w.write(plots / ("scanpath" + suffix), path.str());

        w.write(plots / ("timeline" + suffix), timeline_csv(lv));

        std::vector<double> durations;
        for (const auto& f : lv.fixations) durations.push_back(static_cast<double>(f.duration));
        std::vector<double> amplitudes;
        std::vector<double> velocities;
        for (const auto& s : lv.saccades) {
            amplitudes.push_back(s.amplitude);
            velocities.push_back(s.peak_velocity);
        }
        w.write(plots / ("hist_fixation_duration" + suffix), histogram_csv(durations, bins.fixation_duration_ms));
        w.write(plots / ("hist_saccade_amplitude" + suffix), histogram_csv(amplitudes, bins.saccade_amplitude_px));
        w.write(plots / ("hist_saccade_velocity" + suffix), histogram_csv(velocities, bins.saccade_velocity_pxs));

        levels << lv.level << ',' << m.fixation_count << ',' << m.saccade_count << ','
               << cell(m.avg_fixation_duration, 1) << ','
               << cell(m.task_relevance ? std::optional<double>(*m.task_relevance * 100.0) : std::nullopt, 1) << ','
               << cell(m.attention_scatter, 1) << ',' << m.aoi_transitions << ',' << cell(m.avg_saccade_velocity, 1)
               << ',' << cell(m.gaze_efficiency, 3) << ',' << format_fixed(m.hit_rate, 1) << ','
               << format_fixed(lv.trend_score, 1) << ',' << csv::escape(lv.performance) << '\n';
        risk << lv.level << ',' << lv.risk.raw_score << ',' << lv.risk.display_score << ','
             << to_string(lv.risk.urgency) << ',' << format_fixed(lv.profile.task_focus, 1) << ','
             << format_fixed(lv.profile.attention_control, 1) << ',' << format_fixed(lv.profile.movement_efficiency, 1)
             << ',' << format_fixed(lv.profile.scanning_pattern, 1) << '\n';

        if (dump) {
            if (auto it = dump->samples.find(lv.level); it != dump->samples.end()) {
                std::ostringstream trace;
                trace << "index,timestamp,x,y,velocity,basic_label,cluster\n";
                for (const auto& t : it->second) {
                    trace << t.index << ',' << t.timestamp << ',' << format_fixed(t.pos.x(), 3) << ','
                          << format_fixed(t.pos.y(), 3) << ',' << format_fixed(t.velocity, 3) << ',' << t.basic_label
                          << ',' << t.cluster << '\n';
                }
                w.write(plots / ("samples" + suffix), trace.str());
            }
        }
    }
    w.write(plots / "levels.csv", levels.str());
    w.write(plots / "risk.csv", risk.str());
    return written;
}

}  // namespace gazelens
