#include "gazelens/synth.hpp"

#include "gazelens/csv.hpp"
#include "gazelens/format.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>

namespace gazelens {

namespace {

using nlohmann::json;

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::size_t index(std::size_t lo, std::size_t hi) {
        return lo + static_cast<std::size_t>(uniform() * static_cast<double>(hi - lo + 1));
    }

    /// Standard normal truncated to [-3, 3].
    double gaussian() {
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
        return std::clamp(z, -3.0, 3.0);
    }

    Point2 in_disc(double radius) {
        const double r = radius * std::sqrt(uniform());
        const double theta = 2.0 * std::numbers::pi * uniform();
        return Point2(r * std::cos(theta), r * std::sin(theta));
    }

private:
    std::mt19937_64 engine_;
};

Point2 quantize3(const Point2& p) { return Point2(quantize(p.x(), 3), quantize(p.y(), 3)); }

}  // namespace

std::size_t LevelTruth::recoverable_count() const {
    return static_cast<std::size_t>(
        std::count_if(fixations.begin(), fixations.end(), [](const PlantedFixation& f) { return f.recoverable; }));
}

void SynthSpec::validate() const {
    try {
        screen.validate();
    } catch (const ConfigError& e) {
        throw SpecError(e.what());
    }
    if (interval <= 0) throw SpecError("sampling interval must be positive");
    if (!(jump_velocity > 0.0)) throw SpecError("jump velocity must be positive");
    if (!(noise_sigma >= 0.0)) throw SpecError("noise sigma must be non-negative");
    if (level_gap < 0) throw SpecError("level gap must be non-negative");
    if (match.min_latency < 0 || match.min_latency >= match.max_latency) throw SpecError("invalid match window");
    for (std::size_t i = 0; i < levels.size(); ++i) {
        const SynthLevel& lv = levels[i];
        if (i > 0 && lv.level <= levels[i - 1].level) throw SpecError("level ids must be strictly increasing");
        for (const auto& c : lv.clusters) {
            if (c.samples == 0) throw SpecError("cluster needs at least one sample");
            if (!(c.radius >= 0.0)) throw SpecError("cluster radius must be non-negative");
        }
        for (const auto& t : lv.trials) {
            if (t.target_ms < 0) throw SpecError("trial target time must be non-negative");
            if (t.click_latency && *t.click_latency < 0) throw SpecError("click latency must be non-negative");
        }
    }
    for (const auto& a : aois) {
        if (!(a.w > 0.0) || !(a.h > 0.0)) throw SpecError("AOI '" + a.name + "' must have a positive size");
    }
}

SynthSession generate_session(const SynthSpec& spec, const DetectionConfig& detection) {
    spec.validate();
    Rng rng(spec.seed);
    SynthSession out;
    CleanSession& s = out.session;
    s.screen = spec.screen;
    s.aoi_map = make_aoi_map(spec.aois, spec.screen, &s.diag);

    auto check = [&](const Point2& p, LevelId level) {
        if (!spec.screen.contains(p) || p.isZero(0.0)) {
            throw SpecError("level " + std::to_string(level) + " places a gaze sample outside the screen");
        }
    };

    Millis level_start = 0;
    for (const SynthLevel& lv : spec.levels) {
        LevelTruth truth;
        truth.level = lv.level;
        std::optional<Point2> last_pos;
        Millis last_t = level_start;
        Millis level_end = level_start;

        for (const SynthCluster& c : lv.clusters) {
            std::vector<Point2> pts;
            pts.reserve(c.samples);
            for (std::size_t j = 0; j < c.samples; ++j) {
                Point2 p = c.center + rng.in_disc(c.radius);
                if (spec.noise_sigma > 0.0) p += Point2(rng.gaussian(), rng.gaussian()) * spec.noise_sigma;
                pts.push_back(quantize3(p));
            }

            Millis first_t = level_start;
            if (last_pos) {
                const double length = (pts.front() - *last_pos).norm();
                const double max_step = spec.jump_velocity * static_cast<double>(spec.interval) / 1000.0;
                const auto steps = std::max<long long>(1, static_cast<long long>(std::ceil(length / max_step)));
                for (long long k = 1; k < steps; ++k) {
                    const Point2 p = quantize3(*last_pos + (pts.front() - *last_pos) * (static_cast<double>(k) / static_cast<double>(steps)));
                    check(p, lv.level);
                    s.samples.push_back(GazeSample{last_t + k * spec.interval, p, lv.level, {}});
                }
                first_t = last_t + steps * spec.interval;
                truth.saccades.push_back(PlantedSaccade{lv.level, *last_pos, pts.front(), last_t, first_t});
            }

            Point2 sum = Point2::Zero();
            for (std::size_t j = 0; j < pts.size(); ++j) {
                check(pts[j], lv.level);
                s.samples.push_back(GazeSample{first_t + static_cast<Millis>(j) * spec.interval, pts[j], lv.level, {}});
                sum += pts[j];
            }
            PlantedFixation f;
            f.level = lv.level;
            f.center = c.center;
            f.sample_mean = sum / static_cast<double>(pts.size());
            f.start = first_t;
            f.end = first_t + c.dwell(spec.interval);
            f.samples = c.samples;
            f.recoverable = c.samples >= detection.min_cluster_size && f.end - f.start >= detection.min_duration;
            truth.fixations.push_back(f);
            last_pos = pts.back();
            last_t = f.end;
            level_end = std::max(level_end, last_t);
        }

        std::vector<TimelineEvent> events;
        for (const SynthTrial& t : lv.trials) {
            const Millis target = level_start + t.target_ms;
            events.push_back(TimelineEvent{target, EventKind::target, "Target Spawn", lv.level});
            ++truth.targets;
            if (t.click_latency) {
                events.push_back(TimelineEvent{target + *t.click_latency, EventKind::click, "Picked Trash", lv.level});
                if (*t.click_latency >= spec.match.min_latency && *t.click_latency <= spec.match.max_latency) {
                    ++truth.intended_matches;
                }
            }
        }
        std::stable_sort(events.begin(), events.end(),
                         [](const TimelineEvent& a, const TimelineEvent& b) { return a.timestamp < b.timestamp; });
        for (const auto& e : events) level_end = std::max(level_end, e.timestamp);
        s.events.insert(s.events.end(), events.begin(), events.end());
        s.diverted_count += events.size();
        if (truth.targets > 0) {
            truth.intended_hit_rate =
                static_cast<double>(truth.intended_matches) / static_cast<double>(truth.targets) * 100.0;
        }

        s.levels.push_back(lv.level);
        out.truth.levels.push_back(std::move(truth));
        level_start = level_end + spec.level_gap;
    }

    out.truth.sample_aoi.reserve(s.samples.size());
    for (const auto& g : s.samples) out.truth.sample_aoi.push_back(map_to_aoi(g.pos, s.aoi_map));
    return out;
}

void write_session_csv(std::ostream& out, const SynthSession& synth) {
    const CleanSession& s = synth.session;
    out << "timestamp_ms,gaze,event,level,aoi_name,aoi_x,aoi_y,aoi_w,aoi_h,aoi_role\n";
    for (const auto& a : s.aoi_map.aois()) {
        out << ",,,," << csv::escape(a.name) << ',' << format_fixed(a.x, 3) << ',' << format_fixed(a.y, 3) << ','
            << format_fixed(a.w, 3) << ',' << format_fixed(a.h, 3) << ',' << (a.is_bin ? "bin" : "other") << '\n';
    }
    std::size_t gi = 0;
    std::size_t ei = 0;
    while (gi < s.samples.size() || ei < s.events.size()) {
        const bool take_gaze =
            ei == s.events.size() || (gi < s.samples.size() && s.samples[gi].timestamp <= s.events[ei].timestamp);
        if (take_gaze) {
            const GazeSample& g = s.samples[gi++];
            out << g.timestamp << ",\"(" << format_fixed(g.pos.x(), 3) << ", " << format_fixed(g.pos.y(), 3) << ")\","
                << csv::escape(g.event) << ',' << g.level << ",,,,,,\n";
        } else {
            const TimelineEvent& e = s.events[ei++];
            out << e.timestamp << ",," << csv::escape(e.payload) << ',' << e.level << ",,,,,,\n";
        }
    }
}

namespace {

json point_json(const Point2& p) { return json::array({quantize(p.x(), 3), quantize(p.y(), 3)}); }

Point2 point_from(const json& j) {
    if (!j.is_array() || j.size() != 2) throw SpecError("point must be a two-element array");
    return Point2(j[0].get<double>(), j[1].get<double>());
}

}  // namespace

void write_ground_truth(std::ostream& out, const SynthSpec& spec, const GroundTruth& truth) {
    json j;
    j["seed"] = spec.seed;
    j["interval_ms"] = spec.interval;
    json levels = json::array();
    for (const auto& lt : truth.levels) {
        json l;
        l["level"] = lt.level;
        l["targets"] = lt.targets;
        l["intended_matches"] = lt.intended_matches;
        l["intended_hit_rate"] = quantize(lt.intended_hit_rate, 3);
        l["recoverable_fixations"] = lt.recoverable_count();
        json fx = json::array();
        for (const auto& f : lt.fixations) {
            fx.push_back({{"center", point_json(f.center)},
                          {"sample_mean", point_json(f.sample_mean)},
                          {"start", f.start},
                          {"end", f.end},
                          {"samples", f.samples},
                          {"recoverable", f.recoverable}});
        }
        l["fixations"] = std::move(fx);
        json sx = json::array();
        for (const auto& s : lt.saccades) {
            sx.push_back({{"from", point_json(s.from)}, {"to", point_json(s.to)}, {"start", s.start}, {"end", s.end}});
        }
        l["saccades"] = std::move(sx);
        levels.push_back(std::move(l));
    }
    j["levels"] = std::move(levels);
    json labels = json::array();
    for (const auto& a : truth.sample_aoi) labels.push_back(a ? json(*a) : json(nullptr));
    j["sample_aoi"] = std::move(labels);
    out << j.dump(2) << '\n';
}

SynthSpec parse_synth_spec(std::istream& in) {
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw SpecError(std::string("synth spec is not valid JSON: ") + e.what());
    }
    SynthSpec spec;
    try {
        spec.seed = j.value("seed", spec.seed);
        spec.interval = j.value("interval_ms", spec.interval);
        spec.jump_velocity = j.value("jump_velocity", spec.jump_velocity);
        spec.noise_sigma = j.value("noise_sigma", spec.noise_sigma);
        spec.level_gap = j.value("level_gap_ms", spec.level_gap);
        if (j.contains("screen")) {
            spec.screen.width = j["screen"].value("width", spec.screen.width);
            spec.screen.height = j["screen"].value("height", spec.screen.height);
            spec.screen.aoi_tolerance = j["screen"].value("aoi_tolerance", spec.screen.aoi_tolerance);
            spec.screen.min_aoi_size = j["screen"].value("min_aoi_size", spec.screen.min_aoi_size);
        }
        if (j.contains("match")) {
            spec.match.min_latency = j["match"].value("min_latency", spec.match.min_latency);
            spec.match.max_latency = j["match"].value("max_latency", spec.match.max_latency);
        }
        for (const auto& a : j.value("aois", json::array())) {
            AoiRect r;
            r.name = a.at("name").get<std::string>();
            r.x = a.at("x").get<double>();
            r.y = a.at("y").get<double>();
            r.w = a.at("w").get<double>();
            r.h = a.at("h").get<double>();
            r.is_bin = a.value("role", std::string("bin")) == "bin";
            spec.aois.push_back(std::move(r));
        }
        for (const auto& l : j.value("levels", json::array())) {
            SynthLevel lv;
            lv.level = l.value("level", static_cast<LevelId>(spec.levels.size() + 1));
            for (const auto& c : l.value("clusters", json::array())) {
                SynthCluster cl;
                cl.center = point_from(c.at("center"));
                cl.radius = c.value("radius", 0.0);
                const bool has_samples = c.contains("samples");
                if (has_samples) cl.samples = c.at("samples").get<std::size_t>();
                if (c.contains("dwell_ms")) {
                    const auto dwell = c.at("dwell_ms").get<Millis>();
                    if (dwell < 0) throw SpecError("dwell_ms must be non-negative");
                    if (!has_samples) {
                        if (dwell % spec.interval != 0) {
                            throw SpecError("dwell_ms " + std::to_string(dwell) + " is not a multiple of the sampling interval");
                        }
                        cl.samples = static_cast<std::size_t>(dwell / spec.interval) + 1;
                    } else if (cl.dwell(spec.interval) != dwell) {
                        throw SpecError("infeasible cluster: " + std::to_string(cl.samples) + " samples at " +
                                        std::to_string(spec.interval) + " ms span " +
                                        std::to_string(cl.dwell(spec.interval)) + " ms, not dwell_ms " +
                                        std::to_string(dwell));
                    }
                }
                lv.clusters.push_back(cl);
            }
            for (const auto& t : l.value("trials", json::array())) {
                SynthTrial tr;
                tr.target_ms = t.at("target_ms").get<Millis>();
                if (t.contains("latency_ms") && !t.at("latency_ms").is_null()) tr.click_latency = t.at("latency_ms").get<Millis>();
                lv.trials.push_back(tr);
            }
            spec.levels.push_back(std::move(lv));
        }
    } catch (const json::exception& e) {
        throw SpecError(std::string("malformed synth spec: ") + e.what());
    }
    spec.validate();
    return spec;
}

std::string synth_spec_to_json(const SynthSpec& spec) {
    json j;
    j["seed"] = spec.seed;
    j["interval_ms"] = spec.interval;
    j["jump_velocity"] = spec.jump_velocity;
    j["noise_sigma"] = spec.noise_sigma;
    j["level_gap_ms"] = spec.level_gap;
    j["screen"] = {{"width", spec.screen.width},
                   {"height", spec.screen.height},
                   {"aoi_tolerance", spec.screen.aoi_tolerance},
                   {"min_aoi_size", spec.screen.min_aoi_size}};
    j["match"] = {{"min_latency", spec.match.min_latency}, {"max_latency", spec.match.max_latency}};
    json aois = json::array();
    for (const auto& a : spec.aois) {
        aois.push_back({{"name", a.name}, {"x", a.x}, {"y", a.y}, {"w", a.w}, {"h", a.h}, {"role", a.is_bin ? "bin" : "other"}});
    }
    j["aois"] = std::move(aois);
    json levels = json::array();
    for (const auto& lv : spec.levels) {
        json clusters = json::array();
        for (const auto& c : lv.clusters) {
            clusters.push_back({{"center", {c.center.x(), c.center.y()}}, {"radius", c.radius}, {"samples", c.samples}});
        }
        json trials = json::array();
        for (const auto& t : lv.trials) {
            trials.push_back({{"target_ms", t.target_ms},
                              {"latency_ms", t.click_latency ? json(*t.click_latency) : json(nullptr)}});
        }
        levels.push_back({{"level", lv.level}, {"clusters", std::move(clusters)}, {"trials", std::move(trials)}});
    }
    j["levels"] = std::move(levels);
    return j.dump(2) + "\n";
}

SynthSpec demo_spec(std::uint64_t seed) {
    SynthSpec spec;
    spec.seed = seed;
    spec.interval = 20;
    spec.jump_velocity = 4000.0;
    spec.noise_sigma = 0.3;
    spec.aois = {
        {"glass_bin", 200, 820, 200, 200, true},
        {"paper_bin", 650, 820, 200, 200, true},
        {"plastic_bin", 1100, 820, 200, 200, true},
        {"organic_bin", 1550, 820, 200, 200, true},
        {"score_panel", 860, 30, 200, 40, false},
    };
    auto cluster = [](double x, double y, std::size_t n) { return SynthCluster{Point2(x, y), 1.0, n}; };

    SynthLevel l1;
    l1.level = 1;
    l1.clusters = {cluster(960, 400, 12), cluster(300, 920, 20), cluster(960, 60, 8),  cluster(750, 900, 15),
                   cluster(1200, 920, 30), cluster(500, 300, 4), cluster(1650, 900, 10), cluster(1400, 500, 18)};
    l1.trials = {{0, 900}, {6000, 1500}, {12000, 2500}, {18000, std::nullopt}};

    SynthLevel l2;
    l2.level = 2;
    l2.clusters = {cluster(960, 540, 25), cluster(1650, 930, 40), cluster(300, 300, 6),
                   cluster(1200, 880, 12), cluster(700, 150, 3), cluster(750, 930, 22)};
    l2.trials = {{0, 700}, {6000, 4000}, {12000, 400}};

    SynthLevel l3;
    l3.level = 3;
    l3.clusters = {cluster(1650, 920, 60), cluster(960, 540, 9), cluster(1200, 900, 35), cluster(300, 150, 2)};
    l3.trials = {{0, 1200}, {6000, 5600}};

    spec.levels = {l1, l2, l3};
    return spec;
}

SynthSpec random_spec(std::uint64_t seed, std::size_t clusters, const DetectionConfig& detection) {
    Rng rng(seed ^ 0x9E3779B97F4A7C15ULL);
    SynthSpec spec;
    spec.seed = seed;
    spec.interval = 20;
    spec.jump_velocity = 4000.0;
    const double separation = 2.0 * detection.spatial_threshold + 20.0;
    const double margin = 60.0;

    SynthLevel lv;
    lv.level = 1;
    std::vector<Point2> centers;
    while (centers.size() < clusters) {
        const Point2 c(rng.uniform(margin, spec.screen.width - margin), rng.uniform(margin, spec.screen.height - margin));
        const bool clear = std::all_of(centers.begin(), centers.end(),
                                       [&](const Point2& o) { return (o - c).norm() > separation; });
        if (clear) centers.push_back(c);
    }
    for (const auto& c : centers) {
        // Sizes span both sides of the detection minima.
        lv.clusters.push_back(SynthCluster{quantize3(c), rng.uniform(0.0, 2.0), rng.index(1, 15)});
    }
    spec.levels.push_back(std::move(lv));
    return spec;
}

std::vector<MovementKind> oracle_ivt(std::span<const GazeSample> samples, double threshold) {
    std::vector<MovementKind> labels;
    for (std::size_t i = 1; i < samples.size(); ++i) {
        const double dx = samples[i].pos.x() - samples[i - 1].pos.x();
        const double dy = samples[i].pos.y() - samples[i - 1].pos.y();
        const double seconds = static_cast<double>(samples[i].timestamp - samples[i - 1].timestamp) / 1000.0;
        const double v = std::sqrt(dx * dx + dy * dy) / seconds;  // 0/0 is NaN: not <= threshold
        labels.push_back(v <= threshold ? MovementKind::fixation : MovementKind::saccade);
    }
    return labels;
}

}  // namespace gazelens
