#include "gazelens/config.hpp"

#include "gazelens/csv.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <istream>

namespace gazelens {

namespace {

std::string number_text(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

double parse_double(std::string_view key, std::string_view text) {
    const std::string t = csv::trim(text);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
        throw ConfigError("'" + std::string(key) + "' expects a number, got '" + std::string(text) + "'");
    }
    return v;
}

long long parse_int(std::string_view key, std::string_view text) {
    const std::string t = csv::trim(text);
    long long v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
        throw ConfigError("'" + std::string(key) + "' expects an integer, got '" + std::string(text) + "'");
    }
    return v;
}

std::vector<std::string> parse_list(std::string_view text) {
    std::vector<std::string> out;
    for (auto& item : csv::split_row(text, ',')) {
        auto t = csv::trim(item);
        if (!t.empty()) out.push_back(std::move(t));
    }
    return out;
}

std::string list_text(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ',';
        out += items[i];
    }
    return out;
}

struct Field {
    std::string key;
    std::function<std::string(const AnalysisConfig&)> get;
    std::function<void(AnalysisConfig&, std::string_view)> set;
};

template <typename Access>
Field real(std::string key, Access access) {
    return {key,
            [access](const AnalysisConfig& c) { return number_text(access(const_cast<AnalysisConfig&>(c))); },
            [access, key](AnalysisConfig& c, std::string_view v) { access(c) = parse_double(key, v); }};
}

template <typename Access>
Field integer(std::string key, Access access) {
    return {key,
            [access](const AnalysisConfig& c) { return std::to_string(access(const_cast<AnalysisConfig&>(c))); },
            [access, key](AnalysisConfig& c, std::string_view v) {
                using T = std::remove_reference_t<decltype(access(c))>;
                const long long n = parse_int(key, v);
                if constexpr (std::is_unsigned_v<T>) {
                    if (n < 0) throw ConfigError("'" + key + "' must be non-negative");
                }
                access(c) = static_cast<T>(n);
            }};
}

template <typename Access>
Field text(std::string key, Access access) {
    return {key, [access](const AnalysisConfig& c) { return access(const_cast<AnalysisConfig&>(c)); },
            [access](AnalysisConfig& c, std::string_view v) { access(c) = csv::trim(v); }};
}

template <typename Access>
Field list(std::string key, Access access) {
    return {key, [access](const AnalysisConfig& c) { return list_text(access(const_cast<AnalysisConfig&>(c))); },
            [access](AnalysisConfig& c, std::string_view v) { access(c) = parse_list(v); }};
}

#define GL_REF(expr) [](AnalysisConfig& c) -> auto& { return c.expr; }

const std::vector<Field>& fields() {
    static const std::vector<Field> table = [] {
        std::vector<Field> f;
        f.push_back(real("screen.width", GL_REF(screen.width)));
        f.push_back(real("screen.height", GL_REF(screen.height)));
        f.push_back({"screen.y_origin",
                     [](const AnalysisConfig& c) { return std::string(c.screen.y_origin == YOrigin::top ? "top" : "bottom"); },
                     [](AnalysisConfig& c, std::string_view v) {
                         const auto t = csv::trim(v);
                         if (t == "top") c.screen.y_origin = YOrigin::top;
                         else if (t == "bottom") c.screen.y_origin = YOrigin::bottom;
                         else throw ConfigError("'screen.y_origin' must be 'top' or 'bottom'");
                     }});
        f.push_back(real("aoi.tolerance", GL_REF(screen.aoi_tolerance)));
        f.push_back(real("aoi.min_size", GL_REF(screen.min_aoi_size)));
        f.push_back({"coords.mode",
                     [](const AnalysisConfig& c) {
                         switch (c.ingest.coords) {
                             case CoordMode::normalized: return std::string("normalized");
                             case CoordMode::pixel: return std::string("pixel");
                             default: return std::string("auto");
                         }
                     },
                     [](AnalysisConfig& c, std::string_view v) {
                         const auto t = csv::trim(v);
                         if (t == "auto") c.ingest.coords = CoordMode::automatic;
                         else if (t == "normalized") c.ingest.coords = CoordMode::normalized;
                         else if (t == "pixel") c.ingest.coords = CoordMode::pixel;
                         else throw ConfigError("'coords.mode' must be auto, normalized or pixel");
                     }});
        f.push_back(text("columns.timestamp", GL_REF(ingest.columns.timestamp)));
        f.push_back(text("columns.gaze", GL_REF(ingest.columns.gaze)));
        f.push_back(text("columns.gaze_x", GL_REF(ingest.columns.gaze_x)));
        f.push_back(text("columns.gaze_y", GL_REF(ingest.columns.gaze_y)));
        f.push_back(text("columns.event", GL_REF(ingest.columns.event)));
        f.push_back(text("columns.level", GL_REF(ingest.columns.level)));
        f.push_back(text("columns.aoi_name", GL_REF(ingest.columns.aoi_name)));
        f.push_back(text("columns.aoi_x", GL_REF(ingest.columns.aoi_x)));
        f.push_back(text("columns.aoi_y", GL_REF(ingest.columns.aoi_y)));
        f.push_back(text("columns.aoi_w", GL_REF(ingest.columns.aoi_w)));
        f.push_back(text("columns.aoi_h", GL_REF(ingest.columns.aoi_h)));
        f.push_back(text("columns.aoi_role", GL_REF(ingest.columns.aoi_role)));
        f.push_back(list("events.click", GL_REF(ingest.events.click_tokens)));
        f.push_back(list("events.target", GL_REF(ingest.events.target_tokens)));
        f.push_back(list("events.divert", GL_REF(ingest.events.divert_tokens)));
        f.push_back(real("detect.v_basic", GL_REF(detect.v_basic)));
        f.push_back(real("detect.v_advanced", GL_REF(detect.v_advanced)));
        f.push_back(real("detect.spatial_threshold", GL_REF(detect.spatial_threshold)));
        f.push_back(integer("detect.min_duration", GL_REF(detect.min_duration)));
        f.push_back(integer("detect.min_cluster_size", GL_REF(detect.min_cluster_size)));
        f.push_back(integer("match.min_latency", GL_REF(metrics.match.min_latency)));
        f.push_back(integer("match.max_latency", GL_REF(metrics.match.max_latency)));
        f.push_back(real("behavior.long_fixation", GL_REF(metrics.behavior.long_fixation_ms)));
        f.push_back(real("behavior.short_fixation", GL_REF(metrics.behavior.short_fixation_ms)));
        f.push_back(real("behavior.broad_amplitude", GL_REF(metrics.behavior.broad_amplitude_px)));
        f.push_back(real("behavior.focused_amplitude", GL_REF(metrics.behavior.focused_amplitude_px)));
        f.push_back(real("risk.relevance_critical", GL_REF(risk.relevance_critical)));
        f.push_back(integer("risk.weight_relevance_critical", GL_REF(risk.weight_relevance_critical)));
        f.push_back(real("risk.relevance_low", GL_REF(risk.relevance_low)));
        f.push_back(integer("risk.weight_relevance_low", GL_REF(risk.weight_relevance_low)));
        f.push_back(real("risk.scatter_limit", GL_REF(risk.scatter_limit)));
        f.push_back(integer("risk.weight_scatter", GL_REF(risk.weight_scatter)));
        f.push_back(real("risk.transitions_limit", GL_REF(risk.transitions_limit)));
        f.push_back(integer("risk.weight_transitions", GL_REF(risk.weight_transitions)));
        f.push_back(real("risk.hit_rate_floor", GL_REF(risk.hit_rate_floor)));
        f.push_back(integer("risk.weight_hit_rate", GL_REF(risk.weight_hit_rate)));
        f.push_back(integer("risk.urgency_high_above", GL_REF(risk.urgency_high_above)));
        f.push_back(integer("risk.urgency_moderate_above", GL_REF(risk.urgency_moderate_above)));
        f.push_back(integer("risk.display_cap", GL_REF(risk.display_cap)));
        f.push_back(real("plan.focus_tier_below", GL_REF(plan.focus_tier_below)));
        f.push_back(real("plan.sustained_tier_below", GL_REF(plan.sustained_tier_below)));
        f.push_back(real("labels.excellent_at", GL_REF(labels.excellent_at)));
        f.push_back(real("labels.good_at", GL_REF(labels.good_at)));
        f.push_back(real("histogram.fixation_duration_ms", GL_REF(histogram.fixation_duration_ms)));
        f.push_back(real("histogram.saccade_amplitude_px", GL_REF(histogram.saccade_amplitude_px)));
        f.push_back(real("histogram.saccade_velocity_pxs", GL_REF(histogram.saccade_velocity_pxs)));
        return f;
    }();
    return table;
}

#undef GL_REF

}  // namespace

void AnalysisConfig::set(std::string_view key, std::string_view value) {
    const std::string k = csv::trim(key);
    for (const auto& f : fields()) {
        if (f.key == k) {
            f.set(*this, value);
            return;
        }
    }
    throw ConfigError("unknown configuration key '" + k + "'");
}

void AnalysisConfig::validate() const {
    screen.validate();
    detect.validate();
    metrics.match.validate();
    if (!(risk.relevance_critical <= risk.relevance_low)) {
        throw ConfigError("risk.relevance_critical must not exceed risk.relevance_low");
    }
    if (risk.urgency_moderate_above > risk.urgency_high_above) {
        throw ConfigError("risk.urgency_moderate_above must not exceed risk.urgency_high_above");
    }
    if (risk.display_cap < 0) throw ConfigError("risk.display_cap must be non-negative");
    if (!(labels.good_at <= labels.excellent_at)) throw ConfigError("labels.good_at must not exceed labels.excellent_at");
    if (!(histogram.fixation_duration_ms > 0.0) || !(histogram.saccade_amplitude_px > 0.0) ||
        !(histogram.saccade_velocity_pxs > 0.0)) {
        throw ConfigError("histogram bin widths must be positive");
    }
}

std::map<std::string, std::string> AnalysisConfig::echo() const {
    std::map<std::string, std::string> out;
    for (const auto& f : fields()) out[f.key] = f.get(*this);
    return out;
}

std::vector<std::string> AnalysisConfig::keys() {
    std::vector<std::string> out;
    for (const auto& f : fields()) out.push_back(f.key);
    return out;
}

std::pair<std::string, std::string> split_assignment(std::string_view text) {
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected key=value, got '" + std::string(text) + "'");
    return {csv::trim(text.substr(0, eq)), csv::trim(text.substr(eq + 1))};
}

void apply_config(AnalysisConfig& cfg, std::istream& in, const std::string& source) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (csv::trim(line).empty()) continue;
        try {
            const auto [key, value] = split_assignment(line);
            cfg.set(key, value);
        } catch (const ConfigError& e) {
            throw ConfigError(source + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
}

}  // namespace gazelens
