#include "gazelens/metrics.hpp"

#include <numeric>

namespace gazelens {

void MatchConfig::validate() const {
    if (min_latency < 0 || min_latency >= max_latency) {
        throw ConfigError("match window needs 0 <= min_latency < max_latency");
    }
}

MatchResult match_targets(std::span<const TimelineEvent> targets, std::span<const TimelineEvent> clicks,
                          const MatchConfig& cfg) {
    MatchResult r;
    r.target_count = targets.size();
    if (targets.empty()) {
        r.no_targets = true;
        return r;
    }
    std::vector<bool> used(clicks.size(), false);
    for (std::size_t t = 0; t < targets.size(); ++t) {
        for (std::size_t c = 0; c < clicks.size(); ++c) {
            if (used[c]) continue;
            const Millis latency = clicks[c].timestamp - targets[t].timestamp;
            if (latency < cfg.min_latency || latency > cfg.max_latency) continue;
            used[c] = true;
            r.pairs.push_back({t, c, latency});
            break;
        }
    }
    r.matched = r.pairs.size();
    r.hit_rate = static_cast<double>(r.matched) / static_cast<double>(r.target_count) * 100.0;
    return r;
}

std::optional<double> attention_scatter(std::span<const GazeSample> samples) {
    if (samples.empty()) return std::nullopt;
    Points2 pts(2, static_cast<Eigen::Index>(samples.size()));
    for (std::size_t i = 0; i < samples.size(); ++i) pts.col(static_cast<Eigen::Index>(i)) = samples[i].pos;
    return attention_scatter(pts);
}

std::optional<double> task_relevance(std::span<const GazeSample> samples, const AoiMap& aoi) {
    if (samples.empty()) return std::nullopt;
    std::size_t in_bins = 0;
    for (const auto& s : samples) {
        const auto idx = aoi.find(s.pos);
        if (idx && aoi.aois()[*idx].is_bin) ++in_bins;
    }
    return static_cast<double>(in_bins) / static_cast<double>(samples.size());
}

std::size_t aoi_transitions(std::span<const GazeSample> samples, const AoiMap& aoi) {
    std::size_t transitions = 0;
    const std::string* previous = nullptr;
    for (const auto& s : samples) {
        const auto idx = aoi.find(s.pos);
        if (!idx) continue;
        const std::string& name = aoi.aois()[*idx].name;
        if (previous && *previous != name) ++transitions;
        previous = &name;
    }
    return transitions;
}

std::optional<double> gaze_efficiency(std::span<const Fixation> fixations, std::span<const GazeSample> samples) {
    if (samples.empty()) return std::nullopt;
    return static_cast<double>(fixations.size()) / static_cast<double>(samples.size());
}

ScanPathSummary scan_path_and_ratio(std::span<const Fixation> fixations, std::span<const Saccade> saccades) {
    ScanPathSummary out;
    for (const auto& s : saccades) out.scan_path += s.amplitude;
    if (!saccades.empty()) {
        out.fix_sacc_ratio = static_cast<double>(fixations.size()) / static_cast<double>(saccades.size());
    }
    return out;
}

std::string processing_style_for(double avg_fixation_ms, const BehaviorThresholds& t) {
    if (avg_fixation_ms > t.long_fixation_ms) return labels::kDeepProcessing;
    if (avg_fixation_ms < t.short_fixation_ms) return labels::kQuickScanning;
    return labels::kModerateProcessing;
}

std::string search_pattern_for(double avg_amplitude_px, const BehaviorThresholds& t) {
    if (avg_amplitude_px > t.broad_amplitude_px) return labels::kBroadSearch;
    if (avg_amplitude_px < t.focused_amplitude_px) return labels::kFocusedExamination;
    return labels::kMixedSearch;
}

namespace {

template <typename T, typename F>
std::optional<double> mean_of(std::span<const T> items, F field) {
    if (items.empty()) return std::nullopt;
    double total = 0.0;
    for (const auto& item : items) total += field(item);
    return total / static_cast<double>(items.size());
}

std::optional<double> mean_duration(std::span<const Fixation> f) {
    return mean_of(f, [](const Fixation& x) { return static_cast<double>(x.duration); });
}

std::optional<double> mean_amplitude(std::span<const Saccade> s) {
    return mean_of(s, [](const Saccade& x) { return x.amplitude; });
}

}  // namespace

BehaviorLabels classify_behavior(std::span<const Fixation> fixations, std::span<const Saccade> saccades,
                                 const BehaviorThresholds& t) {
    BehaviorLabels out;
    const auto duration = mean_duration(fixations);
    const auto amplitude = mean_amplitude(saccades);
    out.processing_style = duration ? processing_style_for(*duration, t) : labels::kInsufficientData;
    out.search_pattern = amplitude ? search_pattern_for(*amplitude, t) : labels::kInsufficientData;
    return out;
}

SessionMetrics compute_metrics(std::span<const GazeSample> samples, std::span<const TimelineEvent> events,
                               const EventSet& detected, const AoiMap& aoi, const MetricsConfig& cfg) {
    std::vector<TimelineEvent> targets;
    std::vector<TimelineEvent> clicks;
    for (const auto& e : events) {
        if (e.kind == EventKind::target) targets.push_back(e);
        if (e.kind == EventKind::click) clicks.push_back(e);
    }
    const MatchResult match = match_targets(targets, clicks, cfg.match);
    const std::span<const Fixation> fixations(detected.fixations);
    const std::span<const Saccade> saccades(detected.saccades);

    SessionMetrics m;
    m.hit_rate = match.hit_rate;
    m.matched = match.matched;
    m.target_count = match.target_count;
    m.no_targets = match.no_targets;
    m.attention_scatter = attention_scatter(samples);
    m.task_relevance = task_relevance(samples, aoi);
    m.aoi_transitions = aoi_transitions(samples, aoi);
    m.gaze_efficiency = gaze_efficiency(fixations, samples);
    m.avg_fixation_duration = mean_duration(fixations);
    m.avg_saccade_amplitude = mean_amplitude(saccades);
    m.avg_saccade_velocity = mean_of(saccades, [](const Saccade& x) { return x.peak_velocity; });
    const auto path = scan_path_and_ratio(fixations, saccades);
    m.scan_path = path.scan_path;
    m.fix_sacc_ratio = path.fix_sacc_ratio;
    const auto behavior = classify_behavior(fixations, saccades, cfg.behavior);
    m.processing_style = behavior.processing_style;
    m.search_pattern = behavior.search_pattern;
    m.sample_count = samples.size();
    m.fixation_count = fixations.size();
    m.saccade_count = saccades.size();
    return m;
}

}  // namespace gazelens
