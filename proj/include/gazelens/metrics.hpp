// Task-performance, attention and behavioral measures for one level.
#pragma once

#include "gazelens/core.hpp"
#include "gazelens/detect.hpp"
#include "gazelens/geometry.hpp"
#include "gazelens/ingest.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gazelens {

struct MatchConfig {
    Millis min_latency = 522;   ///< inclusive
    Millis max_latency = 5000;  ///< inclusive

    void validate() const;
};

struct MatchPair {
    std::size_t target = 0;  ///< index into the target list
    std::size_t click = 0;   ///< index into the click list
    Millis latency = 0;

    bool operator==(const MatchPair&) const = default;
};

struct MatchResult {
    std::size_t matched = 0;
    std::size_t target_count = 0;
    double hit_rate = 0.0;  ///< percent
    bool no_targets = false;
    std::vector<MatchPair> pairs;
};

/// For each target in time order, takes the earliest unused click whose
/// latency lies in the window. Zero targets gives hit rate 0 and sets
/// `no_targets`.
MatchResult match_targets(std::span<const TimelineEvent> targets, std::span<const TimelineEvent> clicks,
                          const MatchConfig& cfg);

/// sigma_x + sigma_y (population). Empty input is undefined.
std::optional<double> attention_scatter(std::span<const GazeSample> samples);

template <typename Derived>
double attention_scatter(const Eigen::MatrixBase<Derived>& pts) {
    return population_stddev(pts).sum();
}

/// Fraction of samples whose AOI lookup lands on a bin AOI.
std::optional<double> task_relevance(std::span<const GazeSample> samples, const AoiMap& aoi);

/// Transitions between differing AOI names, ignoring samples outside every AOI.
std::size_t aoi_transitions(std::span<const GazeSample> samples, const AoiMap& aoi);

std::optional<double> gaze_efficiency(std::span<const Fixation> fixations, std::span<const GazeSample> samples);

struct ScanPathSummary {
    double scan_path = 0.0;
    std::optional<double> fix_sacc_ratio;
};

ScanPathSummary scan_path_and_ratio(std::span<const Fixation> fixations, std::span<const Saccade> saccades);

struct BehaviorThresholds {
    double long_fixation_ms = 400.0;
    double short_fixation_ms = 200.0;
    double broad_amplitude_px = 300.0;
    double focused_amplitude_px = 100.0;
};

namespace labels {
inline constexpr const char* kDeepProcessing = "Deep processing/difficulty";
inline constexpr const char* kQuickScanning = "Quick scanning";
inline constexpr const char* kModerateProcessing = "Moderate processing";
inline constexpr const char* kBroadSearch = "Broad visual search";
inline constexpr const char* kFocusedExamination = "Focused examination";
inline constexpr const char* kMixedSearch = "Mixed search";
inline constexpr const char* kInsufficientData = "Insufficient data";
}  // namespace labels

struct BehaviorLabels {
    std::string processing_style;
    std::string search_pattern;
};

std::string processing_style_for(double avg_fixation_ms, const BehaviorThresholds& t = {});
std::string search_pattern_for(double avg_amplitude_px, const BehaviorThresholds& t = {});

BehaviorLabels classify_behavior(std::span<const Fixation> fixations, std::span<const Saccade> saccades,
                                 const BehaviorThresholds& t = {});

struct MetricsConfig {
    MatchConfig match;
    BehaviorThresholds behavior;
};

struct SessionMetrics {
    double hit_rate = 0.0;
    std::size_t matched = 0;
    std::size_t target_count = 0;
    bool no_targets = false;
    std::optional<double> attention_scatter;
    std::optional<double> task_relevance;
    std::size_t aoi_transitions = 0;
    std::optional<double> gaze_efficiency;
    std::optional<double> avg_fixation_duration;
    std::optional<double> avg_saccade_amplitude;
    std::optional<double> avg_saccade_velocity;
    std::optional<double> fix_sacc_ratio;
    double scan_path = 0.0;
    std::string processing_style;
    std::string search_pattern;
    std::size_t sample_count = 0;
    std::size_t fixation_count = 0;
    std::size_t saccade_count = 0;

    bool operator==(const SessionMetrics&) const = default;
};

/// All measures for one level's samples, timeline events and detected events.
SessionMetrics compute_metrics(std::span<const GazeSample> samples, std::span<const TimelineEvent> events,
                               const EventSet& detected, const AoiMap& aoi, const MetricsConfig& cfg = {});

}  // namespace gazelens
