// Fixation and saccade detection: per-sample I-VT labels plus greedy
// single-pass spatial clustering.
#pragma once

#include "gazelens/core.hpp"
#include "gazelens/ingest.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gazelens {

struct DetectionConfig {
    double v_basic = 721.0;           ///< px/s, I-VT threshold (inclusive)
    double v_advanced = 300.0;        ///< px/s, clustering threshold (strict)
    double spatial_threshold = 50.0;  ///< px, distance to the running centroid
    Millis min_duration = 100;
    std::size_t min_cluster_size = 3;

    void validate() const;
};

struct Fixation {
    Point2 center = Point2::Zero();
    Millis start = 0;
    Millis end = 0;
    Millis duration = 0;
    double dispersion = 0.0;
    std::size_t sample_count = 0;
    std::optional<std::string> dominant_aoi;

    bool operator==(const Fixation&) const = default;
};

struct Saccade {
    Point2 from = Point2::Zero();
    Point2 to = Point2::Zero();
    double amplitude = 0.0;
    double peak_velocity = 0.0;
    Millis start = 0;
    Millis end = 0;
    Millis duration = 0;
    bool degenerate = false;  ///< built from fewer than two samples

    bool operator==(const Saccade&) const = default;
};

enum class MovementKind { fixation, saccade };

const char* to_string(MovementKind kind);

struct SampleLabel {
    std::size_t index = 0;
    MovementKind kind = MovementKind::fixation;
    double velocity = 0.0;

    bool operator==(const SampleLabel&) const = default;
};

/// px/s between consecutive samples; +infinity when no time elapsed.
/// Throws OrderingError if `curr` precedes `prev`.
double velocity(const GazeSample& prev, const GazeSample& curr);

/// One label per sample from the second onward; fixation iff velocity <= v_basic.
std::vector<SampleLabel> classify_ivt(std::span<const GazeSample> samples, const DetectionConfig& cfg);

struct EventSet {
    std::vector<Fixation> fixations;
    std::vector<Saccade> saccades;
    /// Per input sample: index of the fixation it belongs to, or -1.
    std::vector<int> cluster_of;
};

/// Greedy clustering. A sample joins the open cluster iff its incoming
/// velocity is below v_advanced and it lies within the spatial threshold
/// of the running centroid. Clusters meeting the size and duration minima
/// become fixations; one saccade spans each gap between consecutive
/// fixations, from the last sample of one to the first of the next.
EventSet detect_events(std::span<const GazeSample> samples, const DetectionConfig& cfg, const AoiMap& aoi);

/// Builds a fixation from a qualifying cluster. Throws ContractError when
/// the members violate the size or duration minima of `cfg`.
Fixation finalize_cluster(std::span<const GazeSample> members, const DetectionConfig& cfg, const AoiMap& aoi);

/// Amplitude is first-to-last distance; peak velocity ignores zero-interval
/// pairs. Fewer than two samples gives a zeroed, flagged saccade.
Saccade summarize_saccade(std::span<const GazeSample> segment);

}  // namespace gazelens
