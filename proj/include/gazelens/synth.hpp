// Synthetic sessions with planted ground truth, and an independent I-VT
// oracle for cross-checking the detector.
//
// Pseudo-random numbers come from std::mt19937_64 (fixed by the C++
// standard). Uniform doubles take the top 53 bits of each draw; Gaussian
// noise uses the Box-Muller transform truncated at 3 sigma. Streams are
// therefore reproducible from the seed alone.
#pragma once

#include "gazelens/core.hpp"
#include "gazelens/detect.hpp"
#include "gazelens/ingest.hpp"
#include "gazelens/metrics.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gazelens {

struct SynthCluster {
    Point2 center = Point2::Zero();
    double radius = 0.0;  ///< px, uniform disc around the center
    std::size_t samples = 5;

    /// Span of the planted fixation, first to last sample.
    Millis dwell(Millis interval) const { return static_cast<Millis>(samples == 0 ? 0 : samples - 1) * interval; }
};

struct SynthTrial {
    Millis target_ms = 0;  ///< offset from the level start
    std::optional<Millis> click_latency;
};

struct SynthLevel {
    LevelId level = 1;
    std::vector<SynthCluster> clusters;
    std::vector<SynthTrial> trials;
};

struct SynthSpec {
    std::uint64_t seed = 1;
    Millis interval = 20;           ///< ms between gaze samples
    double jump_velocity = 4000.0;  ///< px/s, upper bound of inter-cluster step speed
    double noise_sigma = 0.0;       ///< px, per-axis Gaussian noise
    ScreenConfig screen;
    std::vector<AoiRect> aois;
    std::vector<SynthLevel> levels;
    MatchConfig match;
    Millis level_gap = 1000;  ///< quiet time between levels

    /// Throws SpecError when the spec cannot produce a valid clean stream.
    void validate() const;
};

struct PlantedFixation {
    LevelId level = 0;
    Point2 center = Point2::Zero();       ///< planted center
    Point2 sample_mean = Point2::Zero();  ///< mean of the generated samples
    Millis start = 0;
    Millis end = 0;
    std::size_t samples = 0;
    bool recoverable = false;  ///< meets the detection size and duration minima
};

struct PlantedSaccade {
    LevelId level = 0;
    Point2 from = Point2::Zero();
    Point2 to = Point2::Zero();
    Millis start = 0;
    Millis end = 0;
};

struct LevelTruth {
    LevelId level = 0;
    std::vector<PlantedFixation> fixations;
    std::vector<PlantedSaccade> saccades;
    std::size_t targets = 0;
    std::size_t intended_matches = 0;
    double intended_hit_rate = 0.0;  ///< percent

    std::size_t recoverable_count() const;
};

struct GroundTruth {
    std::vector<LevelTruth> levels;
    /// AOI label of every generated gaze sample, in stream order.
    std::vector<std::optional<std::string>> sample_aoi;
};

struct SynthSession {
    CleanSession session;
    GroundTruth truth;
};

/// Deterministic for a given spec. `detection` only decides which planted
/// clusters count as recoverable.
SynthSession generate_session(const SynthSpec& spec, const DetectionConfig& detection = {});

/// Writes the session in the canonical ingest table format with inline AOI rows.
void write_session_csv(std::ostream& out, const SynthSession& synth);

/// Writes ground truth as JSON.
void write_ground_truth(std::ostream& out, const SynthSpec& spec, const GroundTruth& truth);

SynthSpec parse_synth_spec(std::istream& in);
std::string synth_spec_to_json(const SynthSpec& spec);

/// Three-level layout with four bins, used by `gazelens synth --demo`.
SynthSpec demo_spec(std::uint64_t seed = 42);

/// `clusters` well-separated clusters on one level with random sizes
/// (some below the detection minima), placed from `seed`.
SynthSpec random_spec(std::uint64_t seed, std::size_t clusters, const DetectionConfig& detection = {});

/// Straight transcription of the velocity-threshold rule, kept separate
/// from the detector: label k belongs to the pair (k, k+1).
std::vector<MovementKind> oracle_ivt(std::span<const GazeSample> samples, double threshold);

}  // namespace gazelens
