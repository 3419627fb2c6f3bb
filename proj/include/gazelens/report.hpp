// Session reports: the structured JSON document, the markdown summary
// and plot-ready series files.
#pragma once

#include "gazelens/assess.hpp"
#include "gazelens/detect.hpp"
#include "gazelens/metrics.hpp"

#include <json.hpp>

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace gazelens {

struct LevelReport {
    LevelId level = 0;
    SessionMetrics metrics;
    RiskAssessment risk;
    RiskProfile profile;
    std::string performance;
    double trend_score = 0.0;
    std::vector<Fixation> fixations;
    std::vector<Saccade> saccades;
    std::vector<TimelineEvent> events;

    bool operator==(const LevelReport&) const = default;
};

struct LevelFailure {
    LevelId level = 0;
    std::string reason;

    bool operator==(const LevelFailure&) const = default;
};

struct SessionReport {
    std::string student_id;
    std::vector<LevelReport> per_level;
    std::vector<LevelFailure> failed_levels;
    InterventionPlan plan;
    std::string tool_version;
    std::map<std::string, std::string> config_echo;
    std::size_t sample_count = 0;
    std::size_t dropped_count = 0;
    std::size_t diverted_count = 0;
    std::vector<std::string> diagnostics;

    bool operator==(const SessionReport&) const = default;
};

/// Rounds every reported quantity to its display precision: one decimal
/// for pixel, millisecond, velocity, percent and 0-100 scores, three for
/// fractions and ratios.
void quantize_report(SessionReport& report);

struct CrossLevelRow {
    LevelId level = 0;
    std::size_t fixations = 0;
    std::size_t saccades = 0;
    std::string avg_fixation_duration;
    std::string avg_saccade_amplitude;
    std::string avg_saccade_velocity;
    std::string fix_sacc_ratio;
};

/// One row per level. The ratio cell is computed from the event counts.
std::vector<CrossLevelRow> cross_level_table(std::span<const LevelReport> per_level);

nlohmann::json to_json(const SessionReport& report);
SessionReport report_from_json(const nlohmann::json& j);

/// Canonical structured text: sorted keys, two-space indent, trailing newline.
std::string render_json(const SessionReport& report);
std::string render_markdown(const SessionReport& report);

/// Per-sample detector trace, written only when requested.
struct SampleTrace {
    std::size_t index = 0;
    Millis timestamp = 0;
    Point2 pos = Point2::Zero();
    double velocity = 0.0;  ///< 0 for the first sample
    std::string basic_label;
    int cluster = -1;
};

struct DebugDump {
    std::map<LevelId, std::vector<SampleTrace>> samples;
};

struct ReportFormats {
    bool json = true;
    bool markdown = true;
    bool plots = true;
};

struct HistogramBins {
    double fixation_duration_ms = 250.0;
    double saccade_amplitude_px = 100.0;
    double saccade_velocity_pxs = 500.0;
};

/// Writes report.json, report.md and plots/*.csv under `out_dir`.
/// Returns the written paths in write order. Throws IoError.
std::vector<std::filesystem::path> emit_reports(const SessionReport& report, const ReportFormats& formats,
                                                const std::filesystem::path& out_dir, const HistogramBins& bins,
                                                const DebugDump* dump = nullptr);

struct HistogramBin {
    double start = 0.0;
    double end = 0.0;
    std::size_t count = 0;
};

/// Fixed-width bins from 0 up to the bin containing the maximum value.
std::vector<HistogramBin> histogram(std::span<const double> values, double width);

}  // namespace gazelens
