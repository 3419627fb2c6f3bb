// Effective analysis configuration: defaults, key=value files and
// per-key overrides, plus a canonical echo for reports.
#pragma once

#include "gazelens/assess.hpp"
#include "gazelens/detect.hpp"
#include "gazelens/ingest.hpp"
#include "gazelens/metrics.hpp"
#include "gazelens/report.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace gazelens {

struct AnalysisConfig {
    ScreenConfig screen;
    IngestOptions ingest;
    DetectionConfig detect;
    MetricsConfig metrics;
    RiskRules risk;
    PlanRules plan;
    LabelRules labels;
    HistogramBins histogram;

    /// Sets one key. Throws ConfigError for unknown keys or bad values.
    void set(std::string_view key, std::string_view value);

    /// Throws ConfigError when any module's invariants fail.
    void validate() const;

    /// Every key with its canonical value text, sorted by key.
    std::map<std::string, std::string> echo() const;

    static std::vector<std::string> keys();
};

/// Applies "key = value" lines; blank lines and '#' comments are skipped.
/// Later lines win. `source` names the input in error messages.
void apply_config(AnalysisConfig& cfg, std::istream& in, const std::string& source = "config");

/// Splits "key=value". Throws ConfigError when '=' is missing.
std::pair<std::string, std::string> split_assignment(std::string_view text);

}  // namespace gazelens
