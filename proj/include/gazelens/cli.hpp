// Command-line orchestration: ingest -> detect -> metrics -> assess -> report.
#pragma once

#include "gazelens/config.hpp"
#include "gazelens/report.hpp"
#include "gazelens/synth.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace gazelens {

/// Stable process exit codes.
enum ExitCode : int {
    kExitOk = 0,
    kExitInternal = 1,
    kExitUsage = 2,
    kExitMissingInput = 3,
    kExitParse = 4,
    kExitEmptySession = 5,
    kExitOutput = 6,
    kExitConfig = 7,
    kExitSpec = 8,
    kExitPartial = 9,  ///< reports written, but some levels could not be analyzed
};

/// Environment variable naming a config file when --config is absent.
inline constexpr const char* kConfigEnvVar = "GAZELENS_CONFIG";

std::string tool_version();

struct RunConfig {
    std::vector<std::filesystem::path> inputs;  ///< session files and/or directories
    std::optional<std::filesystem::path> aoi_file;
    std::optional<std::filesystem::path> config_file;
    std::filesystem::path out_dir = "gazelens-out";
    ReportFormats formats;
    /// Applied after the config file, in order; later entries win.
    std::vector<std::pair<std::string, std::string>> overrides;
    bool dump_samples = false;
    bool print_json = false;  ///< write the structured report to stdout
    unsigned jobs = 1;
    int verbosity = 0;
};

/// defaults, then the config file, then overrides. Throws ConfigError / IoError.
AnalysisConfig effective_config(const std::optional<std::filesystem::path>& config_file,
                                const std::vector<std::pair<std::string, std::string>>& overrides);

/// Reads, converts and filters one session file; AOIs come from inline rows
/// followed by the optional sidecar.
CleanSession load_session(const std::filesystem::path& csv, const AnalysisConfig& cfg,
                          const std::optional<std::filesystem::path>& aoi_file = std::nullopt);

/// Runs detection, metrics and assessment per level. Levels without valid
/// samples are recorded as failures; the rest are analyzed.
SessionReport analyze_session(const CleanSession& session, const AnalysisConfig& cfg, const std::string& student_id,
                              DebugDump* dump = nullptr);

int cmd_analyze(const RunConfig& run, std::ostream& out, std::ostream& err);

struct SynthRun {
    std::optional<std::filesystem::path> spec_file;  ///< demo spec when absent
    std::filesystem::path out_file = "session.csv";
    std::optional<std::uint64_t> seed;
    std::optional<std::filesystem::path> emit_spec;  ///< also write the effective spec as JSON
};

/// Writes the session table plus "<stem>.truth.json" next to it.
int cmd_synth(const SynthRun& run, std::ostream& out, std::ostream& err);

int cmd_validate_config(const std::optional<std::filesystem::path>& config_file,
                        const std::vector<std::pair<std::string, std::string>>& overrides, std::ostream& out,
                        std::ostream& err);

/// Full command-line entry point (argument parsing included).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gazelens
