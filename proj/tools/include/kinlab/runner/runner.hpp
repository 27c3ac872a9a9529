#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"

#include "kinlab/runner/config.hpp"

namespace kinlab::runner {

inline constexpr int exit_ok = 0;
inline constexpr int exit_config_error = 2;
inline constexpr int exit_numerical_failure = 3;

/// Command-line overrides.
struct RunOptions {
    std::optional<unsigned> threads;
    std::optional<std::uint64_t> seed;
    std::optional<std::filesystem::path> out;
};

struct RunOutcome {
    int exit_code = exit_ok;
    std::filesystem::path out_dir;
    nlohmann::json summary;
    std::string message;
};

/// Runs one experiment and writes results.csv, summary.json and manifest.json.
/// Never throws for config or numerical problems; they map to exit codes.
RunOutcome run_scenario(const nlohmann::json& config, const RunOptions& options = {});
RunOutcome run_config_file(const std::filesystem::path& path, const RunOptions& options = {});

/// Builds report.md and report.csv from earlier run artifacts.
RunOutcome compare_runs(const nlohmann::json& spec, const RunOptions& options = {});
RunOutcome compare_spec_file(const std::filesystem::path& path, const RunOptions& options = {});

/// Entry point of the kinlab executable.
int cli_main(int argc, char** argv);

}  // namespace kinlab::runner
