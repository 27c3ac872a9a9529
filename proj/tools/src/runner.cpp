#include "kinlab/runner/runner.hpp"

#include <fstream>
#include <sstream>

#include "kinlab/errors.hpp"
#include "kinlab/runner/experiments.hpp"

#ifndef KINLAB_VERSION
#define KINLAB_VERSION "unknown"
#endif

namespace kinlab::runner {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr int manifest_version = 1;

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << text;
    if (!os) throw std::runtime_error("write failed for " + path.string());
}

/// Config as actually run: command-line overrides are folded in so that the
/// manifest reproduces the run on its own.
json effective_config(json config, const ScenarioConfig& parsed, const RunOptions& options) {
    if (parsed.mc) {
        if (options.seed) config["mc"]["seed"] = *options.seed;
        if (options.threads) config["mc"]["threads"] = *options.threads;
    }
    config.erase("output");
    return config;
}

RunOutcome fail(int code, std::string message, fs::path out_dir = {}) {
    RunOutcome r;
    r.exit_code = code;
    r.message = std::move(message);
    r.out_dir = std::move(out_dir);
    return r;
}

}  // namespace

RunOutcome run_scenario(const json& config, const RunOptions& options) {
    ScenarioConfig parsed;
    fs::path out_dir;
    try {
        parsed = parse_scenario(config);
        if (options.out)
            out_dir = *options.out;
        else if (parsed.output)
            out_dir = *parsed.output;
        else
            throw ConfigError("output: required field is missing (or pass --out)");
        if (options.threads && *options.threads == 0) throw ConfigError("--threads: must be at least 1");
    } catch (const ConfigError& e) {
        return fail(exit_config_error, std::string("config error: ") + e.what());
    }

    ExperimentResult result;
    try {
        result = run_experiment(parsed, options);
    } catch (const ConfigError& e) {
        return fail(exit_config_error, std::string("config error: ") + e.what(), out_dir);
    } catch (const std::invalid_argument& e) {
        return fail(exit_config_error, std::string("config rejected by solver: ") + e.what(), out_dir);
    } catch (const StabilityError& e) {
        return fail(exit_numerical_failure, std::string("stability: ") + e.what(), out_dir);
    } catch (const PositivityError& e) {
        return fail(exit_numerical_failure, std::string("positivity: ") + e.what(), out_dir);
    } catch (const QuadratureError& e) {
        return fail(exit_numerical_failure, std::string("quadrature: ") + e.what(), out_dir);
    } catch (const DomainError& e) {
        return fail(exit_numerical_failure, std::string("domain: ") + e.what(), out_dir);
    } catch (const std::exception& e) {
        return fail(exit_numerical_failure, std::string("numerical failure: ") + e.what(), out_dir);
    }

    json manifest;
    manifest["manifest_version"] = manifest_version;
    manifest["code_version"] = KINLAB_VERSION;
    manifest["experiment"] = to_string(parsed.experiment);
    manifest["seed"] = result.summary.contains("seed") ? result.summary["seed"] : json(nullptr);
    manifest["threads"] = result.summary.contains("threads") ? result.summary["threads"] : json(nullptr);
    manifest["config"] = effective_config(config, parsed, options);

    try {
        fs::create_directories(out_dir);
        write_text(out_dir / "results.csv", result.results_csv);
        write_text(out_dir / "summary.json", result.summary.dump(2) + "\n");
        write_text(out_dir / "manifest.json", manifest.dump(2) + "\n");
    } catch (const std::exception& e) {
        return fail(exit_config_error, std::string("output: ") + e.what(), out_dir);
    }

    RunOutcome r;
    r.out_dir = out_dir;
    r.summary = std::move(result.summary);
    if (result.passed) {
        r.exit_code = exit_ok;
        r.message = "all checks passed";
    } else {
        r.exit_code = exit_numerical_failure;
        r.message = "failed checks: " + result.failed_checks;
    }
    return r;
}

RunOutcome run_config_file(const fs::path& path, const RunOptions& options) {
    json j;
    try {
        std::ifstream is(path, std::ios::binary);
        if (!is) throw ConfigError(path.string() + ": cannot open");
        std::ostringstream text;
        text << is.rdbuf();
        j = parse_json_text(text.str(), path.string());
    } catch (const ConfigError& e) {
        return fail(exit_config_error, std::string("config error: ") + e.what());
    }
    if (j.is_object() && j.contains("manifest_version") && j.contains("config")) {
        RunOptions replay = options;
        if (!replay.out) replay.out = path.parent_path() / "replay";
        return run_scenario(j["config"], replay);
    }
    return run_scenario(j, options);
}

}  // namespace kinlab::runner
