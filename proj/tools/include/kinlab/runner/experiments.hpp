#pragma once

#include <string>

#include "json.hpp"

#include "kinlab/runner/config.hpp"
#include "kinlab/runner/runner.hpp"

namespace kinlab::runner {

struct ExperimentResult {
    std::string results_csv;
    nlohmann::json summary;  ///< includes "checks" (name -> bool) and "passed"
    bool passed = true;
    std::string failed_checks;
};

/// Runs the experiment selected by the config. Library exceptions propagate.
ExperimentResult run_experiment(const ScenarioConfig& config, const RunOptions& options);

}  // namespace kinlab::runner
