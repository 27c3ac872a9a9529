#include <iostream>

#include "CLI11.hpp"

#include "kinlab/runner/runner.hpp"

#ifndef KINLAB_VERSION
#define KINLAB_VERSION "unknown"
#endif

namespace kinlab::runner {

int cli_main(int argc, char** argv) {
    CLI::App app{"Kinetic models of a quantum Brownian particle: scenario runner"};
    app.set_version_flag("--version", KINLAB_VERSION);
    app.require_subcommand(1);

    RunOptions options;
    std::string out;
    unsigned threads = 0;
    std::uint64_t seed = 0;

    std::string config_path;
    auto* run = app.add_subcommand("run", "Run one experiment described by a config (or manifest) file");
    run->add_option("config", config_path, "Scenario config file")->required()->check(CLI::ExistingFile);

    std::string spec_path;
    auto* compare = app.add_subcommand("compare", "Build a comparison report from earlier runs");
    compare->add_option("spec", spec_path, "Report spec file")->required()->check(CLI::ExistingFile);

    for (auto* sub : {run, compare}) {
        sub->add_option("--out", out, "Output directory (overrides the config)");
        sub->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--seed", seed, "Random seed (overrides the config)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config_error;
    }

    const auto* active = run->parsed() ? run : compare;
    if (active->count("--out")) options.out = out;
    if (active->count("--threads")) options.threads = threads;
    if (active->count("--seed")) options.seed = seed;

    const RunOutcome outcome = run->parsed() ? run_config_file(config_path, options) : compare_spec_file(spec_path, options);
    auto& stream = outcome.exit_code == exit_ok ? std::cout : std::cerr;
    stream << outcome.message;
    if (!outcome.out_dir.empty()) stream << " [" << outcome.out_dir.string() << "]";
    stream << '\n';
    return outcome.exit_code;
}

}  // namespace kinlab::runner
