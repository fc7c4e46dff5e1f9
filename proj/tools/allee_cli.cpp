// SPDX-License-Identifier: Apache-2.0
#include "allee/harness.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <utility>

int main(int argc, char** argv) {
    using namespace allee::harness;
    CLI::App app{"Spike patterns of Allee-effect populations under a taxis potential"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out;
    int jobs = 1;
    int seed_grid = 64;
    const std::pair<Mode, const char*> modes[] = {
        {Mode::analyze, "critical points, spike heights and predicted stability"},
        {Mode::simulate, "evolve one species to a steady pattern"},
        {Mode::compete, "evolve two competing species"},
        {Mode::eig, "steady state and leading eigenpairs of its linearisation"},
        {Mode::sweep, "simulate over a chi/theta grid"},
    };
    for (auto [m, help] : modes) {
        CLI::App* sub = app.add_subcommand(std::string(to_string(m)), help);
        sub->add_option("--config", config_path, "experiment config file")->required();
        sub->add_option("--out", out, "output directory (overrides output_dir)");
        sub->add_option("--jobs", jobs, "worker threads for sweep")->check(CLI::PositiveNumber);
        sub->add_option("--seed-grid", seed_grid, "critical-point seeds per axis")->check(CLI::Range(8, 4096));
    }
    CLI11_PARSE(app, argc, argv);

    const Mode mode = *parse_mode(app.get_subcommands().front()->get_name());
    try {
        const ExperimentConfig config = load_config(config_path);
        RunOptions options;
        if (!out.empty()) options.out = out;
        options.jobs = jobs;
        options.seed_grid = seed_grid;
        const RunResult result = run_experiment(config, mode, options);
        std::cout << result.summary;
        std::cout << "wrote " << result.files.size() << " files to " << result.directory.string() << '\n';
        return 0;
    } catch (const ConfigError& e) {
        for (const auto& issue : e.issues()) {
            std::cerr << config_path;
            if (issue.line > 0) std::cerr << ':' << issue.line;
            std::cerr << ": " << issue.message << '\n';
        }
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
