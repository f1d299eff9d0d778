#include "cshlab/commands.hpp"
#include "cshlab/errors.hpp"
#include "cshlab/records.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
    using namespace cshlab;

    CLI::App app{"Solve, enumerate and classify Chern-Simons Higgs equations on weighted graphs"};
    app.require_subcommand(1);

    std::string graph, config, out_path, csv, roots;
    unsigned jobs = 0;
    std::uint64_t seed = 0;
    double tol = 0.0;
    app.add_option("--graph", graph, "Graph JSON file (overrides the config's graph)");
    app.add_option("--config", config, "Experiment config JSON file");
    app.add_option("--out", out_path, "Write JSON lines here instead of stdout");
    auto* jobs_opt = app.add_option("--jobs", jobs, "Worker threads (default: available cores)");
    auto* seed_opt = app.add_option("--seed", seed, "RNG seed for perturbations and random checks");
    auto* tol_opt = app.add_option("--tol", tol, "Newton residual tolerance");

    app.add_subcommand("solve", "Newton solve from the config's start point");
    app.add_subcommand("enumerate", "Enumerate and classify all roots found by grid seeding");
    app.add_subcommand("degree", "Degree by enumeration against the expected value");
    auto* sweep = app.add_subcommand("sweep", "Parameter sweep, sigma tracking, or threshold bisection");
    sweep->add_option("--csv", csv, "Also write the sweep table as CSV");
    app.add_subcommand("system", "Bound, degree and sigma-homotopy audit for the system");
    auto* check = app.add_subcommand("check", "Run invariant suites; optionally re-verify emitted roots");
    check->add_option("--roots", roots, "JSON-lines file whose root records are re-verified");

    // Global options may follow the subcommand.
    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    RunSettings settings;
    if (!graph.empty()) settings.graph = graph;
    if (jobs_opt->count()) settings.jobs = jobs;
    if (seed_opt->count()) settings.seed = seed;
    if (tol_opt->count()) settings.tol = tol;
    if (!csv.empty()) settings.csv = csv;
    if (!roots.empty()) settings.roots = roots;

    ExperimentConfig cfg;
    try {
        if (!config.empty()) {
            cfg = load_config(config);
        } else if (command != "check") {
            throw InputError("cli", command, "--config is required");
        }
    } catch (const LabError& e) {
        write_record(std::cerr, {{"error", "config"}, {"module", e.module()}, {"operation", e.operation()},
                                 {"message", e.what()}});
        return kExitConfig;
    }

    if (out_path.empty()) return run_command(command, cfg, settings, std::cout, std::cerr);
    std::ofstream out(out_path);
    if (!out) {
        write_record(std::cerr, {{"error", "config"}, {"module", "cli"}, {"operation", command},
                                 {"message", "cannot write '" + out_path + "'"}});
        return kExitConfig;
    }
    return run_command(command, cfg, settings, out, std::cerr);
}
