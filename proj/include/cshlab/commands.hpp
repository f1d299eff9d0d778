#pragma once

#include "cshlab/config.hpp"

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

namespace cshlab {

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitSolver = 3, kExitInvariant = 4 };

/// Command-line overrides applied on top of a config.
struct RunSettings {
    std::optional<std::filesystem::path> graph;
    std::optional<unsigned> jobs;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
    std::optional<std::filesystem::path> csv;    // sweep table destination
    std::optional<std::filesystem::path> roots;  // check: root records to re-verify
};

ExperimentConfig apply_settings(ExperimentConfig cfg, const RunSettings& settings);

// Each command writes JSON lines to `out` and returns an exit code. Library
// errors propagate; run_command maps them to exit codes.
int cmd_solve(const ExperimentConfig& cfg, std::ostream& out);
int cmd_enumerate(const ExperimentConfig& cfg, std::ostream& out);
int cmd_degree(const ExperimentConfig& cfg, std::ostream& out);
int cmd_sweep(const ExperimentConfig& cfg, const RunSettings& settings, std::ostream& out);
int cmd_system(const ExperimentConfig& cfg, std::ostream& out);
/// `cfg` may omit the graph, in which case K2, P3 and C4 are checked.
int cmd_check(const ExperimentConfig& cfg, const RunSettings& settings, std::ostream& out);

/// Dispatches by name. InputError → 2, SolveError → 3, InvariantError → 4,
/// each reported as a JSON line on `err` naming module and operation.
int run_command(const std::string& name, const ExperimentConfig& cfg, const RunSettings& settings, std::ostream& out,
                std::ostream& err);

}  // namespace cshlab
