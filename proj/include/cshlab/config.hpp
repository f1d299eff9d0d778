#pragma once

#include "cshlab/continuation.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>

namespace cshlab {

/// An experiment as described by a JSON config file. Sources are kept raw
/// until a graph is available to resolve vertex ids against.
///
///   {"graph": "k2.json" | {inline graph},
///    "model": "scalar" | "system",
///    "lambda": -10, "p": 1, "q": 0.5, "sigma": 1,
///    "f": {"constant": 1} | {"values": {"x1": 1, ...} or [1, ...]}
///         | {"dirac": {"points": ["x1"], "coefficient": 4}},
///    "g": ...,
///    "start": <source form>, "shift": 0,
///    "radius": 50, "grid": {"points": 13, "core": [-12, 3], "outer_points": 5, "refined_points": 0},
///    "check_refinement": true, "perturbation": 1e-6,
///    "sweep": {"parameter": "lambda" | "sigma", "from": -1, "to": -60, "steps": 59, "path": [...]},
///    "threshold": {"which": "upper" | "lower" | "lower_max", "bracket": [a, b], "tol": 1e-3},
///    "sigma_grid": [0, 0.25, 0.5, 0.75, 1], "Lambda1": 2, "Lambda2": 1,
///    "tolerances": {"residual": 1e-12, "step": 1e-10, "dedup": 1e-6, "max_iter": 200},
///    "jobs": 0, "seed": 0}
struct ExperimentConfig {
    std::optional<std::filesystem::path> graph_path;
    std::optional<nlohmann::json> graph_inline;
    std::string model = "scalar";
    double lambda = 1.0;
    std::optional<double> p;  // default 1 (scalar) or 1/2 (system)
    double q = 0.5;
    double sigma = 1.0;
    nlohmann::json f;
    nlohmann::json g;
    nlohmann::json start;
    double shift = 0.0;
    std::optional<double> radius;
    SeedGrid grid;
    bool check_refinement = true;
    double perturbation = 1e-6;
    nlohmann::json sweep;
    nlohmann::json threshold;
    std::vector<double> sigma_grid{0.0, 0.25, 0.5, 0.75, 1.0};
    std::optional<double> Lambda1;
    std::optional<double> Lambda2;
    SolveOptions solve;
};

/// Throws InputError on unknown keys, wrong types, or out-of-range values.
/// Relative graph paths are resolved against `base_dir`.
ExperimentConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

/// Resolves a source form against `g`. A null spec yields `fallback`
/// (or an InputError naming `name` when no fallback is given).
VertexFunction resolve_source(const nlohmann::json& spec, const WeightedGraph& g, const std::string& name,
                              std::optional<double> fallback = std::nullopt);

WeightedGraph resolve_graph(const ExperimentConfig& cfg);
ScalarModel scalar_model_of(const ExperimentConfig& cfg, const WeightedGraph& g);
SystemModel system_model_of(const ExperimentConfig& cfg, const WeightedGraph& g);

}  // namespace cshlab
