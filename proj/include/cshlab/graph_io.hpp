#pragma once

#include "cshlab/graph.hpp"

#include <json.hpp>

#include <filesystem>

namespace cshlab {

/// Parses {"vertices":[{"id","mu"}...], "edges":[{"a","b","w"}...]}. Each
/// undirected edge must appear once; a second listing of the same pair in
/// either direction is rejected (as asymmetric if the weights differ).
GraphSpec parse_graph_spec(const nlohmann::json& doc);

WeightedGraph load_graph(const std::filesystem::path& path);
WeightedGraph graph_from_json(const nlohmann::json& doc);
nlohmann::json graph_to_json(const WeightedGraph& g);

// Small named graphs with unit measure and unit weights, used by tests,
// examples and the check command.
WeightedGraph complete_graph_k2();
WeightedGraph path_graph(std::size_t n, const std::vector<double>& mu = {});
WeightedGraph cycle_graph(std::size_t n);

}  // namespace cshlab
