#pragma once

#include "cshlab/graph.hpp"

#include <random>

namespace cshlab {

/// Random connected graph on `n` vertices: a random spanning tree plus each
/// remaining pair with probability `extra_edge_probability`. Measures and
/// weights are drawn uniformly from [0.5, 2].
WeightedGraph random_connected_graph(std::mt19937_64& rng, std::size_t n, double extra_edge_probability = 0.3);

VertexFunction random_function(std::mt19937_64& rng, std::size_t n, double lo, double hi);

/// Random direction with zero μ-mean and unit sup norm.
VertexFunction random_mean_zero(std::mt19937_64& rng, const WeightedGraph& g);

}  // namespace cshlab
