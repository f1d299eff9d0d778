#include "cshlab/random_graph.hpp"

#include <algorithm>
#include <numeric>

namespace cshlab {

WeightedGraph random_connected_graph(std::mt19937_64& rng, std::size_t n, double extra_edge_probability) {
    std::uniform_real_distribution<double> value(0.5, 2.0);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    GraphSpec spec;
    for (std::size_t i = 0; i < n; ++i) spec.vertices.push_back({"v" + std::to_string(i), value(rng)});

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::vector<bool>> linked(n, std::vector<bool>(n, false));
    for (std::size_t k = 1; k < n; ++k) {
        std::uniform_int_distribution<std::size_t> pick(0, k - 1);
        const std::size_t a = order[k];
        const std::size_t b = order[pick(rng)];
        linked[a][b] = linked[b][a] = true;
        spec.edges.push_back({spec.vertices[a].id, spec.vertices[b].id, value(rng)});
    }
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            if (!linked[a][b] && coin(rng) < extra_edge_probability) {
                linked[a][b] = linked[b][a] = true;
                spec.edges.push_back({spec.vertices[a].id, spec.vertices[b].id, value(rng)});
            }
        }
    }
    return WeightedGraph::build(spec);
}

VertexFunction random_function(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    VertexFunction u(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < u.size(); ++i) u[i] = dist(rng);
    return u;
}

VertexFunction random_mean_zero(std::mt19937_64& rng, const WeightedGraph& g) {
    VertexFunction d = random_function(rng, g.size(), -1.0, 1.0);
    d.array() -= average(g, d);
    const double s = sup_norm(d);
    if (s > 0.0) d /= s;
    return d;
}

}  // namespace cshlab
