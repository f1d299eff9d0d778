#include "cshlab/graph.hpp"

#include "cshlab/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <utility>

namespace cshlab {

namespace {

constexpr const char* kModule = "graph-core";

void require_size(const WeightedGraph& g, const VertexFunction& u, const char* op) {
    if (static_cast<std::size_t>(u.size()) != g.size()) {
        throw InputError(kModule, op,
                         "dimension mismatch: function has " + std::to_string(u.size()) +
                             " entries, graph has " + std::to_string(g.size()) + " vertices");
    }
}

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

WeightedGraph WeightedGraph::build(const GraphSpec& spec) {
    const char* op = "build_graph";
    WeightedGraph g;
    const std::size_t n = spec.vertices.size();
    if (n < 2) throw InputError(kModule, op, "graph needs at least two vertices");

    g.mu_.resize(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const auto& v = spec.vertices[i];
        if (v.id.empty()) throw InputError(kModule, op, "empty vertex id");
        if (!g.index_.emplace(v.id, i).second) throw InputError(kModule, op, "duplicate vertex id '" + v.id + "'");
        if (!positive_finite(v.mu)) throw InputError(kModule, op, "vertex '" + v.id + "' has nonpositive measure");
        g.ids_.push_back(v.id);
        g.mu_[static_cast<Eigen::Index>(i)] = v.mu;
    }

    // Directed entries ω_{ab}; a mirrored listing must carry the same weight.
    std::map<std::pair<std::size_t, std::size_t>, double> directed;
    for (const auto& e : spec.edges) {
        auto ia = g.index_.find(e.a);
        auto ib = g.index_.find(e.b);
        if (ia == g.index_.end() || ib == g.index_.end()) {
            throw InputError(kModule, op, "edge references unknown vertex '" +
                                              (ia == g.index_.end() ? e.a : e.b) + "'");
        }
        if (ia->second == ib->second) throw InputError(kModule, op, "self-loop at '" + e.a + "'");
        if (!positive_finite(e.w)) {
            throw InputError(kModule, op, "edge " + e.a + "-" + e.b + " has nonpositive weight");
        }
        if (!directed.emplace(std::make_pair(ia->second, ib->second), e.w).second) {
            throw InputError(kModule, op, "duplicate edge " + e.a + "-" + e.b);
        }
    }

    g.weights_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (const auto& [key, w] : directed) {
        auto mirror = directed.find({key.second, key.first});
        if (mirror != directed.end() && mirror->second != w) {
            throw InputError(kModule, op,
                             "asymmetric weights between '" + g.ids_[key.first] + "' and '" + g.ids_[key.second] + "'");
        }
        g.weights_(static_cast<Eigen::Index>(key.first), static_cast<Eigen::Index>(key.second)) = w;
        g.weights_(static_cast<Eigen::Index>(key.second), static_cast<Eigen::Index>(key.first)) = w;
    }

    g.adjacency_.assign(n, {});
    g.w_min_ = std::numeric_limits<double>::infinity();
    g.w_max_ = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
            const double w = g.weights_(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y));
            if (w > 0.0) {
                g.adjacency_[x].push_back({y, w});
                g.w_min_ = std::min(g.w_min_, w);
                g.w_max_ = std::max(g.w_max_, w);
                if (x < y) ++g.edge_count_;
            }
        }
    }

    // Connectivity by breadth-first search from vertex 0.
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> queue{0};
    seen[0] = true;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        for (const auto& nb : g.adjacency_[queue[head]]) {
            if (!seen[nb.index]) {
                seen[nb.index] = true;
                queue.push_back(nb.index);
            }
        }
    }
    if (queue.size() != n) throw InputError(kModule, op, "graph is disconnected");

    g.volume_ = g.mu_.sum();
    g.mu_min_ = g.mu_.minCoeff();

    g.laplacian_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t x = 0; x < n; ++x) {
        const auto xi = static_cast<Eigen::Index>(x);
        for (const auto& nb : g.adjacency_[x]) {
            const auto yi = static_cast<Eigen::Index>(nb.index);
            g.laplacian_(xi, yi) += nb.weight / g.mu_[xi];
            g.laplacian_(xi, xi) -= nb.weight / g.mu_[xi];
        }
    }
    return g;
}

std::size_t WeightedGraph::index_of(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw InputError(kModule, "index_of", "unknown vertex id '" + id + "'");
    return it->second;
}

GraphSpec WeightedGraph::to_spec() const {
    GraphSpec spec;
    for (std::size_t i = 0; i < size(); ++i) spec.vertices.push_back({ids_[i], mu_[static_cast<Eigen::Index>(i)]});
    for (std::size_t x = 0; x < size(); ++x) {
        for (const auto& nb : adjacency_[x]) {
            if (x < nb.index) spec.edges.push_back({ids_[x], ids_[nb.index], nb.weight});
        }
    }
    return spec;
}

VertexFunction laplacian(const WeightedGraph& g, const VertexFunction& u) {
    require_size(g, u, "laplacian");
    VertexFunction out(u.size());
    for (std::size_t x = 0; x < g.size(); ++x) {
        const auto xi = static_cast<Eigen::Index>(x);
        double acc = 0.0;
        for (const auto& nb : g.neighbors(x)) acc += nb.weight * (u[static_cast<Eigen::Index>(nb.index)] - u[xi]);
        out[xi] = acc / g.mu()[xi];
    }
    return out;
}

VertexFunction grad_form(const WeightedGraph& g, const VertexFunction& u, const VertexFunction& v) {
    require_size(g, u, "grad_form");
    require_size(g, v, "grad_form");
    VertexFunction out(u.size());
    for (std::size_t x = 0; x < g.size(); ++x) {
        const auto xi = static_cast<Eigen::Index>(x);
        double acc = 0.0;
        for (const auto& nb : g.neighbors(x)) {
            const auto yi = static_cast<Eigen::Index>(nb.index);
            acc += nb.weight * (u[yi] - u[xi]) * (v[yi] - v[xi]);
        }
        out[xi] = acc / (2.0 * g.mu()[xi]);
    }
    return out;
}

VertexFunction grad_norm_sq(const WeightedGraph& g, const VertexFunction& u) { return grad_form(g, u, u); }

double dirichlet_pairing(const WeightedGraph& g, const VertexFunction& u, const VertexFunction& v) {
    require_size(g, u, "dirichlet_pairing");
    require_size(g, v, "dirichlet_pairing");
    double acc = 0.0;
    for (std::size_t x = 0; x < g.size(); ++x) {
        const auto xi = static_cast<Eigen::Index>(x);
        for (const auto& nb : g.neighbors(x)) {
            if (nb.index <= x) continue;
            const auto yi = static_cast<Eigen::Index>(nb.index);
            acc += nb.weight * (u[yi] - u[xi]) * (v[yi] - v[xi]);
        }
    }
    return acc;
}

double integrate(const WeightedGraph& g, const VertexFunction& h) {
    require_size(g, h, "integrate");
    return g.mu().dot(h);
}

double average(const WeightedGraph& g, const VertexFunction& h) { return integrate(g, h) / g.volume(); }

double sup_norm(const VertexFunction& h) { return h.size() == 0 ? 0.0 : h.cwiseAbs().maxCoeff(); }

SpectralData spectral_gap(const WeightedGraph& g) {
    // −Δ = M⁻¹K with K the weighted combinatorial Laplacian; the similar
    // matrix M^{-1/2} K M^{-1/2} is symmetric.
    const Eigen::VectorXd inv_sqrt_mu = g.mu().cwiseSqrt().cwiseInverse();
    const Eigen::MatrixXd k = -(g.mu().asDiagonal() * g.laplacian_matrix());
    Eigen::MatrixXd s = inv_sqrt_mu.asDiagonal() * k * inv_sqrt_mu.asDiagonal();
    s = 0.5 * (s + s.transpose()).eval();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw SolveError(kModule, "spectral_gap", "eigen-solve failed");
    const Eigen::VectorXd& ev = solver.eigenvalues();
    const double lambda1 = ev[1];
    const double scale = std::max(1.0, ev[ev.size() - 1]);
    if (!(lambda1 > 1e-12 * scale)) {
        throw SolveError(kModule, "spectral_gap", "second eigenvalue is not positive (ill-conditioned input)");
    }
    SpectralData out;
    out.lambda1 = lambda1;
    out.elliptic_constant =
        std::sqrt(static_cast<double>(g.size() - 1) * g.volume() / (g.w_min() * lambda1));
    return out;
}

VertexFunction solve_poisson(const WeightedGraph& g, const VertexFunction& h) {
    const char* op = "solve_poisson";
    require_size(g, h, op);
    const double hbar = average(g, h);
    if (std::abs(hbar) > 1e-10 * (1.0 + sup_norm(h))) {
        throw SolveError(kModule, op, "source has nonzero mean " + std::to_string(hbar));
    }

    // Parametrize the mean-zero subspace by the first ℓ−1 values:
    // φ_last = −Σ μ_i φ_i / μ_last. The last row of Δφ = h is implied.
    const auto n = static_cast<Eigen::Index>(g.size());
    const auto m = n - 1;
    Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(n, m);
    basis.topRows(m).setIdentity();
    basis.row(n - 1) = -g.mu().head(m).transpose() / g.mu()[n - 1];

    const Eigen::MatrixXd reduced = (g.laplacian_matrix() * basis).topRows(m);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(reduced);
    if (!lu.isInvertible()) throw SolveError(kModule, op, "restricted Laplacian is singular");
    VertexFunction phi = basis * lu.solve(h.head(m));
    phi.array() -= average(g, phi);

    const double residual = sup_norm(laplacian(g, phi) - h);
    if (!(residual <= 1e-10 * (1.0 + sup_norm(h)))) {
        throw SolveError(kModule, op, "linear solve residual " + std::to_string(residual) + " above tolerance");
    }
    return phi;
}

VertexFunction dirac_source(const WeightedGraph& g, const std::vector<std::string>& points, double coefficient) {
    VertexFunction f = VertexFunction::Zero(static_cast<Eigen::Index>(g.size()));
    for (const auto& id : points) {
        if (!g.contains(id)) throw InputError(kModule, "dirac_source", "unknown vertex id '" + id + "'");
        const auto i = static_cast<Eigen::Index>(g.index_of(id));
        f[i] += coefficient / g.mu()[i];
    }
    return f;
}

VertexFunction constant_function(const WeightedGraph& g, double value) {
    return VertexFunction::Constant(static_cast<Eigen::Index>(g.size()), value);
}

}  // namespace cshlab
