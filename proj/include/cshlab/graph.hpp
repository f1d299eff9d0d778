#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

namespace cshlab {

/// One real value per vertex, ordered like the owning graph's vertex list.
using VertexFunction = Eigen::VectorXd;

struct VertexSpec {
    std::string id;
    double mu = 1.0;
};

struct EdgeSpec {
    std::string a;
    std::string b;
    double w = 1.0;
};

/// Unvalidated description of a weighted graph, as read from a file or
/// assembled in code.
struct GraphSpec {
    std::vector<VertexSpec> vertices;
    std::vector<EdgeSpec> edges;
};

struct Neighbor {
    std::size_t index;
    double weight;
};

/// Connected finite graph with symmetric positive edge weights and a
/// positive vertex measure. Immutable once built; every vector and matrix
/// in the library uses the vertex order given at construction.
class WeightedGraph {
public:
    /// Validates `spec`. Throws InputError on disconnected graphs, self-loops,
    /// nonpositive measures or weights, and asymmetric weight entries.
    static WeightedGraph build(const GraphSpec& spec);

    std::size_t size() const noexcept { return ids_.size(); }
    const std::vector<std::string>& ids() const noexcept { return ids_; }
    const VertexFunction& mu() const noexcept { return mu_; }
    const std::vector<Neighbor>& neighbors(std::size_t x) const { return adjacency_[x]; }

    /// Index of a vertex id; throws InputError for unknown ids.
    std::size_t index_of(const std::string& id) const;
    bool contains(const std::string& id) const { return index_.count(id) != 0; }

    /// ω_{xy}, zero when x and y are not adjacent.
    double weight(std::size_t x, std::size_t y) const { return weights_(x, y); }
    const Eigen::MatrixXd& weight_matrix() const noexcept { return weights_; }

    double volume() const noexcept { return volume_; }  // |V| = Σ μ(x)
    double mu_min() const noexcept { return mu_min_; }   // μ₀
    double w_min() const noexcept { return w_min_; }     // w₀
    double w_max() const noexcept { return w_max_; }
    std::size_t edge_count() const noexcept { return edge_count_; }

    /// Dense matrix of Δ, so that (Δu)(x) = Σ_y L(x,y) u(y).
    const Eigen::MatrixXd& laplacian_matrix() const noexcept { return laplacian_; }

    /// Back to a spec with each undirected edge listed once (a < b).
    GraphSpec to_spec() const;

private:
    WeightedGraph() = default;

    std::vector<std::string> ids_;
    std::unordered_map<std::string, std::size_t> index_;
    VertexFunction mu_;
    Eigen::MatrixXd weights_;
    Eigen::MatrixXd laplacian_;
    std::vector<std::vector<Neighbor>> adjacency_;
    std::size_t edge_count_ = 0;
    double volume_ = 0.0;
    double mu_min_ = 0.0;
    double w_min_ = 0.0;
    double w_max_ = 0.0;
};

/// First nonzero eigenvalue of −Δ in the μ-weighted inner product and the
/// elliptic constant C = sqrt((ℓ−1)|V|/(w₀λ₁)) bounding max u − min u by
/// C‖Δu‖_∞.
struct SpectralData {
    double lambda1 = 0.0;
    double elliptic_constant = 0.0;
};

// Discrete calculus. All functions throw InputError on dimension mismatch.

VertexFunction laplacian(const WeightedGraph& g, const VertexFunction& u);

/// Γ(u,v)(x) = 1/(2μ(x)) Σ_{y∼x} ω_{xy}(u(y)−u(x))(v(y)−v(x)).
VertexFunction grad_form(const WeightedGraph& g, const VertexFunction& u, const VertexFunction& v);
VertexFunction grad_norm_sq(const WeightedGraph& g, const VertexFunction& u);

/// ∫ Γ(u,v) dμ = Σ over undirected edges of ω(u(y)−u(x))(v(y)−v(x)).
double dirichlet_pairing(const WeightedGraph& g, const VertexFunction& u, const VertexFunction& v);

double integrate(const WeightedGraph& g, const VertexFunction& h);
double average(const WeightedGraph& g, const VertexFunction& h);
double sup_norm(const VertexFunction& h);

SpectralData spectral_gap(const WeightedGraph& g);

/// Mean-zero φ with Δφ = h. `h` must have zero mean to within
/// 1e-10·(1+‖h‖_∞); throws SolveError otherwise.
VertexFunction solve_poisson(const WeightedGraph& g, const VertexFunction& h);

/// Σ coefficient·δ_P over `points` (repeats accumulate), δ_P(x) = 1/μ(P) at P.
VertexFunction dirac_source(const WeightedGraph& g, const std::vector<std::string>& points, double coefficient);

VertexFunction constant_function(const WeightedGraph& g, double value);

}  // namespace cshlab
