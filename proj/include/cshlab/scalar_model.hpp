#pragma once

#include "cshlab/graph.hpp"

#include <vector>

namespace cshlab {

/// Δu = λ e^u (e^u − σ)^{2p−1} + f on a weighted graph.
/// p = 1, σ = 1 is the Chern–Simons Higgs equation; p > 1 its generalized
/// form; σ ∈ [0, 1] the homotopy deformation.
struct ScalarModel {
    double lambda = 1.0;
    int p = 1;
    double sigma = 1.0;
    VertexFunction f;
};

/// Mean-zero φ with Δφ = f − f̄, β = λe^{2φ}, and f̄. Under u = v + φ the
/// equation becomes Δv = βe^v(e^v − e^{−φ}) + f̄.
struct GaugeData {
    VertexFunction phi;
    VertexFunction beta;
    double fbar = 0.0;
};

/// Sup-norm a priori bound for solutions with λf̄ ≠ 0 (p = 1, σ = 1),
/// assembled from the Palais–Smale chain of constants.
struct AprioriData {
    double a1 = 0.0;
    double b1 = 0.0;
    double c0 = 0.0;
    double c1 = 0.0;
    double A1 = 0.0;
    double upper = 0.0;
    double lower = 0.0;
    double radius = 0.0;  // max(|upper|, |lower|) + 1
};

/// Entries of u beyond this magnitude are rejected before exponentiation.
inline constexpr double kOverflowGuard = 700.0;

/// Throws InputError when p < 1, σ ∉ [0, 1], λ not finite, or f has the
/// wrong length or non-finite entries.
void validate(const WeightedGraph& g, const ScalarModel& m);

/// F(u) = −Δu + λe^u(e^u − σ)^{2p−1} + f.
VertexFunction residual(const WeightedGraph& g, const ScalarModel& m, const VertexFunction& u);

/// J(u) = ½∫|∇u|² + (λ/2p)∫(e^u − σ)^{2p} + ∫fu. The derivative in direction
/// δ_x is residual(u)(x); the Euclidean gradient is μ ⊙ residual(u).
double energy(const WeightedGraph& g, const ScalarModel& m, const VertexFunction& u);

/// Euclidean gradient of `energy`.
VertexFunction energy_gradient(const WeightedGraph& g, const ScalarModel& m, const VertexFunction& u);

/// ∂F/∂u = −Δ + diag(λ d/du[e^u(e^u − σ)^{2p−1}]). μ-symmetric:
/// μ(x)M(x,y) = μ(y)M(y,x).
Eigen::MatrixXd jacobian(const WeightedGraph& g, const ScalarModel& m, const VertexFunction& u);

/// Pointwise nonlinearity λe^t(e^t − σ)^{2p−1} and its derivative.
double nonlinearity(const ScalarModel& m, double t);
double nonlinearity_derivative(const ScalarModel& m, double t);

/// Requires the gauge identity's setting (p = 1, σ = 1 is checked by the
/// energy functions below, not here).
GaugeData gauge_transform(const WeightedGraph& g, const VertexFunction& f, double lambda);

/// Q(v) = ½∫|∇v|² + ½∫β(e^v − e^{−φ})² + ∫f̄v. Satisfies
/// J(v + φ) = Q(v) − ½∫|∇φ|². Requires p = 1 and σ = 1.
double gauged_energy(const WeightedGraph& g, const ScalarModel& m, const GaugeData& gauge, const VertexFunction& v);
VertexFunction gauged_energy_gradient(const WeightedGraph& g, const ScalarModel& m, const GaugeData& gauge,
                                      const VertexFunction& v);
/// −Δv + βe^v(e^v − e^{−φ}) + f̄.
VertexFunction gauged_residual(const WeightedGraph& g, const ScalarModel& m, const GaugeData& gauge,
                               const VertexFunction& v);
Eigen::MatrixXd gauged_energy_hessian(const WeightedGraph& g, const ScalarModel& m, const GaugeData& gauge,
                                      const VertexFunction& v);

/// All constants u solving λe^u(e^u − σ)^{2p−1} + c = 0, sorted. Returns an
/// empty list for λ = 0, c ≠ 0; throws InputError for λ = 0, c = 0.
std::vector<double> constant_solutions(double lambda, int p, double sigma, double c);

/// Same, for a model whose f is constant (throws InputError otherwise).
std::vector<double> constant_solutions(const ScalarModel& m);

/// Requires λf̄ ≠ 0, p = 1, σ = 1; throws InputError otherwise.
AprioriData apriori_radius(const WeightedGraph& g, const ScalarModel& m);

/// ∫e^u(e^u − σ)^{2p−1} dμ + (1/λ)∫f dμ, which vanishes at every root.
double solution_identity_defect(const WeightedGraph& g, const ScalarModel& m, const VertexFunction& u);

/// True when f is constant to within 1e-12·(1+|f̄|).
bool has_constant_source(const ScalarModel& m);

}  // namespace cshlab
