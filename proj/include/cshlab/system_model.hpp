#pragma once

#include "cshlab/graph.hpp"

#include <utility>

namespace cshlab {

/// A half-integer from {1/2, 3/2, 5/2, ...}, stored as the odd integer 2p.
class HalfOdd {
public:
    HalfOdd() = default;
    /// Throws InputError unless 2·value is an odd positive integer.
    static HalfOdd from_value(double value);
    static HalfOdd from_twice(int twice);

    int twice() const noexcept { return twice_; }
    double value() const noexcept { return 0.5 * twice_; }

private:
    explicit HalfOdd(int twice) : twice_(twice) {}
    int twice_ = 1;
};

/// Generalized Chern–Simons Higgs system with λ = 1:
///   Δu = 2q e^v (e^u − σ)^{2p} (e^v − σ)^{2q−1} + f
///   Δv = 2p e^u (e^u − σ)^{2p−1} (e^v − σ)^{2q} + g
struct SystemModel {
    HalfOdd p;
    HalfOdd q;
    double sigma = 1.0;
    VertexFunction f;
    VertexFunction g;
};

/// Constants of the sup-norm bound ‖u‖_∞ + ‖v‖_∞ ≤ bound for every
/// solution with f̄, ḡ > 0 and every σ ∈ [0, 1].
struct SystemBound {
    double Lambda1 = 0.0;
    double Lambda2 = 0.0;
    double Lambda3 = 0.0;  // Λ₁/|V|
    double Ctilde = 0.0;   // elliptic constant
    double b = 0.0;        // bound on ‖Δu‖_∞, ‖Δv‖_∞
    double c = 0.0;        // bound on oscillation max − min
    double C1 = 0.0;       // max v ≥ −C₁
    double C2 = 0.0;       // max u ≥ −C₂
    double bound = 0.0;
};

/// A pair (u, v) packed as one vector of length 2ℓ: u first, then v.
using PairPoint = Eigen::VectorXd;

void validate(const WeightedGraph& g, const SystemModel& s);

std::pair<VertexFunction, VertexFunction> residual_pair(const WeightedGraph& g, const SystemModel& s,
                                                        const VertexFunction& u, const VertexFunction& v);

/// 𝒢(u,v) = ∫∇u∇v + ∫(e^u − σ)^{2p}(e^v − σ)^{2q} + ∫(fv + gu). Its
/// derivative in direction (φ, ψ) is ∫[F₂φ + F₁ψ] where (F₁, F₂) is the
/// residual pair.
double functional_G(const WeightedGraph& g, const SystemModel& s, const VertexFunction& u, const VertexFunction& v);

/// 2ℓ×2ℓ Jacobian of residual_pair with respect to (u, v). Diagonal blocks
/// are −Δ plus a diagonal; cross blocks are diagonal.
Eigen::MatrixXd jacobian_system(const WeightedGraph& g, const SystemModel& s, const VertexFunction& u,
                                const VertexFunction& v);

/// Throws InputError unless f̄ > 0, ḡ > 0 and Λ₁⁻¹ ≤ |∫f|, |∫g| ≤ Λ₁,
/// ‖f‖_∞, ‖g‖_∞ ≤ Λ₂. The bound may be +∞ when the constants overflow.
SystemBound apriori_bound_system(const WeightedGraph& g, const SystemModel& s, double Lambda1, double Lambda2);

/// Tightest (Λ₁, Λ₂) admissible for the model's f and g.
std::pair<double, double> admissible_lambdas(const WeightedGraph& g, const SystemModel& s);

/// Gauge split u = φ + w, v = ψ + z with Δφ = f − f̄, Δψ = g − ḡ. Returns
/// the largest violation of w ≤ −min φ and z ≤ −min ψ (≤ 0 when both hold).
double max_principle_violation(const WeightedGraph& g, const SystemModel& s, const VertexFunction& u,
                               const VertexFunction& v);

inline VertexFunction first_half(const PairPoint& x) { return x.head(x.size() / 2); }
inline VertexFunction second_half(const PairPoint& x) { return x.tail(x.size() / 2); }
PairPoint join(const VertexFunction& u, const VertexFunction& v);

}  // namespace cshlab
