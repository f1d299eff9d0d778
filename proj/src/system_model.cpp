#include "cshlab/system_model.hpp"

#include "cshlab/detail/ipow.hpp"
#include "cshlab/errors.hpp"
#include "cshlab/scalar_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cshlab {

using detail::ipow;

namespace {

constexpr const char* kModule = "system-model";

void check(const WeightedGraph& g, const SystemModel& s, const VertexFunction& u, const VertexFunction& v,
           const char* op) {
    validate(g, s);
    if (static_cast<std::size_t>(u.size()) != g.size() || static_cast<std::size_t>(v.size()) != g.size()) {
        throw InputError(kModule, op, "dimension mismatch");
    }
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        if (!std::isfinite(u[i]) || !std::isfinite(v[i]) || std::abs(u[i]) > kOverflowGuard ||
            std::abs(v[i]) > kOverflowGuard) {
            throw SolveError(kModule, op, "overflow guard: |u| or |v| exceeds 700 at vertex " + std::to_string(i));
        }
    }
}

// Pointwise pieces. a = e^u − σ, b = e^v − σ.
struct Local {
    double eu, ev, a, b;
};

Local local(const SystemModel& s, double u, double v) {
    const double eu = std::exp(u);
    const double ev = std::exp(v);
    return {eu, ev, eu - s.sigma, ev - s.sigma};
}

}  // namespace

HalfOdd HalfOdd::from_value(double value) {
    const double twice = 2.0 * value;
    const double rounded = std::round(twice);
    if (!(std::abs(twice - rounded) < 1e-12) || rounded < 1.0 || static_cast<long>(rounded) % 2 == 0) {
        throw InputError(kModule, "validate", "exponent must lie in {1/2, 3/2, 5/2, ...}");
    }
    return HalfOdd(static_cast<int>(rounded));
}

HalfOdd HalfOdd::from_twice(int twice) {
    if (twice < 1 || twice % 2 == 0) throw InputError(kModule, "validate", "2p must be an odd positive integer");
    return HalfOdd(twice);
}

void validate(const WeightedGraph& g, const SystemModel& s) {
    const char* op = "validate";
    if (!(s.sigma >= 0.0 && s.sigma <= 1.0)) throw InputError(kModule, op, "sigma must lie in [0, 1]");
    if (static_cast<std::size_t>(s.f.size()) != g.size() || static_cast<std::size_t>(s.g.size()) != g.size()) {
        throw InputError(kModule, op, "f or g has wrong length");
    }
    if (!s.f.allFinite() || !s.g.allFinite()) throw InputError(kModule, op, "f or g has non-finite entries");
}

PairPoint join(const VertexFunction& u, const VertexFunction& v) {
    PairPoint x(u.size() + v.size());
    x << u, v;
    return x;
}

std::pair<VertexFunction, VertexFunction> residual_pair(const WeightedGraph& g, const SystemModel& s,
                                                        const VertexFunction& u, const VertexFunction& v) {
    check(g, s, u, v, "residual_pair");
    const int tp = s.p.twice();
    const int tq = s.q.twice();
    VertexFunction first = -(g.laplacian_matrix() * u) + s.f;
    VertexFunction second = -(g.laplacian_matrix() * v) + s.g;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        const Local l = local(s, u[i], v[i]);
        first[i] += tq * l.ev * ipow(l.a, tp) * ipow(l.b, tq - 1);
        second[i] += tp * l.eu * ipow(l.a, tp - 1) * ipow(l.b, tq);
    }
    return {first, second};
}

double functional_G(const WeightedGraph& g, const SystemModel& s, const VertexFunction& u, const VertexFunction& v) {
    check(g, s, u, v, "functional_G");
    VertexFunction pot(u.size());
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        const Local l = local(s, u[i], v[i]);
        pot[i] = ipow(l.a, s.p.twice()) * ipow(l.b, s.q.twice());
    }
    return dirichlet_pairing(g, u, v) + integrate(g, pot) + integrate(g, s.f.cwiseProduct(v) + s.g.cwiseProduct(u));
}

Eigen::MatrixXd jacobian_system(const WeightedGraph& g, const SystemModel& s, const VertexFunction& u,
                                const VertexFunction& v) {
    check(g, s, u, v, "jacobian_system");
    const auto n = u.size();
    const int tp = s.p.twice();
    const int tq = s.q.twice();
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    jac.topLeftCorner(n, n) = -g.laplacian_matrix();
    jac.bottomRightCorner(n, n) = -g.laplacian_matrix();
    for (Eigen::Index i = 0; i < n; ++i) {
        const Local l = local(s, u[i], v[i]);
        // A = 2q e^v a^{2p} b^{2q−1}, B = 2p e^u a^{2p−1} b^{2q}.
        const double mixed = tp * tq * l.eu * l.ev * ipow(l.a, tp - 1) * ipow(l.b, tq - 1);
        const double dA_dv =
            tq * l.ev * ipow(l.a, tp) * (ipow(l.b, tq - 1) + (tq - 1) * l.ev * ipow(l.b, tq - 2));
        const double dB_du =
            tp * l.eu * ipow(l.b, tq) * (ipow(l.a, tp - 1) + (tp - 1) * l.eu * ipow(l.a, tp - 2));
        jac(i, i) += mixed;
        jac(i, n + i) = dA_dv;
        jac(n + i, i) = dB_du;
        jac(n + i, n + i) += mixed;
    }
    return jac;
}

std::pair<double, double> admissible_lambdas(const WeightedGraph& g, const SystemModel& s) {
    const double fi = std::abs(integrate(g, s.f));
    const double gi = std::abs(integrate(g, s.g));
    const double lambda1 = std::max({fi, gi, 1.0 / std::min(fi, gi)});
    const double lambda2 = std::max(sup_norm(s.f), sup_norm(s.g));
    return {lambda1, lambda2};
}

namespace {

// Solves log(target) = 2a·log(E+1) + M + (2b−1)·log(e^M + 1) for M by
// bisection; the right side is strictly increasing in M.
double solve_level(double log_target, int two_a, int two_b, double log_E_plus_1) {
    auto rhs = [&](double m) { return two_a * log_E_plus_1 + m + (two_b - 1) * std::log1p(std::exp(m)); };
    if (!std::isfinite(log_E_plus_1)) return -std::numeric_limits<double>::infinity();
    double lo = -50.0;
    double hi = 50.0;
    while (rhs(lo) > log_target && lo > -1e300) lo *= 2.0;
    while (rhs(hi) < log_target && hi < 1e300) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-14 * (1.0 + std::abs(lo)); ++it) {
        const double mid = 0.5 * (lo + hi);
        (rhs(mid) < log_target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

SystemBound apriori_bound_system(const WeightedGraph& g, const SystemModel& s, double Lambda1, double Lambda2) {
    const char* op = "apriori_bound_system";
    validate(g, s);
    if (!(Lambda1 > 0.0) || !(Lambda2 > 0.0)) throw InputError(kModule, op, "Lambda1 and Lambda2 must be positive");
    if (!(average(g, s.f) > 0.0) || !(average(g, s.g) > 0.0)) {
        throw InputError(kModule, op, "bound needs mean(f) > 0 and mean(g) > 0");
    }
    const double slack = 1e-12;
    for (const VertexFunction* h : {&s.f, &s.g}) {
        const double a = std::abs(integrate(g, *h));
        if (a < (1.0 / Lambda1) * (1.0 - slack) || a > Lambda1 * (1.0 + slack)) {
            throw InputError(kModule, op, "|integral| of source violates 1/Lambda1 <= |int| <= Lambda1");
        }
        if (sup_norm(*h) > Lambda2 * (1.0 + slack)) throw InputError(kModule, op, "sup norm of source exceeds Lambda2");
    }

    SystemBound out;
    out.Lambda1 = Lambda1;
    out.Lambda2 = Lambda2;
    out.Lambda3 = Lambda1 / g.volume();
    out.Ctilde = spectral_gap(g).elliptic_constant;
    const int tp = s.p.twice();
    const int tq = s.q.twice();
    const double spread = out.Ctilde * (Lambda2 + out.Lambda3);
    const double E = std::exp(2.0 * spread);
    out.b = std::max(s.p.value(), s.q.value()) * 2.0 * E * std::pow(E + 1.0, tp + tq - 1) + out.Lambda3 + spread;
    out.c = out.Ctilde * out.b;

    const double log_E_plus_1 = std::log1p(E);
    out.C1 = -solve_level(std::log(1.0 / (Lambda1 * tq * g.volume())), tp, tq, log_E_plus_1);
    out.C2 = -solve_level(std::log(1.0 / (Lambda1 * tp * g.volume())), tq, tp, log_E_plus_1);
    out.bound = std::max({4.0 * spread, out.C1 + out.c, out.C2 + out.c});
    if (!std::isfinite(out.bound)) out.bound = std::numeric_limits<double>::infinity();
    return out;
}

double max_principle_violation(const WeightedGraph& g, const SystemModel& s, const VertexFunction& u,
                               const VertexFunction& v) {
    validate(g, s);
    auto centered = [&](const VertexFunction& h) {
        VertexFunction c = h;
        c.array() -= average(g, h);
        return c;
    };
    const VertexFunction phi = solve_poisson(g, centered(s.f));
    const VertexFunction psi = solve_poisson(g, centered(s.g));
    const double w_excess = ((u - phi).array() + phi.minCoeff()).maxCoeff();
    const double z_excess = ((v - psi).array() + psi.minCoeff()).maxCoeff();
    return std::max(w_excess, z_excess);
}

}  // namespace cshlab
