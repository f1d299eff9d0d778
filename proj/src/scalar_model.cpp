#include "cshlab/scalar_model.hpp"

#include "cshlab/detail/ipow.hpp"
#include "cshlab/errors.hpp"
#include "cshlab/polynomial.hpp"

#include <algorithm>
#include <cmath>

namespace cshlab {

using detail::ipow;

namespace {

constexpr const char* kModule = "scalar-model";

void guard(const VertexFunction& u, const char* op) {
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        if (!std::isfinite(u[i]) || std::abs(u[i]) > kOverflowGuard) {
            throw SolveError(kModule, op, "overflow guard: |u| exceeds 700 at vertex " + std::to_string(i));
        }
    }
}

void check(const WeightedGraph& g, const ScalarModel& m, const VertexFunction& u, const char* op) {
    validate(g, m);
    if (static_cast<std::size_t>(u.size()) != g.size()) {
        throw InputError(kModule, op, "dimension mismatch");
    }
    guard(u, op);
}

void require_gauge_setting(const ScalarModel& m, const char* op) {
    if (m.p != 1 || m.sigma != 1.0) throw InputError(kModule, op, "gauge identity needs p = 1 and sigma = 1");
}

}  // namespace

void validate(const WeightedGraph& g, const ScalarModel& m) {
    const char* op = "validate";
    if (m.p < 1) throw InputError(kModule, op, "p must be a positive integer");
    if (!(m.sigma >= 0.0 && m.sigma <= 1.0)) throw InputError(kModule, op, "sigma must lie in [0, 1]");
    if (!std::isfinite(m.lambda)) throw InputError(kModule, op, "lambda must be finite");
    if (static_cast<std::size_t>(m.f.size()) != g.size()) throw InputError(kModule, op, "f has wrong length");
    if (!m.f.allFinite()) throw InputError(kModule, op, "f has non-finite entries");
}

double nonlinearity(const ScalarModel& m, double t) {
    const double e = std::exp(t);
    return m.lambda * e * ipow(e - m.sigma, 2 * m.p - 1);
}

double nonlinearity_derivative(const ScalarModel& m, double t) {
    const double e = std::exp(t);
    const int k = 2 * m.p - 1;
    return m.lambda * (e * ipow(e - m.sigma, k) + k * e * e * ipow(e - m.sigma, k - 1));
}

VertexFunction residual(const WeightedGraph& g, const ScalarModel& m, const VertexFunction& u) {
    check(g, m, u, "residual");
    VertexFunction out = -(g.laplacian_matrix() * u) + m.f;
    for (Eigen::Index i = 0; i < u.size(); ++i) out[i] += nonlinearity(m, u[i]);
    return out;
}

double energy(const WeightedGraph& g, const ScalarModel& m, const VertexFunction& u) {
    check(g, m, u, "energy");
    double potential = 0.0;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        potential += g.mu()[i] * ipow(std::exp(u[i]) - m.sigma, 2 * m.p);
    }
    return 0.5 * dirichlet_pairing(g, u, u) + m.lambda / (2.0 * m.p) * potential + integrate(g, m.f.cwiseProduct(u));
}

VertexFunction energy_gradient(const WeightedGraph& g, const ScalarModel& m, const VertexFunction& u) {
    return g.mu().cwiseProduct(residual(g, m, u));
}

Eigen::MatrixXd jacobian(const WeightedGraph& g, const ScalarModel& m, const VertexFunction& u) {
    check(g, m, u, "jacobian");
    Eigen::MatrixXd jac = -g.laplacian_matrix();
    for (Eigen::Index i = 0; i < u.size(); ++i) jac(i, i) += nonlinearity_derivative(m, u[i]);
    return jac;
}

GaugeData gauge_transform(const WeightedGraph& g, const VertexFunction& f, double lambda) {
    GaugeData out;
    out.fbar = average(g, f);
    VertexFunction centered = f;
    centered.array() -= out.fbar;
    out.phi = solve_poisson(g, centered);
    out.beta = lambda * (2.0 * out.phi.array()).exp();
    return out;
}

double gauged_energy(const WeightedGraph& g, const ScalarModel& m, const GaugeData& gauge, const VertexFunction& v) {
    check(g, m, v, "gauged_energy");
    require_gauge_setting(m, "gauged_energy");
    const Eigen::ArrayXd gap = v.array().exp() - (-gauge.phi.array()).exp();
    const VertexFunction pot = (gauge.beta.array() * gap.square()).matrix();
    return 0.5 * dirichlet_pairing(g, v, v) + 0.5 * integrate(g, pot) + gauge.fbar * integrate(g, v);
}

VertexFunction gauged_residual(const WeightedGraph& g, const ScalarModel& m, const GaugeData& gauge,
                               const VertexFunction& v) {
    check(g, m, v, "gauged_residual");
    require_gauge_setting(m, "gauged_residual");
    const Eigen::ArrayXd ev = v.array().exp();
    VertexFunction out = -(g.laplacian_matrix() * v);
    out.array() += gauge.beta.array() * ev * (ev - (-gauge.phi.array()).exp()) + gauge.fbar;
    return out;
}

VertexFunction gauged_energy_gradient(const WeightedGraph& g, const ScalarModel& m, const GaugeData& gauge,
                                      const VertexFunction& v) {
    return g.mu().cwiseProduct(gauged_residual(g, m, gauge, v));
}

Eigen::MatrixXd gauged_energy_hessian(const WeightedGraph& g, const ScalarModel& m, const GaugeData& gauge,
                                      const VertexFunction& v) {
    check(g, m, v, "gauged_energy_hessian");
    require_gauge_setting(m, "gauged_energy_hessian");
    Eigen::MatrixXd h = -(g.mu().asDiagonal() * g.laplacian_matrix());
    const Eigen::ArrayXd ev = v.array().exp();
    const Eigen::ArrayXd diag =
        g.mu().array() * gauge.beta.array() * (2.0 * ev * ev - ev * (-gauge.phi.array()).exp());
    h.diagonal() += diag.matrix();
    return h;
}

std::vector<double> constant_solutions(double lambda, int p, double sigma, double c) {
    const char* op = "constant_solutions";
    if (p < 1) throw InputError(kModule, op, "p must be a positive integer");
    if (!(sigma >= 0.0 && sigma <= 1.0)) throw InputError(kModule, op, "sigma must lie in [0, 1]");
    if (lambda == 0.0) {
        if (c == 0.0) throw InputError(kModule, op, "every constant solves when lambda = 0 and c = 0");
        return {};
    }
    // λ t (t − σ)^{2p−1} + c, t = e^u > 0.
    const Polynomial poly =
        Polynomial(std::vector<double>{0.0, lambda}) * Polynomial::binomial_power(sigma, 2 * p - 1) +
        Polynomial(std::vector<double>{c});
    std::vector<double> out;
    const double hi = poly.root_bound() * 2.0 + 1.0;
    for (double t : poly.real_roots(0.0, hi)) {
        if (t > 0.0) out.push_back(std::log(t));
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool has_constant_source(const ScalarModel& m) {
    if (m.f.size() == 0) return false;
    const double lo = m.f.minCoeff();
    const double hi = m.f.maxCoeff();
    return hi - lo <= 1e-12 * (1.0 + std::abs(0.5 * (lo + hi)));
}

std::vector<double> constant_solutions(const ScalarModel& m) {
    if (!has_constant_source(m)) throw InputError(kModule, "constant_solutions", "source f is not constant");
    return constant_solutions(m.lambda, m.p, m.sigma, m.f.mean());
}

AprioriData apriori_radius(const WeightedGraph& g, const ScalarModel& m) {
    const char* op = "apriori_radius";
    validate(g, m);
    if (m.p != 1 || m.sigma != 1.0) throw InputError(kModule, op, "a priori constants need p = 1 and sigma = 1");
    const double fint = integrate(g, m.f);
    if (m.lambda == 0.0 || fint == 0.0) {
        throw InputError(kModule, op, "lambda * mean(f) = 0: unbounded family possible");
    }
    const double vol = g.volume();
    const double abs_lambda = std::abs(m.lambda);

    AprioriData d;
    d.a1 = vol + std::abs(fint) / abs_lambda;
    const double s = 1.0 + std::sqrt(1.0 + 4.0 * d.a1 / g.mu_min());
    d.upper = std::max(0.0, std::log(s / 2.0));
    d.b1 = abs_lambda * (s * s / 4.0 + s / 2.0) + sup_norm(m.f);
    d.c0 = d.b1 * spectral_gap(g).elliptic_constant;
    d.c1 = -fint / m.lambda;
    d.A1 = -std::log(std::min(1.0, std::abs(d.c1) / (4.0 * vol)));
    d.lower = -d.A1 - d.c0;
    d.radius = std::max(std::abs(d.upper), std::abs(d.lower)) + 1.0;
    return d;
}

double solution_identity_defect(const WeightedGraph& g, const ScalarModel& m, const VertexFunction& u) {
    if (m.lambda == 0.0) throw InputError(kModule, "solution_identity", "lambda must be nonzero");
    check(g, m, u, "solution_identity");
    VertexFunction h(u.size());
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        const double e = std::exp(u[i]);
        h[i] = e * ipow(e - m.sigma, 2 * m.p - 1);
    }
    return integrate(g, h) + integrate(g, m.f) / m.lambda;
}

}  // namespace cshlab
