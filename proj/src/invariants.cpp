#include "cshlab/invariants.hpp"

#include "cshlab/continuation.hpp"
#include "cshlab/errors.hpp"
#include "cshlab/random_graph.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <sstream>

namespace cshlab {

namespace {

using Body = std::function<std::string()>;  // empty string: pass

CheckResult run(const std::string& module, const std::string& name, const Body& body) {
    CheckResult c{module, name, false, ""};
    try {
        c.detail = body();
        c.passed = c.detail.empty() || c.detail.rfind("skipped", 0) == 0;
    } catch (const std::exception& e) {
        c.detail = std::string("exception: ") + e.what();
    }
    return c;
}

std::string fmt(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

double rel_gap(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

// Central difference of a vector map along `dir`.
Eigen::VectorXd directional(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& map,
                            const Eigen::VectorXd& x, const Eigen::VectorXd& dir, double h = 1e-5) {
    return (map(x + h * dir) - map(x - h * dir)) / (2.0 * h);
}

double directional(const std::function<double(const Eigen::VectorXd&)>& fn, const Eigen::VectorXd& x,
                   const Eigen::VectorXd& dir, double h = 1e-5) {
    return (fn(x + h * dir) - fn(x - h * dir)) / (2.0 * h);
}

constexpr std::size_t kEnumerationLimit = 4;
constexpr const char* kSkipped = "skipped: more than 4 vertices";

}  // namespace

std::vector<CheckResult> check_graph_core(const WeightedGraph& g, std::uint64_t seed) {
    const std::string mod = "graph-core";
    std::mt19937_64 rng(seed);
    const std::size_t n = g.size();
    std::vector<CheckResult> out;
    out.push_back(run(mod, "laplacian annihilates constants", [&]() -> std::string {
        const double r = sup_norm(laplacian(g, constant_function(g, 3.7)));
        return r <= 1e-12 ? "" : "sup |Δc| = " + fmt(r);
    }));
    out.push_back(run(mod, "green identity and zero integral", [&]() -> std::string {
        for (int k = 0; k < 50; ++k) {
            const VertexFunction u = random_function(rng, n, -3, 3);
            const VertexFunction v = random_function(rng, n, -3, 3);
            const double lhs = integrate(g, v.cwiseProduct(laplacian(g, u)));
            const double rhs = -integrate(g, grad_form(g, u, v));
            if (rel_gap(lhs, rhs) > 1e-10) return "∫vΔu = " + fmt(lhs) + " vs -∫Γ(u,v) = " + fmt(rhs);
            if (std::abs(integrate(g, laplacian(g, u))) > 1e-10 * (1.0 + sup_norm(laplacian(g, u)))) {
                return "∫Δu is not zero";
            }
            if (sup_norm(grad_form(g, u, v) - grad_form(g, v, u)) > 0.0) return "Γ is not symmetric";
        }
        return "";
    }));
    out.push_back(run(mod, "elliptic estimate", [&]() -> std::string {
        const double C = spectral_gap(g).elliptic_constant;
        for (int k = 0; k < 200; ++k) {
            const VertexFunction u = random_function(rng, n, -5, 5);
            const double osc = u.maxCoeff() - u.minCoeff();
            const double bound = C * sup_norm(laplacian(g, u));
            if (osc > bound * (1.0 + 1e-12)) return "oscillation " + fmt(osc) + " > " + fmt(bound);
        }
        return "";
    }));
    out.push_back(run(mod, "poisson round trip", [&]() -> std::string {
        for (int k = 0; k < 20; ++k) {
            const VertexFunction h = random_mean_zero(rng, g);
            const VertexFunction phi = solve_poisson(g, h);
            if (sup_norm(laplacian(g, phi) - h) > 1e-10 || std::abs(average(g, phi)) > 1e-12) {
                return "Δφ ≠ h or φ not mean-zero";
            }
        }
        return "";
    }));
    return out;
}

std::vector<CheckResult> check_scalar_model(const WeightedGraph& g, std::uint64_t seed) {
    const std::string mod = "scalar-model";
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> lam(-10.0, 10.0);
    std::uniform_int_distribution<int> pdist(1, 3);
    const std::size_t n = g.size();
    auto model = [&](int p) {
        return ScalarModel{lam(rng), p, std::uniform_real_distribution<double>(0.0, 1.0)(rng),
                           random_function(rng, n, -2, 2)};
    };
    std::vector<CheckResult> out;
    out.push_back(run(mod, "energy derivative equals weighted residual", [&]() -> std::string {
        for (int k = 0; k < 30; ++k) {
            const ScalarModel m = model(pdist(rng));
            const VertexFunction u = random_function(rng, n, -2, 1);
            const VertexFunction dir = random_function(rng, n, -1, 1);
            const double fd = directional([&](const Eigen::VectorXd& x) { return energy(g, m, x); }, u, dir);
            const double an = energy_gradient(g, m, u).dot(dir);
            if (rel_gap(fd, an) > 1e-6) return "directional derivative " + fmt(fd) + " vs " + fmt(an);
        }
        return "";
    }));
    out.push_back(run(mod, "jacobian matches residual", [&]() -> std::string {
        for (int k = 0; k < 30; ++k) {
            const ScalarModel m = model(pdist(rng));
            const VertexFunction u = random_function(rng, n, -2, 1);
            const VertexFunction dir = random_function(rng, n, -1, 1);
            const Eigen::VectorXd fd = directional([&](const Eigen::VectorXd& x) { return residual(g, m, x); }, u, dir);
            const Eigen::VectorXd an = jacobian(g, m, u) * dir;
            if (sup_norm(fd - an) > 1e-6 * std::max(1.0, sup_norm(an))) return "Jacobian mismatch";
            const Eigen::MatrixXd weighted = g.mu().asDiagonal() * jacobian(g, m, u);
            if ((weighted - weighted.transpose()).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + weighted.cwiseAbs().maxCoeff())) {
                return "μ·Jacobian is not symmetric";
            }
        }
        return "";
    }));
    out.push_back(run(mod, "gauge identity", [&]() -> std::string {
        for (int k = 0; k < 30; ++k) {
            const ScalarModel m{lam(rng), 1, 1.0, random_function(rng, n, -2, 2)};
            const GaugeData gauge = gauge_transform(g, m.f, m.lambda);
            const VertexFunction v = random_function(rng, n, -2, 1);
            const double J = energy(g, m, v + gauge.phi);
            const double Q = gauged_energy(g, m, gauge, v);
            const double defect = std::abs(J - Q + 0.5 * integrate(g, grad_norm_sq(g, gauge.phi)));
            if (defect > 1e-10 * (1.0 + std::abs(J))) return "defect " + fmt(defect);
        }
        return "";
    }));
    out.push_back(run(mod, "constant roots solve the equation", [&]() -> std::string {
        for (int k = 0; k < 30; ++k) {
            ScalarModel m = model(pdist(rng));
            m.f = constant_function(g, std::uniform_real_distribution<double>(-3.0, 3.0)(rng));
            for (double t : constant_solutions(m)) {
                const double r = sup_norm(residual(g, m, constant_function(g, t)));
                if (r > 1e-9 * (1.0 + std::abs(m.lambda) + sup_norm(m.f))) return "residual " + fmt(r) + " at u ≡ " + fmt(t);
            }
        }
        return "";
    }));
    return out;
}

std::vector<CheckResult> check_system_model(const WeightedGraph& g, std::uint64_t seed) {
    const std::string mod = "system-model";
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> half(0, 2);
    const std::size_t n = g.size();
    auto model = [&]() {
        return SystemModel{HalfOdd::from_twice(2 * half(rng) + 1), HalfOdd::from_twice(2 * half(rng) + 1),
                           std::uniform_real_distribution<double>(0.0, 1.0)(rng), random_function(rng, n, -2, 2),
                           random_function(rng, n, -2, 2)};
    };
    std::vector<CheckResult> out;
    out.push_back(run(mod, "functional derivative is the swapped residual", [&]() -> std::string {
        for (int k = 0; k < 30; ++k) {
            const SystemModel s = model();
            const Eigen::VectorXd x = random_function(rng, 2 * n, -2, 1);
            const Eigen::VectorXd dir = random_function(rng, 2 * n, -1, 1);
            const double fd = directional(
                [&](const Eigen::VectorXd& y) { return functional_G(g, s, first_half(y), second_half(y)); }, x, dir);
            const auto [F1, F2] = residual_pair(g, s, first_half(x), second_half(x));
            const double an = integrate(g, F2.cwiseProduct(first_half(dir))) + integrate(g, F1.cwiseProduct(second_half(dir)));
            if (rel_gap(fd, an) > 1e-6) return "derivative " + fmt(fd) + " vs " + fmt(an);
        }
        return "";
    }));
    out.push_back(run(mod, "jacobian matches residual pair", [&]() -> std::string {
        for (int k = 0; k < 30; ++k) {
            const SystemModel s = model();
            const Eigen::VectorXd x = random_function(rng, 2 * n, -2, 1);
            const Eigen::VectorXd dir = random_function(rng, 2 * n, -1, 1);
            auto pair = [&](const Eigen::VectorXd& y) {
                const auto [a, b] = residual_pair(g, s, first_half(y), second_half(y));
                return join(a, b);
            };
            const Eigen::VectorXd fd = directional(pair, x, dir);
            const Eigen::VectorXd an = jacobian_system(g, s, first_half(x), second_half(x)) * dir;
            if (sup_norm(fd - an) > 1e-6 * std::max(1.0, sup_norm(an))) return "Jacobian mismatch";
        }
        return "";
    }));
    out.push_back(run(mod, "a priori bound is positive", [&]() -> std::string {
        const SystemModel s{HalfOdd::from_twice(1), HalfOdd::from_twice(1), 1.0, constant_function(g, 1.0),
                            constant_function(g, 1.0)};
        const auto [l1, l2] = admissible_lambdas(g, s);
        const SystemBound b = apriori_bound_system(g, s, l1, l2);
        return b.bound > 0.0 ? "" : "bound " + fmt(b.bound);
    }));
    return out;
}

std::vector<CheckResult> check_solver(const WeightedGraph& g, std::uint64_t seed, unsigned jobs) {
    const std::string mod = "solver";
    std::mt19937_64 rng(seed);
    SolveOptions opts;
    opts.jobs = jobs;
    std::vector<CheckResult> out;
    out.push_back(run(mod, "newton reproduces constant roots", [&]() -> std::string {
        std::uniform_real_distribution<double> lam(-20.0, 20.0);
        std::uniform_real_distribution<double> c(-3.0, 3.0);
        for (int k = 0; k < 20; ++k) {
            const ScalarModel m{lam(rng), 1, 1.0, constant_function(g, c(rng))};
            const Problem pb = scalar_problem(g, m);
            for (const auto& anchor : pb.anchors) {
                auto sol = newton(pb, anchor, opts);
                if (!sol) return "newton failed from an exact constant root";
                if (sup_norm(sol->point - anchor) > 1e-10 * (1.0 + sup_norm(anchor))) return "newton drifted from anchor";
            }
        }
        return "";
    }));
    out.push_back(run(mod, "classification signs agree", [&]() -> std::string {
        if (g.size() > kEnumerationLimit) return kSkipped;
        for (double lambda : {-10.0, 10.0}) {
            for (double c : {-1.0, 1.0}) {
                const Problem pb = scalar_problem(g, ScalarModel{lambda, 1, 1.0, constant_function(g, c)});
                for (const auto& r : enumerate_solutions(pb, seed_plan(pb.dim, 20.0, opts.grid), opts)) {
                    if (r.residual_norm > opts.tol_residual) return "root residual above tolerance";
                    if (!r.nondegenerate) continue;
                    if (r.sign_det != (r.morse_index % 2 == 0 ? 1 : -1)) return "sign_det ≠ (-1)^index";
                    if (r.map_sign != pb.orientation * r.sign_det) return "map sign disagrees with Hessian sign";
                }
            }
        }
        return "";
    }));
    return out;
}

std::vector<CheckResult> check_degree(const WeightedGraph& g, unsigned jobs) {
    const std::string mod = "degree-lab";
    std::vector<CheckResult> out;
    out.push_back(run(mod, "degree table", [&]() -> std::string {
        if (g.size() > kEnumerationLimit) return kSkipped;
        DegreeOptions opts;
        opts.solve.jobs = jobs;
        opts.check_refinement = false;
        for (double lambda : {-10.0, 10.0}) {
            for (double c : {-1.0, 1.0}) {
                const DegreeReport rep = degree_by_enumeration(g, ScalarModel{lambda, 1, 1.0, constant_function(g, c)}, opts);
                if (!rep.consistent) {
                    return "lambda=" + fmt(lambda) + " f=" + fmt(c) + ": computed " + std::to_string(rep.computed_degree);
                }
                if (rep.degenerate_roots == 0 && rep.morse_sum != rep.computed_degree) return "Morse sum ≠ degree";
            }
        }
        return "";
    }));
    return out;
}

std::vector<CheckResult> check_continuation(const WeightedGraph& g, unsigned jobs) {
    const std::string mod = "continuation";
    std::vector<CheckResult> out;
    out.push_back(run(mod, "sigma family tracks ln sigma", [&]() -> std::string {
        SolveOptions opts;
        opts.jobs = jobs;
        std::vector<double> path;
        for (int k = 0; k <= 6; ++k) path.push_back(std::pow(10.0, -k));
        const SigmaTrack track = sigma_homotopy(g, ScalarModel{1.0, 1, 1.0, constant_function(g, 0.0)}, path, opts);
        if (track.lost) return track.failure;
        for (const auto& rec : track.records) {
            const double err = (rec.roots.front().point.array() - std::log(rec.parameter)).abs().maxCoeff();
            if (err > 1e-8) return "error " + fmt(err) + " at sigma=" + fmt(rec.parameter);
        }
        return "";
    }));
    return out;
}

std::vector<CheckResult> run_invariant_suites(const WeightedGraph& g, std::uint64_t seed, unsigned jobs) {
    std::vector<CheckResult> out;
    for (auto&& part : {check_graph_core(g, seed), check_scalar_model(g, seed + 1), check_system_model(g, seed + 2),
                        check_solver(g, seed + 3, jobs), check_degree(g, jobs), check_continuation(g, jobs)}) {
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

}  // namespace cshlab
