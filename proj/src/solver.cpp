#include "cshlab/solver.hpp"

#include "cshlab/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <random>
#include <thread>

namespace cshlab {

namespace {

constexpr const char* kModule = "solver";
constexpr double kSettledStep = 1e-6;

bool evaluate(const ResidualFn& residual, const Eigen::VectorXd& x, Eigen::VectorXd& out) {
    if (!x.allFinite() || sup_norm(x) > kOverflowGuard) return false;
    try {
        out = residual(x);
    } catch (const SolveError&) {
        return false;
    }
    return out.allFinite();
}

// At a numerically singular Jacobian, a genuine (possibly degenerate) root
// shows a residual that grows off the root along the null direction; an
// asymptotic flat region does not.
bool isolated_along_null(const ResidualFn& residual, const Eigen::MatrixXd& J, const Eigen::VectorXd& x,
                         double tol) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(J, Eigen::ComputeFullV);
    const Eigen::VectorXd v = svd.matrixV().col(svd.matrixV().cols() - 1);
    const double delta = 1e-3 * (1.0 + sup_norm(x));
    for (double sign : {1.0, -1.0}) {
        Eigen::VectorXd F;
        if (!evaluate(residual, x + sign * delta * v, F) || sup_norm(F) > 1e3 * tol) return true;
    }
    return false;
}

bool lex_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a[i] != b[i]) return a[i] < b[i];
    }
    return false;
}

struct Candidate {
    Eigen::VectorXd point;
    bool pinv = false;
};

void merge_candidate(std::vector<Candidate>& list, Candidate c, double tol) {
    for (const auto& existing : list) {
        if (sup_norm(existing.point - c.point) <= tol) return;
    }
    list.push_back(std::move(c));
}

unsigned resolve_jobs(unsigned jobs) {
    if (jobs != 0) return jobs;
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

MorseData morse_data(const Eigen::MatrixXd& matrix, const Eigen::VectorXd& metric) {
    const auto n = matrix.rows();
    Eigen::MatrixXd s = matrix;
    if (metric.size() != 0) {
        const Eigen::VectorXd root = metric.cwiseSqrt();
        s = root.asDiagonal() * matrix * root.cwiseInverse().asDiagonal();
    }
    s = 0.5 * (s + s.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s, Eigen::EigenvaluesOnly);

    MorseData out;
    out.eigenvalues = eig.eigenvalues();
    const double radius = n == 0 ? 0.0 : out.eigenvalues.cwiseAbs().maxCoeff();
    const double cutoff = 1e-8 * radius;
    out.nondegenerate = radius > 0.0 && out.eigenvalues.cwiseAbs().minCoeff() > cutoff;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (out.eigenvalues[i] < (out.nondegenerate ? 0.0 : -cutoff)) ++out.morse_index;
    }
    if (out.nondegenerate) {
        out.sign_det = out.morse_index % 2 == 0 ? 1 : -1;
        out.critical_group_ranks.assign(static_cast<std::size_t>(n) + 1, 0);
        out.critical_group_ranks[static_cast<std::size_t>(out.morse_index)] = 1;
    }
    return out;
}

NewtonStats newton_iterate(const ResidualFn& residual, const JacobianFn& jacobian, const Eigen::VectorXd& seed,
                           const SolveOptions& opts) {
    NewtonStats st;
    Eigen::VectorXd x = seed;
    Eigen::VectorXd F;
    st.last = x;
    if (!evaluate(residual, x, F)) {
        st.failure = "overflow region entered";
        return st;
    }
    // A small residual alone does not certify a root: far out where e^u ≈ 0
    // the residual is tiny while Newton keeps stepping towards −∞, or the
    // Jacobian is numerically singular and the pseudo-inverse drops the
    // escaping direction. Acceptance also needs a small step and no flat
    // null direction.
    double last_step = std::numeric_limits<double>::infinity();
    bool flat = false;
    auto settled = [&] { return !flat && last_step <= kSettledStep * (1.0 + sup_norm(x)); };
    int polishing = 0;
    for (st.iterations = 0; st.iterations < opts.max_iter; ++st.iterations) {
        const double nF = sup_norm(F);
        st.residual_norm = nF;
        const Eigen::MatrixXd J = jacobian(x);
        Eigen::VectorXd d;
        Eigen::FullPivLU<Eigen::MatrixXd> lu(J);
        if (lu.isInvertible()) d = lu.solve(-F);
        flat = false;
        if (d.size() == 0 || !d.allFinite()) {
            d = J.completeOrthogonalDecomposition().solve(-F);
            st.used_pseudo_inverse = true;
            flat = nF <= opts.tol_residual && !isolated_along_null(residual, J, x, opts.tol_residual);
        }
        if (!d.allFinite()) {
            st.failure = "singular Jacobian";
            return st;
        }
        last_step = sup_norm(d);
        if (nF <= opts.tol_residual && !flat && last_step <= opts.tol_step * (1.0 + sup_norm(x))) {
            st.converged = true;
            st.last = x;
            return st;
        }

        const double phi = 0.5 * F.squaredNorm();
        double t = 1.0;
        bool accepted = false;
        Eigen::VectorXd xt;
        Eigen::VectorXd Ft;
        while (t >= 1e-10) {
            xt = x + t * d;
            if (evaluate(residual, xt, Ft) && 0.5 * Ft.squaredNorm() <= (1.0 - 2.0 * opts.armijo * t) * phi) {
                accepted = true;
                break;
            }
            t *= opts.damping;
        }
        if (!accepted) {
            st.last = x;
            if (nF <= opts.tol_residual && settled()) {
                st.converged = true;
                return st;
            }
            st.failure = nF <= opts.tol_residual ? "residual small but iterates not settled" : "line search stalled";
            return st;
        }
        x = xt;
        F = Ft;
        st.last = x;
        if (nF <= opts.tol_residual && ++polishing > 50) break;
    }
    st.residual_norm = sup_norm(F);
    if (st.residual_norm <= opts.tol_residual && settled()) {
        st.converged = true;
    } else {
        st.failure = st.residual_norm <= opts.tol_residual ? "residual small but iterates not settled" : "max_iter exceeded";
    }
    return st;
}

ClassifiedSolution classify(const Problem& pb, const Eigen::VectorXd& root, bool used_pseudo_inverse) {
    ClassifiedSolution out;
    out.point = root;
    out.residual_norm = sup_norm(pb.residual(root));
    out.used_pseudo_inverse = used_pseudo_inverse;
    const MorseData md = morse_data(pb.gradient_jacobian(root), pb.metric);
    out.morse_index = md.morse_index;
    out.sign_det = md.sign_det;
    out.nondegenerate = md.nondegenerate;
    out.critical_group_ranks = md.critical_group_ranks;
    out.eigenvalues = md.eigenvalues;
    if (md.nondegenerate) {
        const double det = Eigen::PartialPivLU<Eigen::MatrixXd>(pb.jacobian(root)).determinant();
        out.map_sign = det > 0.0 ? 1 : (det < 0.0 ? -1 : 0);
    }
    return out;
}

std::optional<ClassifiedSolution> newton(const Problem& pb, const Eigen::VectorXd& seed, const SolveOptions& opts,
                                         NewtonStats* stats) {
    if (static_cast<std::size_t>(seed.size()) != pb.dim) throw InputError(kModule, "newton", "seed has wrong length");
    NewtonStats st = newton_iterate(pb.residual, pb.jacobian, seed, opts);
    if (stats) *stats = st;
    if (!st.converged) return std::nullopt;
    return classify(pb, st.last, st.used_pseudo_inverse);
}

std::vector<SeedBox> seed_plan(std::size_t dim, double radius, const SeedGrid& grid, std::optional<double> upper_hint,
                               bool refine) {
    if (!std::isfinite(radius) || radius <= 0.0) throw InputError(kModule, "seed_plan", "radius must be positive and finite");
    const auto n = static_cast<Eigen::Index>(dim);
    std::vector<SeedBox> plan;
    double hi = std::min(grid.core_upper, radius);
    if (upper_hint) hi = std::min(hi, *upper_hint + 0.5);
    const double lo = std::max(grid.core_lower, -radius);
    const int points = !refine ? grid.points : (grid.refined_points > 0 ? grid.refined_points : 2 * grid.points - 1);
    if (hi > lo && points >= 2) {
        plan.push_back({Eigen::VectorXd::Constant(n, lo), Eigen::VectorXd::Constant(n, hi), points});
    }
    if (grid.outer_points >= 2) {
        plan.push_back({Eigen::VectorXd::Constant(n, -radius), Eigen::VectorXd::Constant(n, radius), grid.outer_points});
    }
    return plan;
}

std::vector<ClassifiedSolution> enumerate_solutions(const Problem& pb, const std::vector<SeedBox>& boxes,
                                                    const SolveOptions& opts,
                                                    const std::vector<Eigen::VectorXd>& extra_seeds,
                                                    EnumerationStats* stats) {
    const char* op = "enumerate_solutions";
    const auto n = static_cast<Eigen::Index>(pb.dim);
    EnumerationStats local_stats;
    if (!(opts.dedup_tol > 10.0 * std::sqrt(opts.tol_residual))) {
        local_stats.warnings.push_back("dedup_tol is not above 10*sqrt(tol_residual)");
    }

    std::vector<Eigen::VectorXd> fixed = pb.anchors;
    fixed.insert(fixed.end(), extra_seeds.begin(), extra_seeds.end());
    double budget = static_cast<double>(fixed.size());
    std::vector<std::size_t> box_sizes;
    for (const auto& box : boxes) {
        if (box.lower.size() != n || box.upper.size() != n || box.points < 1) {
            throw InputError(kModule, op, "seed box does not match problem dimension");
        }
        const double count = std::pow(static_cast<double>(box.points), static_cast<double>(n));
        budget += count;
        if (budget > kSeedBudget) {
            throw SolveError(kModule, op, "seed budget exceeded: more than 1e7 seeds requested");
        }
        box_sizes.push_back(static_cast<std::size_t>(count));
    }
    const auto total = static_cast<std::size_t>(budget);
    local_stats.seeds = total;

    auto seed_at = [&](std::size_t k) -> Eigen::VectorXd {
        if (k < fixed.size()) return fixed[k];
        k -= fixed.size();
        std::size_t b = 0;
        while (k >= box_sizes[b]) k -= box_sizes[b++];
        const auto& box = boxes[b];
        Eigen::VectorXd x(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto digit = static_cast<int>(k % static_cast<std::size_t>(box.points));
            k /= static_cast<std::size_t>(box.points);
            const double t = box.points == 1 ? 0.5 : static_cast<double>(digit) / (box.points - 1);
            x[i] = box.lower[i] + t * (box.upper[i] - box.lower[i]);
        }
        return x;
    };

    const unsigned jobs = resolve_jobs(opts.jobs);
    const std::size_t chunk = std::max<std::size_t>(64, total / (8 * jobs) + 1);
    const std::size_t chunks = (total + chunk - 1) / chunk;
    std::vector<std::vector<Candidate>> found(chunks);
    std::vector<std::size_t> converged(chunks, 0);
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto worker = [&]() {
        try {
            for (std::size_t c = next++; c < chunks; c = next++) {
                const std::size_t end = std::min(total, (c + 1) * chunk);
                for (std::size_t k = c * chunk; k < end; ++k) {
                    NewtonStats st = newton_iterate(pb.residual, pb.jacobian, seed_at(k), opts);
                    if (!st.converged) continue;
                    ++converged[c];
                    merge_candidate(found[c], {st.last, st.used_pseudo_inverse}, opts.dedup_tol);
                }
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!error) error = std::current_exception();
        }
    };
    if (jobs == 1 || chunks == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned j = 0; j < std::min<std::size_t>(jobs, chunks); ++j) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);

    std::vector<Candidate> merged;
    for (std::size_t c = 0; c < chunks; ++c) {
        local_stats.converged += converged[c];
        for (auto& cand : found[c]) merge_candidate(merged, std::move(cand), opts.dedup_tol);
    }
    std::vector<ClassifiedSolution> roots;
    roots.reserve(merged.size());
    for (const auto& cand : merged) roots.push_back(classify(pb, cand.point, cand.pinv));
    std::sort(roots.begin(), roots.end(),
              [](const ClassifiedSolution& a, const ClassifiedSolution& b) { return lex_less(a.point, b.point); });
    if (stats) *stats = local_stats;
    return roots;
}

bool roots_subset(const std::vector<ClassifiedSolution>& base, const std::vector<ClassifiedSolution>& other,
                  double tol) {
    for (const auto& r : base) {
        const bool hit = std::any_of(other.begin(), other.end(),
                                     [&](const ClassifiedSolution& o) { return sup_norm(o.point - r.point) <= tol; });
        if (!hit) return false;
    }
    return true;
}

namespace {

Eigen::MatrixXd fd_hessian(const GradientFn& gradient, const Eigen::VectorXd& x) {
    const auto n = x.size();
    Eigen::MatrixXd h(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const double step = 1e-5 * (1.0 + std::abs(x[j]));
        Eigen::VectorXd xp = x;
        Eigen::VectorXd xm = x;
        xp[j] += step;
        xm[j] -= step;
        h.col(j) = (gradient(xp) - gradient(xm)) / (2.0 * step);
    }
    return 0.5 * (h + h.transpose());
}

struct SpgResult {
    Eigen::VectorXd x;
    double value;
};

// Spectral projected gradient for minimization over a box.
SpgResult spg(const EnergyFn& energy, const GradientFn& gradient, const Eigen::VectorXd& lower,
              const Eigen::VectorXd& upper, Eigen::VectorXd x, const ExtremizeOptions& opts) {
    auto project = [&](const Eigen::VectorXd& y) { return y.cwiseMax(lower).cwiseMin(upper).eval(); };
    auto checked = [&](const Eigen::VectorXd& y) {
        const double e = energy(y);
        if (!std::isfinite(e)) throw SolveError(kModule, "box_extremize", "non-finite energy in box");
        return e;
    };
    x = project(x);
    double value = checked(x);
    Eigen::VectorXd g = gradient(x);
    double alpha = 1.0 / std::max(1.0, sup_norm(g));
    for (int it = 0; it < opts.max_iter; ++it) {
        if (sup_norm(project(x - g) - x) <= 0.1 * opts.tol_gradient) break;
        const Eigen::VectorXd d = project(x - alpha * g) - x;
        const double slope = g.dot(d);
        if (!(slope < 0.0)) break;
        double t = 1.0;
        Eigen::VectorXd xn;
        double vn = 0.0;
        for (;;) {
            xn = x + t * d;
            vn = checked(xn);
            if (vn <= value + 1e-4 * t * slope || t < 1e-20) break;
            t *= 0.5;
        }
        if (t < 1e-20) break;
        const Eigen::VectorXd gn = gradient(xn);
        const Eigen::VectorXd s = xn - x;
        const double sy = s.dot(gn - g);
        alpha = sy > 0.0 ? std::clamp(s.squaredNorm() / sy, 1e-10, 1e10) : 1e3;
        x = xn;
        g = gn;
        value = vn;
    }
    return {x, value};
}

}  // namespace

BoxExtremum box_extremize(const EnergyFn& energy, const GradientFn& gradient, const Eigen::VectorXd& lower,
                          const Eigen::VectorXd& upper, ExtremumMode mode, const ExtremizeOptions& opts,
                          const HessianFn& hessian) {
    const char* op = "box_extremize";
    const auto n = lower.size();
    if (n == 0 || upper.size() != n) throw InputError(kModule, op, "bounds have mismatched lengths");
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!(lower[i] < upper[i])) throw InputError(kModule, op, "lower must be < upper componentwise");
    }
    const double sign = mode == ExtremumMode::min ? 1.0 : -1.0;
    EnergyFn e = [&](const Eigen::VectorXd& x) { return sign * energy(x); };
    GradientFn gr = [&](const Eigen::VectorXd& x) { return (sign * gradient(x)).eval(); };

    std::vector<Eigen::VectorXd> starts{0.5 * (lower + upper), lower, upper};
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int k = 0; k < opts.random_starts; ++k) {
        Eigen::VectorXd x(n);
        for (Eigen::Index i = 0; i < n; ++i) x[i] = lower[i] + unit(rng) * (upper[i] - lower[i]);
        starts.push_back(x);
    }
    std::optional<SpgResult> best;
    for (const auto& s : starts) {
        SpgResult r = spg(e, gr, lower, upper, s, opts);
        if (!best || r.value < best->value) best = r;
    }

    BoxExtremum out;
    Eigen::VectorXd x = best->x;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double slack = 1e-7 * (1.0 + upper[i] - lower[i]);
        if (x[i] - lower[i] <= slack || upper[i] - x[i] <= slack) out.touching.push_back(static_cast<std::size_t>(i));
    }
    out.interior = out.touching.empty();
    auto hess = [&](const Eigen::VectorXd& y) -> Eigen::MatrixXd {
        return hessian ? Eigen::MatrixXd(hessian(y)) : fd_hessian(gradient, y);
    };

    if (out.interior) {
        // Newton polish on the gradient; stays inside the box or stops.
        for (int it = 0; it < 50; ++it) {
            const Eigen::VectorXd g = gradient(x);
            if (sup_norm(g) <= 1e-3 * opts.tol_gradient) break;
            Eigen::FullPivLU<Eigen::MatrixXd> lu(hess(x));
            if (!lu.isInvertible()) break;
            const Eigen::VectorXd xn = x - lu.solve(g);
            if (!xn.allFinite() || (xn - lower).minCoeff() <= 0.0 || (upper - xn).minCoeff() <= 0.0) break;
            if (!(sup_norm(gradient(xn)) < sup_norm(g))) break;
            x = xn;
        }
    }
    out.point = x;
    out.value = energy(x);
    out.gradient_norm = sup_norm(gradient(x));
    if (!out.interior) {
        out.certificate = "boundary";
        return out;
    }
    out.morse = morse_data(hess(x));
    const bool converged = out.gradient_norm <= opts.tol_gradient * (1.0 + sup_norm(x));
    if (!converged) {
        out.certificate = "unconverged";
    } else if (out.morse->nondegenerate &&
               out.morse->morse_index == (mode == ExtremumMode::min ? 0 : static_cast<int>(n))) {
        out.certificate = mode == ExtremumMode::min ? "locally strict min" : "locally strict max";
    } else if (!out.morse->nondegenerate) {
        out.certificate = "degenerate";
    } else {
        out.certificate = "not an extremum";
    }
    return out;
}

std::optional<SubsolutionBounds> subsolution_bounds(const WeightedGraph& g, const VertexFunction& f, double lambda) {
    const char* op = "subsolution_bounds";
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InputError(kModule, op, "lambda must be positive");
    if (static_cast<std::size_t>(f.size()) != g.size()) throw InputError(kModule, op, "f has wrong length");
    if (std::abs(average(g, f)) > 1e-10 * (1.0 + sup_norm(f))) return std::nullopt;

    SubsolutionBounds out;
    VertexFunction centered = f;
    centered.array() -= average(g, f);
    out.u0 = solve_poisson(g, centered);
    out.kappa1 = 0.5 * lambda * std::min(1.0, std::exp(-out.u0.maxCoeff()));
    out.lower = out.u0.array() + std::log(out.kappa1 / lambda);

    // Smallest A ≥ 1 with λe^A(e^A − 1) > ‖f‖_∞ + 1: root of t² − t − c = 0.
    const double target = sup_norm(f) + 1.0;
    const double t = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * target / lambda));
    double A = std::max(1.0, std::log(t));
    while (!(lambda * std::exp(A) * (std::exp(A) - 1.0) > target)) A = std::nextafter(A, 2.0 * A + 1.0);
    out.A = A;
    return out;
}

}  // namespace cshlab
