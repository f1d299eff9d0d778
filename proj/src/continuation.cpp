#include "cshlab/continuation.hpp"

#include "cshlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace cshlab {

namespace {

constexpr const char* kModule = "continuation";

std::string fmt(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

std::vector<Eigen::VectorXd> points_of(const std::vector<ClassifiedSolution>& roots) {
    std::vector<Eigen::VectorXd> out;
    for (const auto& r : roots) out.push_back(r.point);
    return out;
}

double seed_radius(const WeightedGraph& g, const ScalarModel& m, const std::optional<double>& forced,
                   std::optional<double>& upper_hint) {
    const auto apriori = scalar_apriori(g, m);
    if (apriori) upper_hint = apriori->upper;
    const double r = forced ? *forced : (apriori ? apriori->radius : kFallbackRadius);
    return std::min(r, kOverflowGuard);
}

std::vector<ClassifiedSolution> roots_at(const WeightedGraph& g, const ScalarModel& m, const SweepOptions& opts,
                                         const std::vector<Eigen::VectorXd>& warm) {
    std::optional<double> hint;
    const double r = seed_radius(g, m, opts.radius, hint);
    return enumerate_solutions(scalar_problem(g, m), seed_plan(g.size(), r, opts.solve.grid, hint), opts.solve, warm);
}

BranchRecord record_at(const WeightedGraph& g, const VertexFunction& f, double lambda, const SweepOptions& opts,
                       const std::vector<Eigen::VectorXd>& warm) {
    BranchRecord rec;
    rec.parameter = lambda;
    rec.roots = roots_at(g, ScalarModel{lambda, opts.p, opts.sigma, f}, opts, warm);
    count_types(rec, g.size());
    return rec;
}

void census_events(const BranchRecord& prev, BranchRecord& cur) {
    if (prev.roots.size() != cur.roots.size()) {
        cur.events.push_back("root count " + std::to_string(prev.roots.size()) + " -> " +
                             std::to_string(cur.roots.size()));
    }
    if ((prev.strict_min > 0) != (cur.strict_min > 0)) {
        cur.events.push_back(cur.strict_min > 0 ? "strict min appears" : "strict min disappears");
    }
    if ((prev.strict_max > 0) != (cur.strict_max > 0)) {
        cur.events.push_back(cur.strict_max > 0 ? "strict max appears" : "strict max disappears");
    }
}

}  // namespace

void count_types(BranchRecord& rec, std::size_t n) {
    rec.strict_min = rec.strict_max = rec.saddles = rec.degenerate = 0;
    for (const auto& r : rec.roots) {
        if (!r.nondegenerate) {
            ++rec.degenerate;
        } else if (r.morse_index == 0) {
            ++rec.strict_min;
        } else if (r.morse_index == static_cast<int>(n)) {
            ++rec.strict_max;
        } else {
            ++rec.saddles;
        }
    }
}

std::vector<BranchRecord> sweep_lambda(const WeightedGraph& g, const VertexFunction& f, double from, double to,
                                       int steps, const SweepOptions& opts) {
    if (steps < 1) throw InputError(kModule, "sweep_lambda", "steps must be >= 1");
    if (!std::isfinite(from) || !std::isfinite(to)) throw InputError(kModule, "sweep_lambda", "non-finite range");
    std::vector<BranchRecord> out;
    std::vector<Eigen::VectorXd> warm;
    for (int k = 0; k <= steps; ++k) {
        const double lambda = from + (to - from) * k / steps;
        if (lambda == 0.0) {
            warm.clear();
            continue;
        }
        BranchRecord rec = record_at(g, f, lambda, opts, warm);
        if (!out.empty()) {
            const BranchRecord& prev = out.back();
            census_events(prev, rec);
            if (!rec.events.empty() && prev.parameter * lambda > 0.0) {
                BranchRecord mid = record_at(g, f, 0.5 * (prev.parameter + lambda), opts, points_of(prev.roots));
                census_events(prev, mid);
                mid.events.push_back("midpoint refinement");
                out.push_back(std::move(mid));
            }
        }
        warm = points_of(rec.roots);
        out.push_back(std::move(rec));
    }
    return out;
}

std::string threshold_name(Threshold which) {
    switch (which) {
        case Threshold::upper: return "upper";
        case Threshold::lower: return "lower";
        case Threshold::lower_max: return "lower_max";
    }
    return "";
}

Threshold parse_threshold(const std::string& name) {
    if (name == "upper") return Threshold::upper;
    if (name == "lower") return Threshold::lower;
    if (name == "lower_max") return Threshold::lower_max;
    throw InputError(kModule, "estimate_threshold", "unknown threshold '" + name + "' (upper|lower|lower_max)");
}

bool threshold_certificate(const WeightedGraph& g, const VertexFunction& f, Threshold which, double lambda,
                           const SweepOptions& opts) {
    const auto roots = roots_at(g, ScalarModel{lambda, opts.p, opts.sigma, f}, opts, {});
    const int n = static_cast<int>(g.size());
    return std::any_of(roots.begin(), roots.end(), [&](const ClassifiedSolution& r) {
        switch (which) {
            case Threshold::upper: return r.nondegenerate && r.morse_index == 0;
            case Threshold::lower: return r.morse_index == 0;
            case Threshold::lower_max: return r.nondegenerate && r.morse_index == n;
        }
        return false;
    });
}

ThresholdEstimate estimate_threshold(const WeightedGraph& g, const VertexFunction& f, Threshold which, double a,
                                     double b, double tol, const SweepOptions& opts) {
    const char* op = "estimate_threshold";
    if (!(tol > 0.0)) throw InputError(kModule, op, "tol must be positive");
    if (a > b) std::swap(a, b);
    const bool positive = which == Threshold::upper;
    if (positive ? !(a > 0.0) : !(b < 0.0)) {
        throw InputError(kModule, op, "bracket must lie in " + std::string(positive ? "lambda > 0" : "lambda < 0"));
    }
    ThresholdEstimate est;
    est.which = which;
    est.fbar = average(g, f);
    if (which == Threshold::lower && !(est.fbar < 0.0)) {
        throw InputError(kModule, op, "the lower threshold needs mean(f) < 0");
    }
    est.certificate_lo = threshold_certificate(g, f, which, a, opts);
    est.certificate_hi = threshold_certificate(g, f, which, b, opts);
    est.evaluations = 2;
    if (est.certificate_lo == est.certificate_hi) {
        throw InputError(kModule, op, "bracket endpoints do not straddle the certificate change");
    }
    while (b - a > tol) {
        const double mid = 0.5 * (a + b);
        const bool c = threshold_certificate(g, f, which, mid, opts);
        ++est.evaluations;
        (c == est.certificate_lo ? a : b) = mid;
    }
    est.lo = a;
    est.hi = b;

    const double four_fbar = 4.0 * est.fbar;
    if (which == Threshold::upper && est.fbar > 0.0 && est.hi < four_fbar) {
        est.flags.push_back("upper threshold below 4*mean(f) = " + fmt(four_fbar));
    }
    if (which == Threshold::upper && est.fbar <= 0.0 && est.hi < 0.0) {
        est.flags.push_back("upper threshold negative for mean(f) <= 0");
    }
    if (which == Threshold::lower && est.lo > four_fbar) {
        est.flags.push_back("lower threshold above 4*mean(f) = " + fmt(four_fbar));
    }
    if (which == Threshold::lower_max && est.fbar >= 0.0 && est.lo > 0.0) {
        est.flags.push_back("lower_max threshold positive for mean(f) >= 0");
    }
    return est;
}

std::vector<std::string> threshold_order_check(const ThresholdEstimate& lower_max, const ThresholdEstimate& lower) {
    std::vector<std::string> flags;
    if (lower_max.which != Threshold::lower_max || lower.which != Threshold::lower) {
        throw InputError(kModule, "threshold_order_check", "expects (lower_max, lower) estimates");
    }
    if (lower.fbar < 0.0 && lower_max.lo > lower.hi) {
        flags.push_back("lower_max threshold [" + fmt(lower_max.lo) + ", " + fmt(lower_max.hi) +
                        "] exceeds lower threshold [" + fmt(lower.lo) + ", " + fmt(lower.hi) + "]");
    }
    return flags;
}

SigmaTrack sigma_homotopy(const WeightedGraph& g, const ScalarModel& m, const std::vector<double>& sigma_path,
                          const SolveOptions& opts, std::optional<VertexFunction> start) {
    const char* op = "sigma_homotopy";
    if (sigma_path.empty()) throw InputError(kModule, op, "empty sigma path");
    for (double s : sigma_path) {
        if (!(s > 0.0 && s <= 1.0)) throw InputError(kModule, op, "sigma must lie in (0, 1] for the scalar model");
    }
    auto model_at = [&](double sigma) {
        ScalarModel ms = m;
        ms.sigma = sigma;
        return ms;
    };

    VertexFunction x;
    if (start) {
        x = *start;
    } else {
        const Problem pb = scalar_problem(g, model_at(sigma_path.front()));
        if (pb.anchors.empty()) throw SolveError(kModule, op, "no constant root to start from; pass a start point");
        x = *std::min_element(pb.anchors.begin(), pb.anchors.end(), [](const auto& a, const auto& b) {
            return sup_norm(a) < sup_norm(b);
        });
    }

    const bool zero_source = sup_norm(m.f) == 0.0;
    SigmaTrack track;
    track.log_gap = zero_source ? 0.0 : std::numeric_limits<double>::quiet_NaN();
    track.divergence_rate = std::numeric_limits<double>::quiet_NaN();
    double prev_sigma = sigma_path.front();

    for (double sigma : sigma_path) {
        const Problem pb = scalar_problem(g, model_at(sigma));
        auto sol = newton(pb, x, opts);
        if (!sol && sigma != prev_sigma) {
            // One halving: step to the midpoint first.
            const double mid = 0.5 * (prev_sigma + sigma);
            if (auto half = newton(scalar_problem(g, model_at(mid)), x, opts)) sol = newton(pb, half->point, opts);
        }
        if (!sol) {
            track.lost = true;
            track.failure = "branch lost at sigma=" + fmt(sigma);
            break;
        }
        x = sol->point;
        BranchRecord rec;
        rec.parameter = sigma;
        rec.roots.push_back(*sol);
        count_types(rec, g.size());
        track.records.push_back(std::move(rec));
        track.norms.push_back(sup_norm(x));
        track.last_good_sigma = sigma;
        if (zero_source) track.log_gap = std::max(track.log_gap, std::abs(sup_norm(x) - std::abs(std::log(sigma))));
        prev_sigma = sigma;
    }
    const std::size_t k = track.norms.size();
    if (k >= 2) {
        const double s1 = track.records[k - 2].parameter;
        const double s2 = track.records[k - 1].parameter;
        if (s1 != s2) track.divergence_rate = (track.norms[k - 1] - track.norms[k - 2]) / (std::log(s1) - std::log(s2));
    }
    return track;
}

SystemSigmaSweep sigma_homotopy(const WeightedGraph& g, const SystemModel& s, const std::vector<double>& sigma_path,
                                const SolveOptions& opts) {
    const char* op = "sigma_homotopy";
    if (!(average(g, s.f) > 0.0) || !(average(g, s.g) > 0.0)) {
        throw InputError(kModule, op, "system sweep requires mean(f) > 0 and mean(g) > 0");
    }
    SystemSigmaSweep out;
    const auto [l1, l2] = admissible_lambdas(g, s);
    out.bound = apriori_bound_system(g, s, l1, l2).bound;
    const double search = std::min(out.bound, kOverflowGuard);
    std::vector<Eigen::VectorXd> warm;
    for (double sigma : sigma_path) {
        if (!(sigma >= 0.0 && sigma <= 1.0)) throw InputError(kModule, op, "sigma outside [0, 1]");
        SystemModel ms = s;
        ms.sigma = sigma;
        const Problem pb = system_problem(g, ms);
        BranchRecord rec;
        rec.parameter = sigma;
        rec.roots = enumerate_solutions(pb, seed_plan(pb.dim, search, opts.grid), opts, warm);
        count_types(rec, pb.dim);
        for (const auto& r : rec.roots) {
            if (!(pb.ball_norm(r.point) < out.bound)) out.contained = false;
        }
        if (sigma == 0.0 && !rec.roots.empty()) out.dies_at_zero = false;
        warm = points_of(rec.roots);
        out.records.push_back(std::move(rec));
    }
    return out;
}

}  // namespace cshlab
