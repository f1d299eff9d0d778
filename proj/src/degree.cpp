#include "cshlab/degree.hpp"

#include "cshlab/errors.hpp"
#include "cshlab/random_graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace cshlab {

namespace {

constexpr const char* kModule = "degree-lab";

std::string fmt(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

void merge_roots(std::vector<ClassifiedSolution>& into, const std::vector<ClassifiedSolution>& extra, double tol) {
    for (const auto& r : extra) {
        const bool known = std::any_of(into.begin(), into.end(),
                                       [&](const ClassifiedSolution& o) { return sup_norm(o.point - r.point) <= tol; });
        if (!known) into.push_back(r);
    }
    std::sort(into.begin(), into.end(), [](const ClassifiedSolution& a, const ClassifiedSolution& b) {
        return std::lexicographical_compare(a.point.data(), a.point.data() + a.point.size(), b.point.data(),
                                            b.point.data() + b.point.size());
    });
}

void fill_from_run(DegreeReport& rep, const DegreeRun& run) {
    rep.roots = run.roots;
    rep.computed_degree = run.computed_degree;
    rep.morse_sum = run.morse_sum;
    rep.degenerate_roots = run.degenerate_roots;
    rep.consistent = !rep.expected_degree || *rep.expected_degree == rep.computed_degree;
}

double search_radius_for(double radius, std::vector<std::string>& warnings) {
    if (radius > kOverflowGuard) {
        warnings.push_back("radius " + fmt(radius) + " exceeds the overflow guard; seeds clipped to [-700, 700]");
        return kOverflowGuard;
    }
    return radius;
}

}  // namespace

std::optional<int> expected_degree_scalar(double lambda, double fbar) {
    const double product = lambda * fbar;
    if (product == 0.0) return std::nullopt;
    if (product > 0.0) return 0;
    return lambda > 0.0 ? 1 : -1;
}

std::optional<AprioriData> scalar_apriori(const WeightedGraph& g, const ScalarModel& m) {
    if (m.p != 1 || m.sigma != 1.0 || m.lambda * integrate(g, m.f) == 0.0) return std::nullopt;
    return apriori_radius(g, m);
}

DegreeRun enumerate_in_ball(const Problem& pb, double radius, double search_radius, const DegreeOptions& opts,
                            std::optional<double> upper_hint) {
    DegreeRun run;
    EnumerationStats stats;
    run.roots = enumerate_solutions(pb, seed_plan(pb.dim, search_radius, opts.solve.grid, upper_hint), opts.solve, {},
                                    &stats);
    run.seeds = stats.seeds;
    if (opts.check_refinement) {
        EnumerationStats fine_stats;
        const auto refined = enumerate_solutions(
            pb, seed_plan(pb.dim, search_radius, opts.solve.grid, upper_hint, true), opts.solve, {}, &fine_stats);
        run.seeds += fine_stats.seeds;
        run.refined_root_count = refined.size();
        run.grid_stable = roots_subset(refined, run.roots, opts.solve.dedup_tol);
        merge_roots(run.roots, refined, opts.solve.dedup_tol);
    }
    for (const auto& r : run.roots) {
        if (!(pb.ball_norm(r.point) < radius)) {
            ++run.roots_outside_ball;
            continue;
        }
        if (!r.nondegenerate) {
            ++run.degenerate_roots;
            continue;
        }
        run.computed_degree += r.map_sign;
        run.morse_sum += pb.orientation * r.sign_det;
    }
    return run;
}

DegreeReport degree_by_enumeration(const WeightedGraph& g, const ScalarModel& m, const DegreeOptions& opts) {
    DegreeReport rep;
    rep.grid = opts.solve.grid;
    const auto apriori = scalar_apriori(g, m);
    if (apriori) rep.apriori_radius = apriori->radius;
    if (opts.radius) {
        rep.radius_used = *opts.radius;
    } else if (apriori) {
        rep.radius_used = apriori->radius;
    } else {
        throw InputError(kModule, "degree_by_enumeration", "radius required: no a priori bound for this model");
    }
    if (!(rep.radius_used > 0.0)) throw InputError(kModule, "degree_by_enumeration", "radius must be positive");
    if (apriori && rep.radius_used < apriori->radius) {
        rep.radius_below_bound = true;
        rep.warnings.push_back("radius below the a priori bound " + fmt(apriori->radius));
    }
    if (m.sigma == 1.0) rep.expected_degree = expected_degree_scalar(m.lambda, average(g, m.f));
    rep.search_radius = search_radius_for(rep.radius_used, rep.warnings);
    const std::optional<double> hint = apriori ? std::optional<double>(apriori->upper) : std::nullopt;

    rep.runs.push_back(enumerate_in_ball(scalar_problem(g, m), rep.radius_used, rep.search_radius, opts, hint));
    if (rep.runs.back().degenerate_roots > 0 && opts.perturbation > 0.0) {
        std::mt19937_64 rng(opts.solve.seed);
        ScalarModel perturbed = m;
        perturbed.f += opts.perturbation * random_mean_zero(rng, g);
        DegreeRun run = enumerate_in_ball(scalar_problem(g, perturbed), rep.radius_used, rep.search_radius, opts, hint);
        run.perturbation = opts.perturbation;
        rep.runs.push_back(std::move(run));
        rep.warnings.push_back("degenerate roots found; degree taken from the perturbed run");
    }
    for (const auto& run : rep.runs) {
        if (opts.check_refinement && !run.grid_stable) rep.warnings.push_back("refined grid found new roots");
        if (run.roots_outside_ball > 0) rep.warnings.push_back("roots found outside the ball");
    }
    fill_from_run(rep, rep.runs.back());
    return rep;
}

DegreeReport degree_by_enumeration(const WeightedGraph& g, const SystemModel& s, const DegreeOptions& opts) {
    DegreeReport rep;
    rep.grid = opts.solve.grid;
    const bool positive = average(g, s.f) > 0.0 && average(g, s.g) > 0.0;
    if (positive) {
        const auto [l1, l2] = admissible_lambdas(g, s);
        rep.apriori_radius = apriori_bound_system(g, s, l1, l2).bound;
        rep.expected_degree = kExpectedSystemDegree;
    }
    if (opts.radius) {
        rep.radius_used = *opts.radius;
    } else if (rep.apriori_radius) {
        rep.radius_used = *rep.apriori_radius;
    } else {
        throw InputError(kModule, "degree_by_enumeration", "radius required: no a priori bound for this model");
    }
    if (!(rep.radius_used > 0.0)) throw InputError(kModule, "degree_by_enumeration", "radius must be positive");
    if (rep.apriori_radius && rep.radius_used < *rep.apriori_radius) {
        rep.radius_below_bound = true;
        rep.warnings.push_back("radius below the a priori bound " + fmt(*rep.apriori_radius));
    }
    rep.search_radius = search_radius_for(rep.radius_used, rep.warnings);

    rep.runs.push_back(enumerate_in_ball(system_problem(g, s), rep.radius_used, rep.search_radius, opts, std::nullopt));
    if (rep.runs.back().degenerate_roots > 0 && opts.perturbation > 0.0) {
        std::mt19937_64 rng(opts.solve.seed);
        SystemModel perturbed = s;
        perturbed.f += opts.perturbation * random_mean_zero(rng, g);
        perturbed.g += opts.perturbation * random_mean_zero(rng, g);
        DegreeRun run =
            enumerate_in_ball(system_problem(g, perturbed), rep.radius_used, rep.search_radius, opts, std::nullopt);
        run.perturbation = opts.perturbation;
        rep.runs.push_back(std::move(run));
        rep.warnings.push_back("degenerate roots found; degree taken from the perturbed run");
    }
    for (const auto& run : rep.runs) {
        if (opts.check_refinement && !run.grid_stable) rep.warnings.push_back("refined grid found new roots");
        if (run.roots_outside_ball > 0) rep.warnings.push_back("roots found outside the ball");
    }
    fill_from_run(rep, rep.runs.back());
    return rep;
}

MultiplicityAudit multiplicity_replay(std::size_t ell, std::optional<int> expected_degree,
                                      const std::vector<ClassifiedSolution>& roots) {
    MultiplicityAudit a;
    a.ell = ell;
    a.expected_degree = expected_degree;
    for (const auto& r : roots) {
        if (!r.nondegenerate) continue;
        if (r.morse_index == static_cast<int>(ell)) ++a.strict_max;
        if (r.morse_index == 0) ++a.strict_min;
    }
    a.extremum_sum = (ell % 2 == 0 ? a.strict_max : -a.strict_max) + a.strict_min;
    a.contradiction = expected_degree && *expected_degree != a.extremum_sum;
    a.forced_minimum = a.strict_max + a.strict_min + (a.contradiction ? 1 : 0);
    a.observed = static_cast<int>(roots.size());
    a.satisfied = a.observed >= a.forced_minimum;
    return a;
}

MultiplicityAudit multiplicity_audit(const WeightedGraph& g, const ScalarModel& m, const DegreeOptions& opts) {
    const auto expected = expected_degree_scalar(m.lambda, average(g, m.f));
    if (!expected) throw InputError(kModule, "multiplicity_audit", "requires lambda * mean(f) != 0");
    const DegreeReport rep = degree_by_enumeration(g, m, opts);
    return multiplicity_replay(g.size(), expected, rep.roots);
}

SecondRootAudit second_root_replay(const std::vector<ClassifiedSolution>& roots) {
    SecondRootAudit a;
    a.trigger = std::any_of(roots.begin(), roots.end(), [](const ClassifiedSolution& r) { return r.nondegenerate; });
    a.forced_minimum = a.trigger ? 2 : 0;
    a.observed = static_cast<int>(roots.size());
    a.satisfied = a.observed >= a.forced_minimum;
    return a;
}

HomotopyAudit homotopy_audit(const WeightedGraph& g, const SystemModel& s, const std::vector<double>& sigma_grid,
                             const DegreeOptions& opts) {
    const char* op = "homotopy_audit";
    if (!(average(g, s.f) > 0.0) || !(average(g, s.g) > 0.0)) {
        throw InputError(kModule, op, "requires mean(f) > 0 and mean(g) > 0");
    }
    if (sigma_grid.empty()) throw InputError(kModule, op, "empty sigma grid");
    HomotopyAudit audit;
    const auto [l1, l2] = admissible_lambdas(g, s);
    audit.bound = apriori_bound_system(g, s, l1, l2).bound;
    audit.radius = opts.radius.value_or(audit.bound);
    if (audit.radius < audit.bound) {
        audit.radius_below_bound = true;
        audit.warnings.push_back("radius " + fmt(audit.radius) + " below the a priori bound " + fmt(audit.bound));
    }
    audit.search_radius = search_radius_for(audit.radius, audit.warnings);

    std::optional<int> first_degree;
    for (double sigma : sigma_grid) {
        if (!(sigma >= 0.0 && sigma <= 1.0)) throw InputError(kModule, op, "sigma outside [0, 1]");
        SystemModel slice_model = s;
        slice_model.sigma = sigma;
        const Problem pb = system_problem(g, slice_model);
        const DegreeRun run = enumerate_in_ball(pb, audit.radius, audit.search_radius, opts, std::nullopt);

        HomotopySlice slice;
        slice.sigma = sigma;
        slice.root_count = run.roots.size();
        slice.degree = run.computed_degree;
        slice.degenerate_roots = run.degenerate_roots;
        slice.margin = std::numeric_limits<double>::infinity();
        for (const auto& r : run.roots) slice.margin = std::min(slice.margin, audit.radius - pb.ball_norm(r.point));
        if (run.roots_outside_ball > 0) audit.contained = false;
        if (!first_degree) first_degree = slice.degree;
        if (slice.degree != *first_degree) audit.degree_constant = false;
        if (sigma == 0.0 && slice.root_count != 0) audit.zero_slice_empty = false;
        if (slice.degenerate_roots > 0) audit.warnings.push_back("degenerate roots at sigma=" + fmt(sigma));
        audit.slices.push_back(slice);
    }
    audit.passed = audit.contained && audit.degree_constant && audit.zero_slice_empty && !audit.radius_below_bound;
    return audit;
}

}  // namespace cshlab
