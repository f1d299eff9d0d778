#pragma once

#include "cshlab/solver.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cshlab {

/// Degree of the scalar map on a large ball: 1 (λ > 0, f̄ < 0), 0 (λf̄ > 0),
/// −1 (λ < 0, f̄ > 0); nullopt when λf̄ = 0.
std::optional<int> expected_degree_scalar(double lambda, double fbar);

/// Degree of the system map on a ball containing all roots, f̄, ḡ > 0.
inline constexpr int kExpectedSystemDegree = 0;

/// One enumeration pass and its sign bookkeeping.
struct DegreeRun {
    std::vector<ClassifiedSolution> roots;  // all roots found
    int computed_degree = 0;                // Σ map sign over roots inside the ball
    int morse_sum = 0;                      // orientation · Σ (−1)^index, nondegenerate roots
    int degenerate_roots = 0;
    int roots_outside_ball = 0;
    std::size_t seeds = 0;
    bool grid_stable = false;  // refined grid found no new root
    std::size_t refined_root_count = 0;
    double perturbation = 0.0;  // ε used for this run (0 for the original)
};

struct DegreeReport {
    int computed_degree = 0;
    std::optional<int> expected_degree;
    double radius_used = 0.0;
    /// Per-coordinate half-width of the seed box (radius clipped to the
    /// overflow guard).
    double search_radius = 0.0;
    std::optional<double> apriori_radius;
    bool radius_below_bound = false;
    std::vector<ClassifiedSolution> roots;
    int morse_sum = 0;
    bool consistent = false;
    int degenerate_roots = 0;
    /// The original run, then the perturbed run when degenerate roots
    /// appeared. Top-level fields mirror the last run.
    std::vector<DegreeRun> runs;
    SeedGrid grid;
    std::vector<std::string> warnings;
};

struct DegreeOptions {
    SolveOptions solve;
    /// Ball radius; nullopt uses the a priori bound (required when none is
    /// available for the model).
    std::optional<double> radius;
    bool check_refinement = true;
    double perturbation = 1e-6;
};

/// Sup-norm a priori data for the scalar model when available (λf̄ ≠ 0,
/// p = 1, σ = 1).
std::optional<AprioriData> scalar_apriori(const WeightedGraph& g, const ScalarModel& m);

DegreeRun enumerate_in_ball(const Problem& pb, double radius, double search_radius, const DegreeOptions& opts,
                            std::optional<double> upper_hint);

DegreeReport degree_by_enumeration(const WeightedGraph& g, const ScalarModel& m, const DegreeOptions& opts);
DegreeReport degree_by_enumeration(const WeightedGraph& g, const SystemModel& s, const DegreeOptions& opts);

/// Parity argument behind the multiplicity results: if the strict extrema
/// among `roots` were the only roots, would their sign sum miss the expected
/// degree?
struct MultiplicityAudit {
    std::size_t ell = 0;
    std::optional<int> expected_degree;
    int strict_max = 0;
    int strict_min = 0;
    int extremum_sum = 0;  // strict_max·(−1)^ℓ + strict_min
    bool contradiction = false;
    int forced_minimum = 0;  // solution count the parity argument forces
    int observed = 0;
    bool satisfied = false;  // observed ≥ forced_minimum
};

MultiplicityAudit multiplicity_replay(std::size_t ell, std::optional<int> expected_degree,
                                      const std::vector<ClassifiedSolution>& roots);
/// Enumerates and replays. Throws InputError when λf̄ = 0.
MultiplicityAudit multiplicity_audit(const WeightedGraph& g, const ScalarModel& m, const DegreeOptions& opts);

/// For the system, degree 0 means any nondegenerate root or strict minimum
/// of 𝒢 forces a second root.
struct SecondRootAudit {
    bool trigger = false;  // a nondegenerate root or strict minimum exists
    int forced_minimum = 0;
    int observed = 0;
    bool satisfied = false;
};

SecondRootAudit second_root_replay(const std::vector<ClassifiedSolution>& roots);

struct HomotopySlice {
    double sigma = 0.0;
    std::size_t root_count = 0;
    int degree = 0;
    int degenerate_roots = 0;
    /// radius − max root norm (+∞ without roots).
    double margin = 0.0;
};

struct HomotopyAudit {
    double radius = 0.0;
    double bound = 0.0;
    double search_radius = 0.0;
    bool radius_below_bound = false;
    bool contained = true;
    bool degree_constant = true;
    bool zero_slice_empty = true;
    bool passed = false;
    std::vector<HomotopySlice> slices;
    std::vector<std::string> warnings;
};

/// Degree and containment along a σ grid for the system with f̄, ḡ > 0.
/// `opts.radius` overrides the a priori bound (smaller values are flagged).
HomotopyAudit homotopy_audit(const WeightedGraph& g, const SystemModel& s, const std::vector<double>& sigma_grid,
                             const DegreeOptions& opts);

}  // namespace cshlab
