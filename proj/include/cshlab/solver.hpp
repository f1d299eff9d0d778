#pragma once

#include "cshlab/problem.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cshlab {

/// Seed layout for enumeration. Each axis of the a priori box [−R, R]^n
/// gets `outer_points` seeds; the denser `points` grid covers the core box
/// where roots of moderate-size models concentrate.
struct SeedGrid {
    int points = 13;
    double core_lower = -12.0;
    double core_upper = 3.0;
    int outer_points = 5;
    /// Core points per axis for the refinement pass; 0 means 2·points − 1.
    int refined_points = 0;
};

struct SolveOptions {
    double tol_residual = 1e-12;
    /// Newton also requires a final step ≤ tol_step·(1 + ‖x‖_∞), so
    /// near-singular roots are located and not merely approached.
    double tol_step = 1e-10;
    int max_iter = 200;
    double damping = 0.5;
    double armijo = 1e-4;
    double dedup_tol = 1e-6;
    SeedGrid grid;
    unsigned jobs = 0;  // 0: hardware concurrency
    std::uint64_t seed = 0;
};

/// Index, determinant sign and critical-group ranks of a critical point.
struct MorseData {
    int morse_index = 0;
    int sign_det = 0;
    bool nondegenerate = false;
    /// rank C_r for r = 0..n: one at the Morse index when nondegenerate,
    /// empty otherwise.
    std::vector<int> critical_group_ranks;
    Eigen::VectorXd eigenvalues;
};

struct ClassifiedSolution {
    Eigen::VectorXd point;
    double residual_norm = 0.0;
    /// Sign of det of the map Jacobian (the degree contribution).
    int map_sign = 0;
    /// Sign of det of the energy Hessian, (−1)^index when nondegenerate.
    int sign_det = 0;
    int morse_index = 0;
    bool nondegenerate = false;
    std::vector<int> critical_group_ranks;
    Eigen::VectorXd eigenvalues;
    bool used_pseudo_inverse = false;
};

struct NewtonStats {
    bool converged = false;
    int iterations = 0;
    double residual_norm = 0.0;
    bool used_pseudo_inverse = false;
    std::string failure;  // empty on success
    Eigen::VectorXd last;
};

/// Eigen-data of `matrix` after similarity with W^{1/2} (W = diag(metric)).
/// `metric` may be empty (identity). The matrix must be W-symmetric, i.e.
/// W·matrix is symmetric; it is symmetrized before the eigensolve.
MorseData morse_data(const Eigen::MatrixXd& matrix, const Eigen::VectorXd& metric = {});

/// Damped Newton on residual = 0 with Armijo backtracking on ½‖F‖².
NewtonStats newton_iterate(const ResidualFn& residual, const JacobianFn& jacobian, const Eigen::VectorXd& seed,
                           const SolveOptions& opts);

ClassifiedSolution classify(const Problem& pb, const Eigen::VectorXd& root, bool used_pseudo_inverse = false);

/// Newton from `seed`, classified on success.
std::optional<ClassifiedSolution> newton(const Problem& pb, const Eigen::VectorXd& seed, const SolveOptions& opts,
                                         NewtonStats* stats = nullptr);

/// Axis-aligned box of seeds: `points` per axis from lower to upper.
struct SeedBox {
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;
    int points = 2;
};

struct EnumerationStats {
    std::size_t seeds = 0;
    std::size_t converged = 0;
    std::vector<std::string> warnings;
};

inline constexpr double kSeedBudget = 1e7;

/// Polishes every seed of every box plus `extra_seeds` and the problem's
/// anchors, deduplicates in sup norm and sorts lexicographically. Throws
/// SolveError when the seed count exceeds kSeedBudget.
std::vector<ClassifiedSolution> enumerate_solutions(const Problem& pb, const std::vector<SeedBox>& boxes,
                                                    const SolveOptions& opts,
                                                    const std::vector<Eigen::VectorXd>& extra_seeds = {},
                                                    EnumerationStats* stats = nullptr);

/// Standard seed plan: the core grid (clipped to [−radius, radius] and, when
/// given, to upper_hint + ½) plus the coarse grid over [−radius, radius].
/// `refine` uses the refined core density.
std::vector<SeedBox> seed_plan(std::size_t dim, double radius, const SeedGrid& grid,
                               std::optional<double> upper_hint = std::nullopt, bool refine = false);

/// Union of `base` and `other` up to `tol`: true when every root of `base`
/// has a partner in `other`.
bool roots_subset(const std::vector<ClassifiedSolution>& base, const std::vector<ClassifiedSolution>& other,
                  double tol);

// Box-constrained extremization.

using EnergyFn = std::function<double(const Eigen::VectorXd&)>;
using GradientFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using HessianFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

enum class ExtremumMode { min, max };

struct BoxExtremum {
    Eigen::VectorXd point;
    double value = 0.0;
    bool interior = false;
    /// Indices of coordinates within tolerance of a bound (empty if interior).
    std::vector<std::size_t> touching;
    double gradient_norm = 0.0;
    /// "locally strict min", "locally strict max", "degenerate", or
    /// "boundary".
    std::string certificate;
    std::optional<MorseData> morse;
};

struct ExtremizeOptions {
    int max_iter = 5000;
    double tol_gradient = 1e-9;
    int random_starts = 8;
    std::uint64_t seed = 0;
};

/// Extremizes `energy` over lower ≤ x ≤ upper by projected gradient with
/// Barzilai–Borwein steps from several starts. Interior results are polished
/// by Newton on the gradient (using `hessian`, or central differences of the
/// gradient when it is empty) and certified by the Hessian's definiteness.
BoxExtremum box_extremize(const EnergyFn& energy, const GradientFn& gradient, const Eigen::VectorXd& lower,
                          const Eigen::VectorXd& upper, ExtremumMode mode, const ExtremizeOptions& opts = {},
                          const HessianFn& hessian = {});

struct SubsolutionBounds {
    VertexFunction u0;
    double kappa1 = 0.0;
    VertexFunction lower;
    double A = 0.0;
};

/// Bounds bracketing a solution for λ > 0, f̄ = 0. Returns nullopt when
/// f̄ ≠ 0. Throws InputError for λ ≤ 0.
std::optional<SubsolutionBounds> subsolution_bounds(const WeightedGraph& g, const VertexFunction& f, double lambda);

}  // namespace cshlab
