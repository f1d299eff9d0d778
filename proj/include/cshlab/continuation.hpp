#pragma once

#include "cshlab/degree.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cshlab {

struct BranchRecord {
    double parameter = 0.0;  // λ or σ
    std::vector<ClassifiedSolution> roots;
    int strict_min = 0;
    int strict_max = 0;
    int saddles = 0;
    int degenerate = 0;
    std::vector<std::string> events;
};

/// Fills the type counts of `rec` from its roots; n is the problem dimension.
void count_types(BranchRecord& rec, std::size_t n);

struct SweepOptions {
    SolveOptions solve;
    /// Seed box half-width; nullopt uses the a priori radius, or
    /// kFallbackRadius when none exists.
    std::optional<double> radius;
    int p = 1;
    double sigma = 1.0;
};

inline constexpr double kFallbackRadius = 20.0;

/// λ on `steps` equal intervals of [from, to], skipping λ = 0. Each step is
/// warm-started from the previous roots; when the root census changes, the
/// midpoint of that interval is inserted once.
std::vector<BranchRecord> sweep_lambda(const WeightedGraph& g, const VertexFunction& f, double from, double to,
                                       int steps, const SweepOptions& opts);

enum class Threshold {
    upper,     // Λ* = inf{λ > 0: strict local minimum}
    lower,     // Λ_* = sup{λ < 0, λf̄ > 0: local minimum}
    lower_max  // Λ*¹ = sup{λ < 0: strict local maximum}
};

std::string threshold_name(Threshold which);
Threshold parse_threshold(const std::string& name);

struct ThresholdEstimate {
    Threshold which = Threshold::upper;
    double lo = 0.0;
    double hi = 0.0;
    bool certificate_lo = false;
    bool certificate_hi = false;
    int evaluations = 0;
    double fbar = 0.0;
    std::vector<std::string> flags;  // inequality violations
    bool consistent() const { return flags.empty(); }
};

/// Does J_λ carry the critical point defining `which`?
bool threshold_certificate(const WeightedGraph& g, const VertexFunction& f, Threshold which, double lambda,
                           const SweepOptions& opts);

/// Bisects [a, b] to width ≤ tol. Throws InputError when the endpoints have
/// the same certificate or the wrong sign for `which`.
ThresholdEstimate estimate_threshold(const WeightedGraph& g, const VertexFunction& f, Threshold which, double a,
                                     double b, double tol, const SweepOptions& opts);

/// Flags Λ*¹ > Λ_* (for f̄ < 0), judged on the two intervals.
std::vector<std::string> threshold_order_check(const ThresholdEstimate& lower_max, const ThresholdEstimate& lower);

struct SigmaTrack {
    std::vector<BranchRecord> records;
    std::vector<double> norms;  // ‖u_σ‖_∞ per tracked step
    bool lost = false;
    std::optional<double> last_good_sigma;
    std::string failure;
    /// For f ≡ 0: max over steps of |‖u_σ‖_∞ − |ln σ||; NaN otherwise.
    double log_gap = 0.0;
    /// Slope of ‖u_σ‖ against −ln σ over the last two steps (NaN if fewer).
    double divergence_rate = 0.0;
};

/// Tracks one root of the scalar model along `sigma_path` (values in (0, 1]).
/// The start is `start` or, when absent, the smallest-norm constant root of
/// the mean-source equation at the first σ.
SigmaTrack sigma_homotopy(const WeightedGraph& g, const ScalarModel& m, const std::vector<double>& sigma_path,
                          const SolveOptions& opts, std::optional<VertexFunction> start = std::nullopt);

struct SystemSigmaSweep {
    std::vector<BranchRecord> records;
    double bound = 0.0;
    bool contained = true;   // every root strictly inside the bound ball
    bool dies_at_zero = true;  // no roots at σ = 0 (when 0 is on the path)
};

/// Per-σ enumeration of the system with f̄, ḡ > 0, warm-started from the
/// previous σ.
SystemSigmaSweep sigma_homotopy(const WeightedGraph& g, const SystemModel& s, const std::vector<double>& sigma_path,
                                const SolveOptions& opts);

}  // namespace cshlab
