#include "cshlab/continuation.hpp"
#include "cshlab/errors.hpp"
#include "cshlab/graph_io.hpp"

#include <doctest.h>

#include <cmath>

using namespace cshlab;

namespace {

SweepOptions serial() {
    SweepOptions o;
    o.solve.jobs = 1;
    return o;
}

}  // namespace

TEST_CASE("zero source keeps u = 0 at every nonzero lambda") {
    const WeightedGraph p3 = path_graph(3);
    const auto recs = sweep_lambda(p3, constant_function(p3, 0.0), -4.0, 4.0, 4, serial());
    for (const auto& r : recs) {
        CHECK(r.parameter != 0.0);
        bool found = false;
        for (const auto& root : r.roots) found = found || sup_norm(root.point) < 1e-12;
        CHECK(found);
        CHECK(r.strict_min + r.strict_max + r.saddles + r.degenerate == static_cast<int>(r.roots.size()));
    }
}

TEST_CASE("constant branch pair appears at lambda = 4 mean(f)") {
    const WeightedGraph k2 = complete_graph_k2();
    const auto recs = sweep_lambda(k2, constant_function(k2, -1.0), -1.0, -9.0, 8, serial());
    bool saw_event = false;
    for (const auto& r : recs) {
        saw_event = saw_event || !r.events.empty();
        if (r.parameter > -4.0) {
            CHECK(r.roots.empty());
        } else if (r.parameter < -4.0) {
            REQUIRE(r.roots.size() >= 2);
            const double disc = std::sqrt(1.0 + 4.0 / r.parameter);
            for (double t : {0.5 * (1 - disc), 0.5 * (1 + disc)}) {
                bool found = false;
                for (const auto& root : r.roots) found = found || (root.point.array() - std::log(t)).abs().maxCoeff() < 1e-10;
                CHECK(found);
            }
        }
    }
    CHECK(saw_event);
}

TEST_CASE("local minimum branch for large positive lambda") {
    const WeightedGraph k2 = complete_graph_k2();
    const auto recs = sweep_lambda(k2, constant_function(k2, 1.0), 1.0, 60.0, 6, serial());
    CHECK(recs.front().strict_min == 0);
    CHECK(recs.back().strict_min >= 1);
}

TEST_CASE("lower threshold brackets 4 mean(f) on K2") {
    const WeightedGraph k2 = complete_graph_k2();
    const VertexFunction f = constant_function(k2, -1.0);
    const ThresholdEstimate coarse = estimate_threshold(k2, f, Threshold::lower, -5.0, -3.0, 1e-2, serial());
    const ThresholdEstimate fine = estimate_threshold(k2, f, Threshold::lower, -5.0, -3.0, 1e-3, serial());
    CHECK(fine.lo <= -4.0);
    CHECK(fine.hi >= -4.0 - 1e-12);
    CHECK(fine.hi - fine.lo <= 1e-3);
    CHECK(coarse.lo <= fine.lo);
    CHECK(fine.hi <= coarse.hi);
    CHECK(fine.consistent());
    CHECK(fine.certificate_lo);
    CHECK_FALSE(fine.certificate_hi);

    const ThresholdEstimate lmax = estimate_threshold(k2, f, Threshold::lower_max, -20.0, -3.0, 1e-2, serial());
    CHECK(lmax.consistent());
    CHECK(threshold_order_check(lmax, fine).empty());
    CHECK(lmax.hi <= fine.hi);
}

TEST_CASE("upper threshold respects 4 mean(f)") {
    const WeightedGraph k2 = complete_graph_k2();
    const ThresholdEstimate up =
        estimate_threshold(k2, constant_function(k2, 1.0), Threshold::upper, 1.0, 10.0, 1e-3, serial());
    CHECK(up.consistent());
    CHECK(up.hi >= 4.0);
    CHECK_FALSE(up.certificate_lo);
    CHECK(up.certificate_hi);
}

TEST_CASE("threshold input errors and flag logic") {
    const WeightedGraph k2 = complete_graph_k2();
    const VertexFunction neg = constant_function(k2, -1.0);
    CHECK_THROWS_AS(estimate_threshold(k2, neg, Threshold::lower, -5.0, -4.5, 1e-3, serial()), InputError);
    CHECK_THROWS_AS(estimate_threshold(k2, neg, Threshold::lower, -5.0, 1.0, 1e-3, serial()), InputError);
    CHECK_THROWS_AS(estimate_threshold(k2, constant_function(k2, 1.0), Threshold::lower, -5.0, -3.0, 1e-3, serial()),
                    InputError);
    CHECK_THROWS_AS(estimate_threshold(k2, neg, Threshold::upper, -1.0, 3.0, 1e-3, serial()), InputError);
    CHECK_THROWS_AS(estimate_threshold(k2, neg, Threshold::lower, -5.0, -3.0, 0.0, serial()), InputError);

    ThresholdEstimate lower;
    lower.which = Threshold::lower;
    lower.fbar = -1.0;
    lower.lo = -4.1;
    lower.hi = -4.0;
    ThresholdEstimate lmax;
    lmax.which = Threshold::lower_max;
    lmax.fbar = -1.0;
    lmax.lo = -3.0;
    lmax.hi = -2.9;
    CHECK(threshold_order_check(lmax, lower).size() == 1);
    CHECK_THROWS_AS(threshold_order_check(lower, lmax), InputError);

    CHECK(parse_threshold(threshold_name(Threshold::lower_max)) == Threshold::lower_max);
    CHECK_THROWS_AS(parse_threshold("middle"), InputError);
}

TEST_CASE("sigma homotopy with zero source tracks ln sigma") {
    const WeightedGraph k2 = complete_graph_k2();
    const ScalarModel m{1.0, 1, 1.0, constant_function(k2, 0.0)};
    std::vector<double> path;
    for (int k = 0; k <= 6; ++k) path.push_back(std::pow(10.0, -k));
    SolveOptions opts;
    opts.jobs = 1;
    const SigmaTrack track = sigma_homotopy(k2, m, path, opts);
    REQUIRE_FALSE(track.lost);
    REQUIRE(track.records.size() == path.size());
    CHECK(sup_norm(track.records.front().roots.front().point) == 0.0);
    for (std::size_t k = 0; k < path.size(); ++k) {
        CHECK((track.records[k].roots.front().point.array() - std::log(path[k])).abs().maxCoeff() < 1e-8);
    }
    CHECK(track.log_gap < 1e-8);
    CHECK(track.divergence_rate == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("sigma homotopy reports a lost branch") {
    const WeightedGraph k2 = complete_graph_k2();
    const ScalarModel m{1.0, 1, 1.0, constant_function(k2, 1.0)};
    SolveOptions opts;
    opts.jobs = 1;
    const SigmaTrack track = sigma_homotopy(k2, m, {1.0, 0.5}, opts, VertexFunction(Eigen::Vector2d::Zero()));
    CHECK(track.lost);
    CHECK_FALSE(track.last_good_sigma);
    CHECK_FALSE(track.failure.empty());
    CHECK_THROWS_AS(sigma_homotopy(k2, m, {}, opts), InputError);
    CHECK_THROWS_AS(sigma_homotopy(k2, m, {0.0}, opts), InputError);
}
