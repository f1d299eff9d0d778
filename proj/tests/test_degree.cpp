#include "cshlab/degree.hpp"
#include "cshlab/errors.hpp"
#include "cshlab/graph_io.hpp"
#include "cshlab/random_graph.hpp"

#include <doctest.h>

#include <random>

using namespace cshlab;

namespace {

DegreeOptions serial() {
    DegreeOptions o;
    o.solve.jobs = 1;
    return o;
}

ClassifiedSolution fake_root(int index) {
    ClassifiedSolution r;
    r.morse_index = index;
    r.nondegenerate = true;
    r.sign_det = index % 2 == 0 ? 1 : -1;
    return r;
}

}  // namespace

TEST_CASE("expected scalar degree table") {
    CHECK(expected_degree_scalar(5.0, -1.0) == 1);
    CHECK(expected_degree_scalar(-10.0, 1.0) == -1);
    CHECK(expected_degree_scalar(10.0, 1.0) == 0);
    CHECK(expected_degree_scalar(-10.0, -1.0) == 0);
    CHECK_FALSE(expected_degree_scalar(0.0, 1.0));
    CHECK_FALSE(expected_degree_scalar(3.0, 0.0));
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> pos(1e-6, 100.0);
    for (int k = 0; k < 200; ++k) {
        const double a = pos(rng);
        const double b = pos(rng);
        CHECK(expected_degree_scalar(a, -b) == 1);
        CHECK(expected_degree_scalar(-a, b) == -1);
        CHECK(expected_degree_scalar(a, b) == 0);
        CHECK(expected_degree_scalar(-a, -b) == 0);
    }
}

TEST_CASE("degree of K2 with lambda -10 and f = 1") {
    const WeightedGraph k2 = complete_graph_k2();
    const ScalarModel m{-10.0, 1, 1.0, constant_function(k2, 1.0)};
    const DegreeReport rep = degree_by_enumeration(k2, m, serial());
    CHECK(rep.computed_degree == -1);
    CHECK(rep.expected_degree == -1);
    CHECK(rep.consistent);
    CHECK(rep.degenerate_roots == 0);
    CHECK(rep.morse_sum == rep.computed_degree);
    CHECK(rep.runs.front().grid_stable);
    int constant_sign = 0;
    int other_sum = 0;
    for (const auto& r : rep.roots) {
        if (std::abs(r.point[0] - r.point[1]) < 1e-9) {
            constant_sign += r.map_sign;
        } else {
            other_sum += r.map_sign;
        }
    }
    CHECK(constant_sign == 1);
    CHECK(other_sum == -2);
}

TEST_CASE("degree of K2 with lambda 1 and f = -1") {
    const WeightedGraph k2 = complete_graph_k2();
    const DegreeReport rep = degree_by_enumeration(k2, ScalarModel{1.0, 1, 1.0, constant_function(k2, -1.0)}, serial());
    CHECK(rep.computed_degree == 1);
    CHECK(rep.consistent);
}

TEST_CASE("degree is unchanged when the radius doubles") {
    const WeightedGraph k2 = complete_graph_k2();
    for (double lambda : {-10.0, 10.0}) {
        for (double c : {-1.0, 1.0}) {
            const ScalarModel m{lambda, 1, 1.0, constant_function(k2, c)};
            DegreeOptions o = serial();
            o.check_refinement = false;
            const DegreeReport base = degree_by_enumeration(k2, m, o);
            o.radius = 2.0 * base.radius_used;
            const DegreeReport wide = degree_by_enumeration(k2, m, o);
            CHECK(base.computed_degree == wide.computed_degree);
            CHECK(base.roots.size() == wide.roots.size());
            CHECK(base.consistent);
        }
    }
}

TEST_CASE("morse sum equals sign sum on random small models") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int k = 0; k < 6; ++k) {
        const WeightedGraph g = random_connected_graph(rng, 2 + k % 2);
        const double lambda = (k % 2 == 0 ? -1 : 1) * (5 + 20 * unit(rng));
        const ScalarModel m{lambda, 1, 1.0, random_function(rng, g.size(), -2, 2)};
        if (std::abs(average(g, m.f)) < 0.1) continue;
        DegreeOptions o = serial();
        o.check_refinement = false;
        const DegreeReport rep = degree_by_enumeration(g, m, o);
        if (rep.degenerate_roots == 0) CHECK(rep.morse_sum == rep.computed_degree);
        CHECK(rep.consistent);
    }
}

TEST_CASE("degenerate fold root triggers the perturbed run") {
    // λ = 4f̄ on K2: the two constant roots merge at u = ln ½.
    const WeightedGraph k2 = complete_graph_k2();
    const ScalarModel m{-4.0, 1, 1.0, constant_function(k2, -1.0)};
    DegreeOptions o = serial();
    o.check_refinement = false;
    const DegreeReport rep = degree_by_enumeration(k2, m, o);
    REQUIRE(rep.runs.size() == 2);
    CHECK(rep.runs[0].degenerate_roots > 0);
    CHECK(rep.runs[1].perturbation == 1e-6);
    CHECK(rep.expected_degree == 0);
    CHECK(rep.computed_degree == 0);
}

TEST_CASE("multiplicity replay arithmetic") {
    const auto a = multiplicity_replay(2, -1, {fake_root(2)});
    CHECK(a.extremum_sum == 1);
    CHECK(a.contradiction);
    CHECK(a.forced_minimum == 2);
    CHECK_FALSE(a.satisfied);

    const auto b = multiplicity_replay(2, 0, {fake_root(2), fake_root(0)});
    CHECK(b.extremum_sum == 2);
    CHECK(b.contradiction);
    CHECK(b.forced_minimum == 3);

    const auto c = multiplicity_replay(3, 0, {fake_root(3), fake_root(0)});
    CHECK(c.extremum_sum == 0);
    CHECK_FALSE(c.contradiction);
    CHECK(c.forced_minimum == 2);
    CHECK(c.satisfied);

    const auto d = multiplicity_replay(2, 0, {fake_root(2), fake_root(0), fake_root(1), fake_root(1)});
    CHECK(d.satisfied);
    CHECK(d.observed == 4);
}

TEST_CASE("multiplicity audit on K2") {
    const WeightedGraph k2 = complete_graph_k2();
    const auto a = multiplicity_audit(k2, ScalarModel{-10.0, 1, 1.0, constant_function(k2, 1.0)}, serial());
    CHECK(a.satisfied);
    CHECK(a.observed >= 2);
    CHECK_THROWS_AS(multiplicity_audit(k2, ScalarModel{0.0, 1, 1.0, constant_function(k2, 1.0)}, serial()), InputError);
}

TEST_CASE("second root replay") {
    CHECK_FALSE(second_root_replay({}).trigger);
    CHECK(second_root_replay({}).satisfied);
    const auto one = second_root_replay({fake_root(1)});
    CHECK(one.trigger);
    CHECK(one.forced_minimum == 2);
    CHECK_FALSE(one.satisfied);
}

TEST_CASE("homotopy audit flags a halved radius") {
    const WeightedGraph k2 = complete_graph_k2();
    const SystemModel s{HalfOdd::from_value(0.5), HalfOdd::from_value(0.5), 1.0, constant_function(k2, 1.0),
                        constant_function(k2, 1.0)};
    DegreeOptions o = serial();
    o.check_refinement = false;
    o.solve.grid.points = 5;
    o.solve.grid.outer_points = 3;
    const auto [l1, l2] = admissible_lambdas(k2, s);
    o.radius = 0.5 * apriori_bound_system(k2, s, l1, l2).bound;
    const HomotopyAudit audit = homotopy_audit(k2, s, {0.0}, o);
    CHECK(audit.radius_below_bound);
    CHECK_FALSE(audit.passed);
    CHECK(audit.zero_slice_empty);
    CHECK_THROWS_AS(homotopy_audit(k2, s, {}, o), InputError);
}
