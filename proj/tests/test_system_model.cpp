#include "cshlab/errors.hpp"
#include "cshlab/graph_io.hpp"
#include "cshlab/random_graph.hpp"
#include "cshlab/scalar_model.hpp"
#include "cshlab/system_model.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace cshlab;

TEST_CASE("HalfOdd accepts only odd halves") {
    CHECK(HalfOdd::from_value(0.5).twice() == 1);
    CHECK(HalfOdd::from_value(2.5).twice() == 5);
    CHECK(HalfOdd::from_value(1.5).value() == 1.5);
    CHECK_THROWS_AS(HalfOdd::from_value(1.0), InputError);
    CHECK_THROWS_AS(HalfOdd::from_value(0.0), InputError);
    CHECK_THROWS_AS(HalfOdd::from_value(-0.5), InputError);
    CHECK_THROWS_AS(HalfOdd::from_value(0.7), InputError);
    CHECK_THROWS_AS(HalfOdd::from_twice(4), InputError);
}

TEST_CASE("residual pair by hand on K2") {
    const WeightedGraph k2 = complete_graph_k2();
    const SystemModel s{HalfOdd::from_value(0.5), HalfOdd::from_value(0.5), 1.0, constant_function(k2, 1.0),
                        constant_function(k2, 2.0)};
    // At u = (ln 2, 0), v = 0: e^v − 1 = 0, so only the second equation picks up
    // the potential term 2p e^u (e^v − 1)^{2q} = 0 as well.
    const auto [F1, F2] = residual_pair(k2, s, Eigen::Vector2d(std::log(2.0), 0.0), Eigen::Vector2d::Zero());
    CHECK(F1[0] == doctest::Approx(std::log(2.0) + 1.0 + 1.0));
    CHECK(F1[1] == doctest::Approx(-std::log(2.0) + 1.0));
    CHECK(F2[0] == doctest::Approx(2.0));
    CHECK(F2[1] == doctest::Approx(2.0));
}

TEST_CASE("functional gradient is the swapped residual pair") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int k = 0; k < 40; ++k) {
        const WeightedGraph g = random_connected_graph(rng, 2 + k % 3);
        const SystemModel s{HalfOdd::from_twice(1 + 2 * (k % 2)), HalfOdd::from_twice(1 + 2 * ((k / 2) % 2)), unit(rng),
                            random_function(rng, g.size(), -2, 2), random_function(rng, g.size(), -2, 2)};
        const VertexFunction u = random_function(rng, g.size(), -2, 1);
        const VertexFunction v = random_function(rng, g.size(), -2, 1);
        const Eigen::VectorXd x = join(u, v);
        const Eigen::VectorXd d = random_function(rng, 2 * g.size(), -1, 1);
        const double fd = oracle::directional(
            [&](const Eigen::VectorXd& y) { return functional_G(g, s, first_half(y), second_half(y)); }, x, d);
        const auto [F1, F2] = residual_pair(g, s, u, v);
        const double an = integrate(g, F2.cwiseProduct(first_half(d))) + integrate(g, F1.cwiseProduct(second_half(d)));
        CHECK(std::abs(fd - an) <= 1e-6 * std::max(1.0, std::abs(an)));

        const Eigen::VectorXd jfd = oracle::directional(
            [&](const Eigen::VectorXd& y) {
                const auto [a, b] = residual_pair(g, s, first_half(y), second_half(y));
                return Eigen::VectorXd(join(a, b));
            },
            x, d);
        const Eigen::VectorXd jan = jacobian_system(g, s, u, v) * d;
        CHECK((jfd - jan).cwiseAbs().maxCoeff() <= 1e-6 * std::max(1.0, jan.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("system bound on K2 with unit sources") {
    const WeightedGraph k2 = complete_graph_k2();
    const SystemModel s{HalfOdd::from_value(0.5), HalfOdd::from_value(0.5), 1.0, constant_function(k2, 1.0),
                        constant_function(k2, 1.0)};
    const auto [L1, L2] = admissible_lambdas(k2, s);
    CHECK(L1 == 2.0);
    CHECK(L2 == 1.0);
    const SystemBound b = apriori_bound_system(k2, s, L1, L2);
    // Λ₃ = 1 and C̃ = 1 on K2, so the spread is 2 and E = e⁴. With p = q = 1/2
    // the level equation is linear: C₁ = C₂ = ln 4 + ln(E + 1).
    const double E = std::exp(4.0);
    const double bb = E * (E + 1.0) + 3.0;
    CHECK(b.Lambda3 == doctest::Approx(1.0));
    CHECK(b.Ctilde == doctest::Approx(1.0));
    CHECK(b.b == doctest::Approx(bb));
    CHECK(b.C1 == doctest::Approx(std::log(4.0) + std::log1p(E)).epsilon(1e-10));
    CHECK(b.C2 == doctest::Approx(b.C1));
    CHECK(b.bound == doctest::Approx(std::max(8.0, b.C1 + bb)));
    CHECK(b.bound > kOverflowGuard);
}

TEST_CASE("system bound input checks") {
    const WeightedGraph k2 = complete_graph_k2();
    const SystemModel s{HalfOdd::from_value(0.5), HalfOdd::from_value(0.5), 1.0, constant_function(k2, 1.0),
                        constant_function(k2, 1.0)};
    CHECK_THROWS_AS(apriori_bound_system(k2, s, 1.0, 1.0), InputError);
    CHECK_THROWS_AS(apriori_bound_system(k2, s, 2.0, 0.5), InputError);
    CHECK_THROWS_AS(apriori_bound_system(k2, s, 0.0, 1.0), InputError);
    SystemModel neg = s;
    neg.g = constant_function(k2, -1.0);
    CHECK_THROWS_AS(apriori_bound_system(k2, neg, 2.0, 1.0), InputError);
    SystemModel bad = s;
    bad.sigma = 1.2;
    CHECK_THROWS_AS(validate(k2, bad), InputError);
    CHECK_THROWS_AS(residual_pair(k2, s, Eigen::Vector2d(0, 800), Eigen::Vector2d::Zero()), SolveError);
}

TEST_CASE("maximum principle split for a sub-solution pair") {
    const WeightedGraph p3 = path_graph(3);
    const SystemModel s{HalfOdd::from_value(0.5), HalfOdd::from_value(0.5), 1.0, Eigen::Vector3d(1.0, 0.0, 2.0),
                        Eigen::Vector3d(1.0, 1.0, 1.0)};
    CHECK(max_principle_violation(p3, s, constant_function(p3, -5.0), constant_function(p3, -5.0)) < 0.0);
    CHECK(max_principle_violation(p3, s, constant_function(p3, 3.0), constant_function(p3, -5.0)) > 0.0);
}
