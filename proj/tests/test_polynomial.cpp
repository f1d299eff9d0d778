#include "cshlab/polynomial.hpp"

#include <doctest.h>

#include <cmath>

using cshlab::Polynomial;

TEST_CASE("binomial power and evaluation") {
    const Polynomial p = Polynomial::binomial_power(2.0, 3);  // (x − 2)^3
    CHECK(p.degree() == 3);
    for (double x : {-1.0, 0.0, 0.5, 3.0}) CHECK(p(x) == doctest::Approx(std::pow(x - 2.0, 3)));
    CHECK(p.derivative()(1.0) == doctest::Approx(3.0));
}

TEST_CASE("real roots") {
    // (x − 1)(x − 2)(x + 3)
    const Polynomial p = Polynomial({-1, 1}) * Polynomial({-2, 1}) * Polynomial({3, 1});
    const auto roots = p.real_roots(-10, 10);
    REQUIRE(roots.size() == 3);
    CHECK(roots[0] == doctest::Approx(-3));
    CHECK(roots[1] == doctest::Approx(1));
    CHECK(roots[2] == doctest::Approx(2));
    CHECK(p.real_roots(1.5, 10).size() == 1);
    CHECK(Polynomial({1, 0, 1}).real_roots(-10, 10).empty());
    // Double root at 1/2: x² − x + 1/4.
    const auto dbl = Polynomial({0.25, -1, 1}).real_roots(-1, 2);
    REQUIRE(!dbl.empty());
    CHECK(dbl.front() == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(p.root_bound() > 3.0);
}
