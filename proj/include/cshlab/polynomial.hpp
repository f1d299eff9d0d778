#pragma once

#include <vector>

namespace cshlab {

/// Real polynomial with coefficients in increasing degree order.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<double> coefficients);

    /// (x − a)^k expanded.
    static Polynomial binomial_power(double a, int k);

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<double>& coefficients() const { return coeffs_; }
    double operator()(double x) const;
    /// Σ |a_i||x|^i, the rounding scale for evaluations at x.
    double magnitude(double x) const;
    Polynomial derivative() const;

    Polynomial operator*(const Polynomial& other) const;
    Polynomial operator*(double s) const;
    Polynomial operator+(const Polynomial& other) const;

    /// Sorted real roots in the open interval (lo, hi). Isolation works by
    /// recursion on the derivative: between consecutive critical points the
    /// polynomial is monotone, so each sign change brackets exactly one root.
    /// Critical points where the value vanishes to rounding are returned as
    /// (multiple) roots.
    std::vector<double> real_roots(double lo, double hi) const;

    /// Cauchy bound: every root has |x| < bound.
    double root_bound() const;

private:
    void trim();
    std::vector<double> coeffs_;
};

}  // namespace cshlab
