#include "cshlab/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cshlab {

Polynomial::Polynomial(std::vector<double> coefficients) : coeffs_(std::move(coefficients)) { trim(); }

void Polynomial::trim() {
    while (coeffs_.size() > 1 && coeffs_.back() == 0.0) coeffs_.pop_back();
}

Polynomial Polynomial::binomial_power(double a, int k) {
    Polynomial out(std::vector<double>{1.0});
    const Polynomial factor(std::vector<double>{-a, 1.0});
    for (int i = 0; i < k; ++i) out = out * factor;
    return out;
}

double Polynomial::operator()(double x) const {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

double Polynomial::magnitude(double x) const {
    double acc = 0.0;
    const double ax = std::abs(x);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * ax + std::abs(*it);
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (coeffs_.size() <= 1) return Polynomial(std::vector<double>{0.0});
    std::vector<double> d(coeffs_.size() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = static_cast<double>(i) * coeffs_[i];
    return Polynomial(std::move(d));
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
    std::vector<double> out(coeffs_.size() + other.coeffs_.size() - 1, 0.0);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        for (std::size_t j = 0; j < other.coeffs_.size(); ++j) out[i + j] += coeffs_[i] * other.coeffs_[j];
    }
    return Polynomial(std::move(out));
}

Polynomial Polynomial::operator*(double s) const {
    std::vector<double> out = coeffs_;
    for (auto& c : out) c *= s;
    return Polynomial(std::move(out));
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
    std::vector<double> out(std::max(coeffs_.size(), other.coeffs_.size()), 0.0);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) out[i] += coeffs_[i];
    for (std::size_t i = 0; i < other.coeffs_.size(); ++i) out[i] += other.coeffs_[i];
    return Polynomial(std::move(out));
}

double Polynomial::root_bound() const {
    const double lead = coeffs_.back();
    double m = 0.0;
    for (std::size_t i = 0; i + 1 < coeffs_.size(); ++i) m = std::max(m, std::abs(coeffs_[i] / lead));
    return 1.0 + m;
}

namespace {

bool vanishes(const Polynomial& p, double x) {
    return std::abs(p(x)) <= 64.0 * std::numeric_limits<double>::epsilon() * p.magnitude(x);
}

double bisect(const Polynomial& p, double a, double b) {
    double fa = p(a);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break;
        const double fm = p(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (fa < 0.0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

std::vector<double> Polynomial::real_roots(double lo, double hi) const {
    std::vector<double> roots;
    if (degree() <= 0) return roots;
    if (degree() == 1) {
        const double r = -coeffs_[0] / coeffs_[1];
        if (r > lo && r < hi) roots.push_back(r);
        return roots;
    }

    std::vector<double> nodes{lo};
    for (double c : derivative().real_roots(lo, hi)) nodes.push_back(c);
    nodes.push_back(hi);

    for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
        const double a = nodes[k];
        const double b = nodes[k + 1];
        const bool interior_a = k > 0;
        const bool interior_b = k + 2 < nodes.size();
        // Critical points that are roots are recorded once, at the left end.
        if (interior_a && vanishes(*this, a)) {
            if (roots.empty() || roots.back() != a) roots.push_back(a);
        }
        const bool a_zero = interior_a && vanishes(*this, a);
        const bool b_zero = interior_b && vanishes(*this, b);
        if (a_zero || b_zero) continue;
        const double fa = (*this)(a);
        const double fb = (*this)(b);
        if (fa == 0.0 || fb == 0.0) continue;
        if ((fa < 0.0) != (fb < 0.0)) roots.push_back(bisect(*this, a, b));
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

}  // namespace cshlab
