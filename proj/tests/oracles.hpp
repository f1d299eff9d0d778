#pragma once

// Reference computations written independently of the library: plain loops
// over std::vector, closed forms, and bisection.

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

/// Δu(x) = 1/μ(x) Σ_y w(x,y)(u(y) − u(x)) with w given densely.
inline std::vector<double> laplacian(const Matrix& w, const std::vector<double>& mu, const std::vector<double>& u) {
    std::vector<double> out(u.size(), 0.0);
    for (std::size_t x = 0; x < u.size(); ++x) {
        for (std::size_t y = 0; y < u.size(); ++y) out[x] += w[x][y] * (u[y] - u[x]);
        out[x] /= mu[x];
    }
    return out;
}

inline Matrix cycle_weights(std::size_t n) {
    Matrix w(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        w[i][(i + 1) % n] = 1.0;
        w[(i + 1) % n][i] = 1.0;
    }
    return w;
}

inline std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

/// Positive roots t of λt(t − σ) + c = 0 from the quadratic formula.
inline std::vector<double> quadratic_positive_roots(double lambda, double sigma, double c) {
    const double disc = sigma * sigma - 4.0 * c / lambda;
    std::vector<double> out;
    if (disc < 0.0) return out;
    for (double t : {0.5 * (sigma - std::sqrt(disc)), 0.5 * (sigma + std::sqrt(disc))}) {
        if (t > 0.0 && (out.empty() || t != out.back())) out.push_back(t);
    }
    return out;
}

/// Sign changes of h on a fine grid of (0, hi], refined by bisection.
inline std::vector<double> scan_roots(const std::function<double(double)>& h, double hi, int samples = 200000) {
    std::vector<double> out;
    double a = hi / samples;
    double ha = h(a);
    for (int k = 2; k <= samples; ++k) {
        const double b = hi * k / samples;
        const double hb = h(b);
        if (ha == 0.0) out.push_back(a);
        if (ha * hb < 0.0) {
            double lo = a, up = b;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + up);
                ((h(lo) < 0.0) == (h(mid) < 0.0) ? lo : up) = mid;
            }
            out.push_back(0.5 * (lo + up));
        }
        a = b;
        ha = hb;
    }
    return out;
}

/// Central-difference directional derivative.
inline Eigen::VectorXd directional(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& x, const Eigen::VectorXd& d, double h = 1e-5) {
    return (f(x + h * d) - f(x - h * d)) / (2.0 * h);
}

inline double directional(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x,
                          const Eigen::VectorXd& d, double h = 1e-5) {
    return (f(x + h * d) - f(x - h * d)) / (2.0 * h);
}

/// Eigenvalues of a symmetric 2×2 matrix, ascending.
inline std::pair<double, double> sym2_eigs(double a, double b, double d) {
    const double m = 0.5 * (a + d);
    const double r = std::sqrt(0.25 * (a - d) * (a - d) + b * b);
    return {m - r, m + r};
}

}  // namespace oracle
