#pragma once

namespace cshlab::detail {

/// x^k by repeated multiplication; keeps the sign of negative bases for odd k.
/// ipow(x, 0) == 1 for every x, including 0.
inline double ipow(double x, int k) {
    double result = 1.0;
    double base = x;
    while (k > 0) {
        if (k & 1) result *= base;
        base *= base;
        k >>= 1;
    }
    return result;
}

}  // namespace cshlab::detail
