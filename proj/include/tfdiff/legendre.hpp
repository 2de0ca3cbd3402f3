#pragma once

#include <cassert>
#include <span>
#include <vector>

namespace tfdiff {

/// P_0(x) .. P_n(x) by the three-term recurrence, written into out (size n+1).
inline void legendre_values(double x, int n, std::span<double> out) {
    assert(static_cast<int>(out.size()) >= n + 1);
    out[0] = 1.0;
    if (n == 0) return;
    out[1] = x;
    for (int m = 1; m < n; ++m)
        out[m + 1] = ((2 * m + 1) * x * out[m] - m * out[m - 1]) / (m + 1);
}

inline std::vector<double> legendre_values(double x, int n) {
    std::vector<double> v(n + 1);
    legendre_values(x, n, v);
    return v;
}

/// Value and derivative of P_n at x (derivative via the standard identity,
/// valid for |x| < 1; at x = +-1 use P_n'(+-1) = (+-1)^{n-1} n(n+1)/2).
inline void legendre_value_deriv(double x, int n, double& p, double& dp) {
    if (n == 0) { p = 1.0; dp = 0.0; return; }
    double pm1 = 1.0, pm = x;
    for (int m = 1; m < n; ++m) {
        const double pnext = ((2 * m + 1) * x * pm - m * pm1) / (m + 1);
        pm1 = pm;
        pm = pnext;
    }
    p = pm;
    if (x == 1.0 || x == -1.0) {
        // P_n'(1) = n(n+1)/2, P_n'(-1) = (-1)^{n-1} n(n+1)/2
        const double sign = (x > 0.0) ? 1.0 : (n % 2 == 0 ? -1.0 : 1.0);
        dp = sign * 0.5 * n * (n + 1);
    } else {
        dp = n * (x * pm - pm1) / (x * x - 1.0);
    }
}

/// Squared L2([-1,1]) norm of P_m.
inline double legendre_norm_sq(int m) { return 2.0 / (2 * m + 1); }

/// P_m(1) = 1, P_m(-1) = (-1)^m.
inline double legendre_at_right(int) { return 1.0; }
inline double legendre_at_left(int m) { return (m % 2 == 0) ? 1.0 : -1.0; }

} // namespace tfdiff
