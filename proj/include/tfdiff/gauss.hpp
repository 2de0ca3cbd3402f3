#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "tfdiff/legendre.hpp"

namespace tfdiff {

/// Gauss-Legendre rule on [-1,1]: nodes ascending, weights positive,
/// sum of weights = 2, exact for polynomials of degree <= 2m-1.
struct QuadRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    int size() const { return static_cast<int>(nodes.size()); }
};

/// m-point Gauss-Legendre rule, 1 <= m <= 64. Nodes are the roots of P_m,
/// found by Newton iteration from the Chebyshev-like initial guess; the
/// rule is symmetrized exactly about 0.
inline QuadRule gauss_rule(int m) {
    if (m < 1 || m > 64)
        throw std::invalid_argument("gauss_rule: node count must be in [1,64]");
    QuadRule rule;
    rule.nodes.assign(m, 0.0);
    rule.weights.assign(m, 0.0);
    const int half = m / 2;
    const double pi = 3.14159265358979323846;
    for (int i = 0; i < half; ++i) {
        double x = -std::cos(pi * (i + 0.75) / (m + 0.5));
        double p = 0.0, dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            legendre_value_deriv(x, m, p, dp);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        legendre_value_deriv(x, m, p, dp);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = x;
        rule.weights[i] = w;
        rule.nodes[m - 1 - i] = -x;
        rule.weights[m - 1 - i] = w;
    }
    if (m % 2 == 1) {
        double p, dp;
        legendre_value_deriv(0.0, m, p, dp);
        rule.nodes[half] = 0.0;
        rule.weights[half] = 2.0 / (dp * dp);
    }
    return rule;
}

} // namespace tfdiff
