#pragma once

#include <functional>
#include <vector>

#include "tfdiff/dg_function.hpp"

namespace tfdiff {

namespace detail {

/// Per-cell Legendre moments integral_{-1}^1 f(x(xi)) P_m(xi) dxi for
/// m = 0..n_modes-1, with the given rule.
inline void cell_moments(const Mesh1D& mesh, int j, const std::function<double(double)>& f,
                         int n_modes, const QuadRule& rule, std::vector<double>& out) {
    out.assign(n_modes, 0.0);
    std::vector<double> pvals(n_modes);
    for (int q = 0; q < rule.size(); ++q) {
        const double xi = rule.nodes[q];
        const double fx = rule.weights[q] * f(mesh.from_reference(j, xi));
        legendre_values(xi, n_modes - 1, pvals);
        for (int m = 0; m < n_modes; ++m)
            out[m] += fx * pvals[m];
    }
}

} // namespace detail

/// Cellwise L2-orthogonal projection of f onto degree-k polynomials,
/// integrated with k+2 Gauss nodes per cell.
inline DGCoefficients l2_project(const std::function<double(double)>& f, const Mesh1D& mesh,
                                 int k) {
    DGCoefficients v(mesh, k);
    const QuadRule rule = gauss_rule(k + 2);
    std::vector<double> mom;
    for (int j = 0; j < mesh.num_cells; ++j) {
        detail::cell_moments(mesh, j, f, k + 1, rule, mom);
        for (int m = 0; m <= k; ++m)
            v.coef(j, m) = mom[m] * (2 * m + 1) / 2.0;
    }
    return v;
}

/// Gauss-Radau projection P^-: on each cell, L2-orthogonality to all
/// polynomials of degree <= k-1 plus exact interpolation at the right
/// endpoint. Closed form in the modal basis: the first k coefficients are
/// the L2 ones and the top mode absorbs the endpoint condition.
/// For k = 0 it degenerates to right-endpoint interpolation.
inline DGCoefficients project_minus(const std::function<double(double)>& f, const Mesh1D& mesh,
                                    int k) {
    DGCoefficients v(mesh, k);
    const QuadRule rule = gauss_rule(k + 2);
    std::vector<double> mom;
    for (int j = 0; j < mesh.num_cells; ++j) {
        double trace = 0.0; // running sum of c_m P_m(1) = c_m
        if (k > 0) {
            detail::cell_moments(mesh, j, f, k, rule, mom);
            for (int m = 0; m < k; ++m) {
                v.coef(j, m) = mom[m] * (2 * m + 1) / 2.0;
                trace += v.coef(j, m);
            }
        }
        v.coef(j, k) = f(mesh.boundaries[j + 1]) - trace;
    }
    return v;
}

/// Gauss-Radau projection P^+: mirror image of project_minus with exact
/// interpolation at the left endpoint.
inline DGCoefficients project_plus(const std::function<double(double)>& f, const Mesh1D& mesh,
                                   int k) {
    DGCoefficients v(mesh, k);
    const QuadRule rule = gauss_rule(k + 2);
    std::vector<double> mom;
    for (int j = 0; j < mesh.num_cells; ++j) {
        double trace = 0.0; // running sum of c_m P_m(-1)
        if (k > 0) {
            detail::cell_moments(mesh, j, f, k, rule, mom);
            for (int m = 0; m < k; ++m) {
                v.coef(j, m) = mom[m] * (2 * m + 1) / 2.0;
                trace += v.coef(j, m) * legendre_at_left(m);
            }
        }
        v.coef(j, k) = legendre_at_left(k) * (f(mesh.boundaries[j]) - trace);
    }
    return v;
}

} // namespace tfdiff
