#pragma once

#include <cmath>
#include <functional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

#include "tfdiff/gauss.hpp"
#include "tfdiff/legendre.hpp"
#include "tfdiff/mesh.hpp"

namespace tfdiff {

/// One-sided limit selector for evaluation at cell interfaces.
enum class Side { interior, left_limit, right_limit };

/// Piecewise polynomial of degree k on a mesh, stored as modal Legendre
/// coefficients: v|_{I_j}(x) = sum_m c[j][m] P_m(xi_j(x)).
/// Layout: coeffs[j*(k+1) + m].
struct DGCoefficients {
    Mesh1D mesh;
    int degree = 0;
    std::vector<double> coeffs;

    DGCoefficients() = default;
    DGCoefficients(Mesh1D m, int k)
        : mesh(std::move(m)), degree(k),
          coeffs(static_cast<std::size_t>(mesh.num_cells) * (k + 1), 0.0) {}

    int block_size() const { return degree + 1; }
    double& coef(int cell, int mode) { return coeffs[static_cast<std::size_t>(cell) * (degree + 1) + mode]; }
    double coef(int cell, int mode) const { return coeffs[static_cast<std::size_t>(cell) * (degree + 1) + mode]; }
    std::span<const double> cell(int j) const {
        return {coeffs.data() + static_cast<std::size_t>(j) * (degree + 1),
                static_cast<std::size_t>(degree + 1)};
    }

    /// Value inside cell j at reference coordinate xi.
    double eval_in_cell(int j, double xi) const {
        // Clenshaw-free direct sum; k is small.
        double pm1 = 1.0, pm = xi, v = coef(j, 0);
        if (degree >= 1) v += coef(j, 1) * xi;
        for (int m = 1; m < degree; ++m) {
            const double pnext = ((2 * m + 1) * xi * pm - m * pm1) / (m + 1);
            pm1 = pm;
            pm = pnext;
            v += coef(j, m + 1) * pnext;
        }
        return v;
    }

    /// Trace from inside cell j at its right endpoint (xi = 1).
    double trace_right(int j) const {
        double v = 0.0;
        for (int m = 0; m <= degree; ++m) v += coef(j, m);
        return v;
    }
    /// Trace from inside cell j at its left endpoint (xi = -1).
    double trace_left(int j) const {
        double v = 0.0;
        for (int m = 0; m <= degree; ++m) v += (m % 2 == 0 ? coef(j, m) : -coef(j, m));
        return v;
    }

    /// Squared L2 norm from Legendre orthogonality.
    double norm_sq() const {
        double s = 0.0;
        for (int j = 0; j < mesh.num_cells; ++j) {
            const double hj2 = 0.5 * mesh.cell_size(j);
            for (int m = 0; m <= degree; ++m) {
                const double c = coef(j, m);
                s += hj2 * c * c * legendre_norm_sq(m);
            }
        }
        return s;
    }
    double norm() const { return std::sqrt(norm_sq()); }
};

/// Point evaluation with one-sided limits at interfaces. x must lie in the
/// mesh; at an interior interface `side` picks the cell, elsewhere it is
/// ignored. left_limit at x_left (or right_limit at x_right) is invalid.
inline double eval_dg(const DGCoefficients& v, double x, Side side = Side::interior) {
    const Mesh1D& mesh = v.mesh;
    if (x < mesh.x_left || x > mesh.x_right)
        throw std::out_of_range("eval_dg: point outside the mesh");
    int j = mesh.locate(x);
    if (side == Side::left_limit) {
        if (x == mesh.boundaries[j]) {
            if (j == 0) throw std::out_of_range("eval_dg: no left limit at the domain boundary");
            --j;
        }
    } else if (side == Side::right_limit) {
        if (x == mesh.x_right)
            throw std::out_of_range("eval_dg: no right limit at the domain boundary");
    }
    return v.eval_in_cell(j, mesh.to_reference(j, x));
}

/// L2 distance between a DG function and an arbitrary function, by
/// per-cell Gauss quadrature with the given rule.
inline double l2_error(const DGCoefficients& v, const std::function<double(double)>& g,
                       const QuadRule& rule) {
    double s = 0.0;
    for (int j = 0; j < v.mesh.num_cells; ++j) {
        const double hj2 = 0.5 * v.mesh.cell_size(j);
        for (int q = 0; q < rule.size(); ++q) {
            const double xi = rule.nodes[q];
            const double x = v.mesh.from_reference(j, xi);
            const double d = v.eval_in_cell(j, xi) - g(x);
            s += hj2 * rule.weights[q] * d * d;
        }
    }
    return std::sqrt(s);
}

/// L2 norm by quadrature (cross-check for the orthogonality formula).
inline double l2_norm_quadrature(const DGCoefficients& v, const QuadRule& rule) {
    return l2_error(v, [](double) { return 0.0; }, rule);
}

/// CSV dump: one `cell,mode,value` row per coefficient.
inline void write_coefficients_csv(std::ostream& os, const DGCoefficients& v) {
    os << "cell,mode,value\n";
    char buf[64];
    for (int j = 0; j < v.mesh.num_cells; ++j)
        for (int m = 0; m <= v.degree; ++m) {
            std::snprintf(buf, sizeof buf, "%d,%d,%.17g\n", j, m, v.coef(j, m));
            os << buf;
        }
}

} // namespace tfdiff
