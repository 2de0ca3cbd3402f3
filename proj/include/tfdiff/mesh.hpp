#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace tfdiff {

/// Uniform partition of [x_left, x_right] into num_cells cells.
/// boundaries[j] is x_{j+1/2} in half-index notation, j = 0..N.
struct Mesh1D {
    double x_left = 0.0;
    double x_right = 1.0;
    int num_cells = 0;
    std::vector<double> boundaries;
    std::vector<double> cell_sizes;

    double cell_size(int j) const { return cell_sizes[j]; }
    double cell_center(int j) const { return 0.5 * (boundaries[j] + boundaries[j + 1]); }
    double h_max() const { return *std::max_element(cell_sizes.begin(), cell_sizes.end()); }

    /// Affine map of cell j onto the reference interval [-1,1].
    double to_reference(int j, double x) const {
        return (2.0 * x - boundaries[j] - boundaries[j + 1]) / cell_sizes[j];
    }
    double from_reference(int j, double xi) const {
        return 0.5 * (boundaries[j] + boundaries[j + 1]) + 0.5 * cell_sizes[j] * xi;
    }

    /// Index of the cell containing x; at an interior boundary returns the
    /// cell to its right. x must lie inside [x_left, x_right].
    int locate(double x) const {
        if (x < x_left || x > x_right)
            throw std::out_of_range("Mesh1D::locate: point outside the mesh");
        const int guess = static_cast<int>((x - x_left) / (x_right - x_left) * num_cells);
        int j = std::clamp(guess, 0, num_cells - 1);
        while (j > 0 && x < boundaries[j]) --j;
        while (j < num_cells - 1 && x >= boundaries[j + 1]) ++j;
        return j;
    }
};

inline Mesh1D build_mesh(double x_left, double x_right, int num_cells) {
    if (num_cells < 1)
        throw std::invalid_argument("build_mesh: need at least one cell");
    if (!(x_left < x_right))
        throw std::invalid_argument("build_mesh: interval is empty or inverted");
    Mesh1D mesh;
    mesh.x_left = x_left;
    mesh.x_right = x_right;
    mesh.num_cells = num_cells;
    mesh.boundaries.resize(num_cells + 1);
    const double h = (x_right - x_left) / num_cells;
    for (int j = 0; j <= num_cells; ++j)
        mesh.boundaries[j] = x_left + j * h;
    mesh.boundaries[num_cells] = x_right;
    mesh.cell_sizes.resize(num_cells);
    for (int j = 0; j < num_cells; ++j)
        mesh.cell_sizes[j] = mesh.boundaries[j + 1] - mesh.boundaries[j];
    return mesh;
}

} // namespace tfdiff
