#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "tfdiff/block_lu.hpp"
#include "tfdiff/dg_function.hpp"
#include "tfdiff/params.hpp"

namespace tfdiff {

enum class BoundaryCondition { periodic, homogeneous_dirichlet };

namespace detail {

/// S[l][m] = int_{-1}^1 P_m P_l' dxi = 2 if l > m and l-m odd, else 0.
inline double legendre_deriv_pairing(int l, int m) {
    return (l > m && (l - m) % 2 == 1) ? 2.0 : 0.0;
}

} // namespace detail

/// Discrete LDG operators for the first-order system p = u_x with the
/// alternating fluxes u-hat = u^-, p-hat = p^+, in the modal Legendre
/// basis. G and D act from coefficient vectors to test moments:
///   (G u)_{j,l} = -(u, (P_l)_x)_{I_j} + u-hat_{j+1/2} P_l(1) - u-hat_{j-1/2} P_l(-1)
/// and D analogously with p-hat, so that the scheme reads
///   l0 M u^n + kappa tau^alpha L u^n = rhs,  L = -D M^{-1} G = G^T M^{-1} G.
/// All entries of G and D are h-independent integers; M is diagonal.
/// For homogeneous Dirichlet data the boundary closure is u-hat = 0 and
/// p-hat = interior trace at both endpoints, plus a symmetric boundary
/// penalty (eta/h)<u, v> at the endpoints folded into L; without it the
/// alternating fluxes drop to order k+1/2 at Dirichlet boundaries.
class LDGSystem {
public:
    /// dirichlet_penalty is the eta in the C11 = eta/h boundary penalty;
    /// negative requests the default 4(k+1)^2. Ignored for periodic BCs.
    LDGSystem(Mesh1D mesh, int degree, BoundaryCondition bc, double dirichlet_penalty = -1.0)
        : mesh_(std::move(mesh)), k_(degree), bc_(bc),
          dirichlet_penalty_(dirichlet_penalty >= 0.0 ? dirichlet_penalty
                                                      : 4.0 * (degree + 1) * (degree + 1)) {
        if (k_ < 0) throw std::invalid_argument("LDGSystem: degree must be >= 0");
        assemble_forms();
        assemble_laplacian();
    }

    const Mesh1D& mesh() const { return mesh_; }
    int degree() const { return k_; }
    int block_size() const { return k_ + 1; }
    int dof() const { return mesh_.num_cells * (k_ + 1); }
    BoundaryCondition bc() const { return bc_; }
    bool periodic() const { return bc_ == BoundaryCondition::periodic; }

    /// Diagonal mass entry for (cell j, mode m): h_j / (2m+1).
    double mass_entry(int j, int m) const { return mesh_.cell_size(j) / (2 * m + 1); }

    std::vector<double> apply_mass(const std::vector<double>& u) const {
        std::vector<double> out(u.size());
        for (int j = 0; j < mesh_.num_cells; ++j)
            for (int m = 0; m <= k_; ++m)
                out[idx(j, m)] = mass_entry(j, m) * u[idx(j, m)];
        return out;
    }

    void apply_inverse_mass_inplace(std::vector<double>& moments) const {
        for (int j = 0; j < mesh_.num_cells; ++j)
            for (int m = 0; m <= k_; ++m)
                moments[idx(j, m)] /= mass_entry(j, m);
    }

    /// L2 inner product of two coefficient vectors on this space.
    double inner_product(const std::vector<double>& u, const std::vector<double>& v) const {
        double s = 0.0;
        for (int j = 0; j < mesh_.num_cells; ++j)
            for (int m = 0; m <= k_; ++m)
                s += mass_entry(j, m) * u[idx(j, m)] * v[idx(j, m)];
        return s;
    }

    /// Plain dot product between a moment vector and a coefficient vector.
    static double dot(const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
        return s;
    }

    /// Moments of the discrete gradient form: row j reads cells j and j-1
    /// (wrapping when periodic).
    std::vector<double> apply_gradient_form(const std::vector<double>& u) const {
        const int n = mesh_.num_cells;
        std::vector<double> out(u.size(), 0.0);
        for (int j = 0; j < n; ++j) {
            auto row = row_span(out, j);
            blas::gemv_acc(g_diag_[j], cell(u, j), row);
            if (j > 0) blas::gemv_acc(g_sub_, cell(u, j - 1), row);
            else if (periodic()) blas::gemv_acc(g_sub_, cell(u, n - 1), row);
        }
        return out;
    }

    /// Moments of the discrete divergence form, assembled independently
    /// from the p-hat = p^+ flux (equal to -G^T by discrete adjointness).
    std::vector<double> apply_divergence_form(const std::vector<double>& p) const {
        const int n = mesh_.num_cells;
        std::vector<double> out(p.size(), 0.0);
        for (int j = 0; j < n; ++j) {
            auto row = row_span(out, j);
            blas::gemv_acc(d_diag_[j], cell(p, j), row);
            if (j < n - 1) blas::gemv_acc(d_sup_, cell(p, j + 1), row);
            else if (periodic()) blas::gemv_acc(d_sup_, cell(p, 0), row);
        }
        return out;
    }

    /// Auxiliary variable p = M^{-1} G u as DG coefficients.
    DGCoefficients gradient(const DGCoefficients& u) const {
        std::vector<double> mom = apply_gradient_form(u.coeffs);
        apply_inverse_mass_inplace(mom);
        DGCoefficients p(mesh_, k_);
        p.coeffs = std::move(mom);
        return p;
    }

    /// Moments of the discrete Laplacian, L u = (G^T M^{-1} G) u.
    std::vector<double> apply_laplacian_form(const std::vector<double>& u) const {
        const int n = mesh_.num_cells;
        std::vector<double> out(u.size(), 0.0);
        for (int j = 0; j < n; ++j) {
            auto row = row_span(out, j);
            blas::gemv_acc(l_diag_[j], cell(u, j), row);
            if (j > 0) blas::gemv_acc(l_low_[j], cell(u, j - 1), row);
            else if (periodic()) blas::gemv_acc(l_low_[0], cell(u, n - 1), row);
            if (j < n - 1) blas::gemv_acc(l_up_[j], cell(u, j + 1), row);
            else if (periodic()) blas::gemv_acc(l_up_[n - 1], cell(u, 0), row);
        }
        return out;
    }

    const std::vector<DenseBlock>& laplacian_diag() const { return l_diag_; }
    const std::vector<DenseBlock>& laplacian_low() const { return l_low_; }
    const std::vector<DenseBlock>& laplacian_up() const { return l_up_; }

    std::span<const double> cell(const std::vector<double>& v, int j) const {
        return {v.data() + idx(j, 0), static_cast<std::size_t>(k_ + 1)};
    }

private:
    std::span<double> row_span(std::vector<double>& v, int j) const {
        return {v.data() + idx(j, 0), static_cast<std::size_t>(k_ + 1)};
    }

    std::size_t idx(int j, int m) const { return static_cast<std::size_t>(j) * (k_ + 1) + m; }

    void assemble_forms() {
        const int b = k_ + 1;
        const int n = mesh_.num_cells;
        DenseBlock gd(b), dd(b), gs(b), ds(b);
        for (int l = 0; l < b; ++l)
            for (int m = 0; m < b; ++m) {
                const double S = detail::legendre_deriv_pairing(l, m);
                const double sl = legendre_at_left(l), sm = legendre_at_left(m);
                gd(l, m) = -S + 1.0;     // u^-_{j+1/2} from cell j
                gs(l, m) = -sl;          // u^-_{j-1/2} from cell j-1
                dd(l, m) = -S - sl * sm; // p^+_{j-1/2} from cell j
                ds(l, m) = sm;           // p^+_{j+1/2} from cell j+1
            }
        g_diag_.assign(n, gd);
        d_diag_.assign(n, dd);
        g_sub_ = gs;
        d_sup_ = ds;
        if (!periodic()) {
            // u-hat = 0 at x_{N+1/2}: the last G diagonal loses its right
            // flux; p-hat = p^- at x_{N+1/2}: the last D diagonal gains it.
            for (int l = 0; l < b; ++l)
                for (int m = 0; m < b; ++m) {
                    g_diag_[n - 1](l, m) -= 1.0;
                    d_diag_[n - 1](l, m) += 1.0;
                }
        }
    }

    void assemble_laplacian() {
        const int b = k_ + 1;
        const int n = mesh_.num_cells;
        l_diag_.assign(n, DenseBlock(b));
        l_low_.assign(n, DenseBlock(b));
        l_up_.assign(n, DenseBlock(b));
        // Scale rows of a G block by Minv of the owning cell, multiply by
        // the transpose of another G block.
        auto accumulate = [&](const DenseBlock& gt, int owner, const DenseBlock& g,
                              DenseBlock& out) {
            for (int l = 0; l < b; ++l)
                for (int m = 0; m < b; ++m) {
                    double s = 0.0;
                    for (int r = 0; r < b; ++r)
                        s += gt(r, l) * g(r, m) / mass_entry(owner, r);
                    out(l, m) += s;
                }
        };
        for (int j = 0; j < n; ++j) {
            accumulate(g_diag_[j], j, g_diag_[j], l_diag_[j]);
            const bool has_sub = j > 0 || periodic();
            if (has_sub) {
                // row j of G also feeds L(j-1, *) through G_sub^T
                const int jm = j > 0 ? j - 1 : n - 1;
                accumulate(g_sub_, j, g_sub_, l_diag_[jm]);
                accumulate(g_sub_, j, g_diag_[j], l_up_[jm]);
                accumulate(g_diag_[j], j, g_sub_, l_low_[j]);
            }
        }
        if (!periodic() && dirichlet_penalty_ > 0.0) {
            // Boundary penalty (eta/h) <u v> at both endpoints: keeps L
            // symmetric positive semi-definite and restores the optimal
            // order that the plain alternating closure loses at Dirichlet
            // boundaries. Rank-2 symmetric update of the end diagonals.
            const double eta_l = dirichlet_penalty_ / mesh_.cell_size(0);
            const double eta_r = dirichlet_penalty_ / mesh_.cell_size(n - 1);
            for (int l = 0; l < b; ++l)
                for (int m = 0; m < b; ++m) {
                    l_diag_[0](l, m) += eta_l * legendre_at_left(l) * legendre_at_left(m);
                    l_diag_[n - 1](l, m) += eta_r;
                }
        }
    }

    Mesh1D mesh_;
    int k_;
    BoundaryCondition bc_;
    double dirichlet_penalty_;

    std::vector<DenseBlock> g_diag_, d_diag_;
    DenseBlock g_sub_, d_sup_;
    std::vector<DenseBlock> l_diag_, l_low_, l_up_;

    friend class StepMatrix;
};

/// Convenience constructor mirroring the module operation name.
inline LDGSystem assemble(const Mesh1D& mesh, int degree, BoundaryCondition bc) {
    return LDGSystem(mesh, degree, bc);
}

/// Riesz representative of L u: coefficients of M^{-1} (G^T M^{-1} G) u.
/// For u = projection of a smooth function this approximates -u_xx.
inline DGCoefficients apply_laplacian(const LDGSystem& sys, const DGCoefficients& u) {
    if (u.degree != sys.degree() || u.mesh.num_cells != sys.mesh().num_cells)
        throw std::invalid_argument("apply_laplacian: incompatible shapes");
    std::vector<double> mom = sys.apply_laplacian_form(u.coeffs);
    sys.apply_inverse_mass_inplace(mom);
    DGCoefficients out(sys.mesh(), sys.degree());
    out.coeffs = std::move(mom);
    return out;
}

/// Factorized per-step matrix K = l0 M + kappa tau^alpha L, reusable
/// across all time steps of a march. Periodic corner blocks are handled by
/// a bordered solve around the banded factorization (dense fallback for
/// fewer than 3 cells).
class StepMatrix {
public:
    StepMatrix(const LDGSystem& sys, double l0, const TemperedParams& params, double tau)
        : sys_(&sys), l0_(l0), coef_(params.kappa * std::pow(tau, params.alpha)) {
        if (!(l0 > 0.0)) throw std::invalid_argument("StepMatrix: l0 must be > 0");
        if (!(tau > 0.0)) throw std::invalid_argument("StepMatrix: tau must be > 0");
        const int n = sys.mesh().num_cells;
        const int b = sys.block_size();
        BlockTridiagonal K(n, b);
        for (int j = 0; j < n; ++j) {
            for (int l = 0; l < b; ++l)
                for (int m = 0; m < b; ++m)
                    K.diag[j](l, m) = coef_ * sys.l_diag_[j](l, m);
            for (int m = 0; m < b; ++m)
                K.diag[j](m, m) += l0_ * sys.mass_entry(j, m);
            if (j > 0)
                for (int l = 0; l < b; ++l)
                    for (int m = 0; m < b; ++m) K.sub[j](l, m) = coef_ * sys.l_low_[j](l, m);
            if (j < n - 1)
                for (int l = 0; l < b; ++l)
                    for (int m = 0; m < b; ++m) K.sup[j](l, m) = coef_ * sys.l_up_[j](l, m);
        }
        if (!sys.periodic()) {
            thomas_ = BlockThomasLU(K);
            kind_ = Kind::banded;
        } else if (n >= 3) {
            DenseBlock tr(b), bl(b);
            for (int l = 0; l < b; ++l)
                for (int m = 0; m < b; ++m) {
                    tr(l, m) = coef_ * sys.l_low_[0](l, m);
                    bl(l, m) = coef_ * sys.l_up_[n - 1](l, m);
                }
            bordered_ = PeriodicBlockLU(K, tr, bl);
            kind_ = Kind::bordered;
        } else {
            // tiny periodic mesh: wrap couplings collide with the band
            DenseBlock full(n * b);
            auto add = [&](int jr, int jc, const DenseBlock& blk, double scale) {
                for (int l = 0; l < b; ++l)
                    for (int m = 0; m < b; ++m)
                        full(jr * b + l, jc * b + m) += scale * blk(l, m);
            };
            for (int j = 0; j < n; ++j) {
                add(j, j, sys.l_diag_[j], coef_);
                add(j, (j + n - 1) % n, sys.l_low_[j], coef_);
                add(j, (j + 1) % n, sys.l_up_[j], coef_);
            }
            for (int j = 0; j < n; ++j)
                for (int m = 0; m < b; ++m)
                    full(j * b + m, j * b + m) += l0_ * sys.mass_entry(j, m);
            dense_ = DenseLU(std::move(full));
            kind_ = Kind::dense;
        }
    }

    double l0() const { return l0_; }
    /// kappa tau^alpha factor multiplying the Laplacian.
    double laplacian_coef() const { return coef_; }

    /// Solve K x = b for coefficients x given test moments b.
    std::vector<double> solve(std::vector<double> rhs) const {
        switch (kind_) {
        case Kind::banded: thomas_.solve_inplace(rhs); break;
        case Kind::bordered: bordered_.solve_inplace(rhs); break;
        case Kind::dense: dense_.solve_inplace(rhs); break;
        }
        for (double v : rhs)
            if (!std::isfinite(v)) throw SolverError("StepMatrix::solve: non-finite solution");
        return rhs;
    }

    /// K u, for residual checks.
    std::vector<double> apply(const std::vector<double>& u) const {
        std::vector<double> out = sys_->apply_laplacian_form(u);
        for (double& v : out) v *= coef_;
        const std::vector<double> mu = sys_->apply_mass(u);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += l0_ * mu[i];
        return out;
    }

private:
    enum class Kind { banded, bordered, dense };
    const LDGSystem* sys_;
    double l0_;
    double coef_;
    Kind kind_ = Kind::banded;
    BlockThomasLU thomas_;
    PeriodicBlockLU bordered_;
    DenseLU dense_;
};

inline StepMatrix factorize_step_matrix(const LDGSystem& sys, double l0,
                                        const TemperedParams& params, double tau) {
    return StepMatrix(sys, l0, params, tau);
}

} // namespace tfdiff
