#pragma once

#include <cassert>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace tfdiff {

/// Thrown when a step-matrix factorization or solve breaks down.
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Dense b x b matrix in row-major order.
struct DenseBlock {
    int n = 0;
    std::vector<double> a;

    DenseBlock() = default;
    explicit DenseBlock(int n_) : n(n_), a(static_cast<std::size_t>(n_) * n_, 0.0) {}
    double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
    double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
};

namespace blas {

// y += A x
inline void gemv_acc(const DenseBlock& A, std::span<const double> x, std::span<double> y) {
    for (int i = 0; i < A.n; ++i) {
        double s = y[i];
        for (int j = 0; j < A.n; ++j) s += A(i, j) * x[j];
        y[i] = s;
    }
}

// y -= A x
inline void gemv_sub(const DenseBlock& A, std::span<const double> x, std::span<double> y) {
    for (int i = 0; i < A.n; ++i) {
        double s = y[i];
        for (int j = 0; j < A.n; ++j) s -= A(i, j) * x[j];
        y[i] = s;
    }
}

// C += A B
inline void gemm_acc(const DenseBlock& A, const DenseBlock& B, DenseBlock& C) {
    const int n = A.n;
    for (int i = 0; i < n; ++i)
        for (int l = 0; l < n; ++l) {
            const double ail = A(i, l);
            if (ail == 0.0) continue;
            for (int j = 0; j < n; ++j) C(i, j) += ail * B(l, j);
        }
}

// C -= A B
inline void gemm_sub(const DenseBlock& A, const DenseBlock& B, DenseBlock& C) {
    const int n = A.n;
    for (int i = 0; i < n; ++i)
        for (int l = 0; l < n; ++l) {
            const double ail = A(i, l);
            if (ail == 0.0) continue;
            for (int j = 0; j < n; ++j) C(i, j) -= ail * B(l, j);
        }
}

} // namespace blas

/// LU factorization with partial pivoting of a small dense block.
class DenseLU {
public:
    DenseLU() = default;
    explicit DenseLU(DenseBlock m) : lu_(std::move(m)), piv_(lu_.n) {
        const int n = lu_.n;
        for (int i = 0; i < n; ++i) piv_[i] = i;
        for (int c = 0; c < n; ++c) {
            int p = c;
            for (int r = c + 1; r < n; ++r)
                if (std::abs(lu_(r, c)) > std::abs(lu_(p, c))) p = r;
            if (lu_(p, c) == 0.0)
                throw SolverError("DenseLU: singular block");
            if (p != c) {
                for (int j = 0; j < n; ++j) std::swap(lu_(p, j), lu_(c, j));
                std::swap(piv_[p], piv_[c]);
            }
            const double inv = 1.0 / lu_(c, c);
            for (int r = c + 1; r < n; ++r) {
                const double m = lu_(r, c) * inv;
                lu_(r, c) = m;
                for (int j = c + 1; j < n; ++j) lu_(r, j) -= m * lu_(c, j);
            }
        }
    }

    int size() const { return lu_.n; }

    void solve_inplace(std::span<double> b) const {
        const int n = lu_.n;
        assert(static_cast<int>(b.size()) == n);
        std::vector<double> y(n);
        for (int i = 0; i < n; ++i) y[i] = b[piv_[i]];
        for (int i = 1; i < n; ++i)
            for (int j = 0; j < i; ++j) y[i] -= lu_(i, j) * y[j];
        for (int i = n - 1; i >= 0; --i) {
            for (int j = i + 1; j < n; ++j) y[i] -= lu_(i, j) * b[j];
            b[i] = y[i] / lu_(i, i);
        }
    }

    /// X = A^{-1} B columnwise.
    DenseBlock solve_matrix(const DenseBlock& B) const {
        const int n = lu_.n;
        DenseBlock X(n);
        std::vector<double> col(n);
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) col[i] = B(i, j);
            solve_inplace(col);
            for (int i = 0; i < n; ++i) X(i, j) = col[i];
        }
        return X;
    }

private:
    DenseBlock lu_;
    std::vector<int> piv_;
};

/// Block tridiagonal system: diag[j] on the diagonal, sub[j] = A(j, j-1)
/// for j >= 1, sup[j] = A(j, j+1) for j <= n-2. Factorized by the block
/// Thomas algorithm (stable without block pivoting for the SPD systems
/// assembled here).
struct BlockTridiagonal {
    int n_blocks = 0;
    int block = 0;
    std::vector<DenseBlock> diag, sub, sup;

    BlockTridiagonal() = default;
    BlockTridiagonal(int n, int b)
        : n_blocks(n), block(b), diag(n, DenseBlock(b)), sub(n, DenseBlock(b)),
          sup(n, DenseBlock(b)) {}
};

class BlockThomasLU {
public:
    BlockThomasLU() = default;
    explicit BlockThomasLU(const BlockTridiagonal& A) : n_(A.n_blocks), b_(A.block) {
        lu_.reserve(n_);
        x_factors_.resize(n_);
        sub_ = A.sub;
        DenseBlock d = A.diag[0];
        lu_.emplace_back(std::move(d));
        for (int j = 1; j < n_; ++j) {
            x_factors_[j - 1] = lu_[j - 1].solve_matrix(A.sup[j - 1]);
            DenseBlock dj = A.diag[j];
            blas::gemm_sub(A.sub[j], x_factors_[j - 1], dj);
            lu_.emplace_back(std::move(dj));
        }
    }

    void solve_inplace(std::span<double> rhs) const {
        assert(static_cast<int>(rhs.size()) == n_ * b_);
        auto blk = [&](int j) { return rhs.subspan(static_cast<std::size_t>(j) * b_, b_); };
        lu_[0].solve_inplace(blk(0));
        for (int j = 1; j < n_; ++j) {
            blas::gemv_sub(sub_[j], blk(j - 1), blk(j));
            lu_[j].solve_inplace(blk(j));
        }
        for (int j = n_ - 2; j >= 0; --j)
            blas::gemv_sub(x_factors_[j], blk(j + 1), blk(j));
    }

private:
    int n_ = 0, b_ = 0;
    std::vector<DenseLU> lu_;
    std::vector<DenseBlock> x_factors_; // D~_j^{-1} sup_j
    std::vector<DenseBlock> sub_;
};

/// Block tridiagonal matrix with periodic corner blocks A(0, n-1) and
/// A(n-1, 0), solved by a bordered (Schur-complement) factorization around
/// the leading (n-1)-block Thomas factorization. Requires n >= 3; smaller
/// periodic systems are handled by the dense fallback in the assembler.
class PeriodicBlockLU {
public:
    PeriodicBlockLU() = default;
    PeriodicBlockLU(const BlockTridiagonal& A, const DenseBlock& corner_tr,
                    const DenseBlock& corner_bl) {
        n_ = A.n_blocks;
        b_ = A.block;
        if (n_ < 3)
            throw SolverError("PeriodicBlockLU: need at least 3 block rows");
        const int m = n_ - 1;
        BlockTridiagonal T(m, b_);
        for (int j = 0; j < m; ++j) {
            T.diag[j] = A.diag[j];
            if (j >= 1) T.sub[j] = A.sub[j];
            if (j <= m - 2) T.sup[j] = A.sup[j];
        }
        head_ = BlockThomasLU(T);

        // B: coupling of rows 0..m-1 to the last block column; only rows 0
        // (corner) and m-1 (superdiagonal) are nonzero.
        b_top_ = corner_tr;
        b_bot_ = A.sup[m - 1];
        c_left_ = corner_bl;  // row m, block column 0
        c_right_ = A.sub[m];  // row m, block column m-1

        // Y = T^{-1} B, stored as the two nonzero block columns stacked.
        y_.assign(static_cast<std::size_t>(m) * b_ * b_, 0.0);
        std::vector<double> col(static_cast<std::size_t>(m) * b_);
        DenseBlock schur = A.diag[m];
        for (int c = 0; c < b_; ++c) {
            std::fill(col.begin(), col.end(), 0.0);
            for (int i = 0; i < b_; ++i) {
                col[i] = b_top_(i, c);
                col[static_cast<std::size_t>(m - 1) * b_ + i] = b_bot_(i, c);
            }
            head_.solve_inplace(col);
            for (int j = 0; j < m; ++j)
                for (int i = 0; i < b_; ++i)
                    y_[(static_cast<std::size_t>(j) * b_ + i) * b_ + c] =
                        col[static_cast<std::size_t>(j) * b_ + i];
            // schur(:, c) -= C * Y(:, c)
            for (int i = 0; i < b_; ++i) {
                double s = 0.0;
                for (int k = 0; k < b_; ++k) {
                    s += c_left_(i, k) * col[k];
                    s += c_right_(i, k) * col[static_cast<std::size_t>(m - 1) * b_ + k];
                }
                schur(i, c) -= s;
            }
        }
        schur_ = DenseLU(std::move(schur));
    }

    void solve_inplace(std::span<double> rhs) const {
        const int m = n_ - 1;
        auto head = rhs.subspan(0, static_cast<std::size_t>(m) * b_);
        auto tail = rhs.subspan(static_cast<std::size_t>(m) * b_, b_);
        head_.solve_inplace(head);
        // tail -= C * head
        for (int i = 0; i < b_; ++i) {
            double s = 0.0;
            for (int k = 0; k < b_; ++k) {
                s += c_left_(i, k) * head[k];
                s += c_right_(i, k) * head[static_cast<std::size_t>(m - 1) * b_ + k];
            }
            tail[i] -= s;
        }
        schur_.solve_inplace(tail);
        // head -= Y * tail
        for (int j = 0; j < m; ++j)
            for (int i = 0; i < b_; ++i) {
                double s = 0.0;
                for (int c = 0; c < b_; ++c)
                    s += y_[(static_cast<std::size_t>(j) * b_ + i) * b_ + c] * tail[c];
                head[static_cast<std::size_t>(j) * b_ + i] -= s;
            }
    }

private:
    int n_ = 0, b_ = 0;
    BlockThomasLU head_;
    DenseBlock b_top_, b_bot_, c_left_, c_right_;
    std::vector<double> y_;
    DenseLU schur_;
};

} // namespace tfdiff
