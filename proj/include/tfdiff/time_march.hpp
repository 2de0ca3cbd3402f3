#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "tfdiff/ldg.hpp"
#include "tfdiff/problems.hpp"
#include "tfdiff/projections.hpp"
#include "tfdiff/tempered_integral.hpp"
#include "tfdiff/weights.hpp"

namespace tfdiff {

enum class InitialProjection { l2, p_minus };

/// One fully discrete march of the order-q tempered convolution scheme:
///   l0 (u^n, v) + kappa tau^alpha a(p^n; v)
///     = e^{-lambda n tau} (sum_{k=0}^{n-1} l_k) (u^0, v)
///       - sum_{k=1}^{n-1} e^{-lambda k tau} l_k (u^{n-k}, v) + tau^alpha (f(t_n), v).
/// The full history is stored (the convolution needs all of it); times are
/// derived from the step index, never accumulated.
class MarchState {
public:
    MarchState(const ProblemSpec& problem, const LDGSystem& sys, int q, int max_steps,
               InitialProjection init = InitialProjection::l2)
        : problem_(&problem), sys_(&sys), tau_(problem.T / std::max(1, max_steps)),
          weights_(tempered_weights(q, problem.params, tau_, std::max(1, max_steps))),
          partial_sums_(weight_partial_sums(weights_.l)),
          step_matrix_(sys, weights_.l[0], problem.params, tau_),
          forcing_rule_(gauss_rule(sys.degree() + 2)) {
        if (max_steps < 0)
            throw std::invalid_argument("MarchState: negative step count");
        DGCoefficients u0 = (init == InitialProjection::l2)
                                ? l2_project(problem.initial, sys.mesh(), sys.degree())
                                : project_minus(problem.initial, sys.mesh(), sys.degree());
        history_.push_back(u0.coeffs);
        mass_history_.push_back(sys.apply_mass(u0.coeffs));
    }

    int step_index() const { return static_cast<int>(history_.size()) - 1; }
    double tau() const { return tau_; }
    double time() const { return step_index() * tau_; }
    const ConvolutionWeights& weights() const { return weights_; }
    const LDGSystem& system() const { return *sys_; }
    const ProblemSpec& problem() const { return *problem_; }
    int history_size() const { return static_cast<int>(history_.size()); }

    const std::vector<double>& coeffs(int n) const { return history_[n]; }
    DGCoefficients state(int n) const {
        DGCoefficients u(sys_->mesh(), sys_->degree());
        u.coeffs = history_[n];
        return u;
    }
    DGCoefficients current() const { return state(step_index()); }

    double norm(int n) const {
        DGCoefficients u(sys_->mesh(), sys_->degree());
        u.coeffs = history_[n];
        return u.norm();
    }

    /// Advance one step (to index n = step_index()+1).
    void step() {
        const int n = step_index() + 1;
        if (n > weights_.max_index())
            throw SolverError("MarchState::step: weight array too short");
        const double lambda = problem_->params.lambda;

        // e^{-lambda n tau} S_n M u^0
        std::vector<double> rhs(history_[0].size(), 0.0);
        const double c0 = std::exp(-lambda * n * tau_) * partial_sums_[n];
        for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = c0 * mass_history_[0][i];

        // - sum_{k=1}^{n-1} d_k M u^{n-k}, pairwise over k for round-off
        if (n >= 2) {
            std::vector<double> hist(rhs.size(), 0.0);
            pairwise_history(1, n - 1, n, hist);
            for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] -= hist[i];
        }

        // + tau^alpha (f(., t_n), v)
        if (problem_->has_forcing()) {
            const double talpha = std::pow(tau_, problem_->params.alpha);
            const double tn = n * tau_;
            const Mesh1D& mesh = sys_->mesh();
            const int b = sys_->block_size();
            std::vector<double> pvals(b);
            for (int j = 0; j < mesh.num_cells; ++j) {
                const double hj2 = 0.5 * mesh.cell_size(j);
                for (int qn = 0; qn < forcing_rule_.size(); ++qn) {
                    const double xi = forcing_rule_.nodes[qn];
                    const double fx = forcing_rule_.weights[qn] *
                                      problem_->forcing(mesh.from_reference(j, xi), tn);
                    legendre_values(xi, b - 1, pvals);
                    for (int m = 0; m < b; ++m)
                        rhs[static_cast<std::size_t>(j) * b + m] += talpha * hj2 * fx * pvals[m];
                }
            }
        }

        std::vector<double> un = step_matrix_.solve(std::move(rhs));
        mass_history_.push_back(sys_->apply_mass(un));
        history_.push_back(std::move(un));
    }

    void run_to(int n_steps) {
        while (step_index() < n_steps) step();
    }

private:
    /// out = sum over k in [lo, hi] of d_k M u^{n-k}, pairwise (tree) order
    /// from oldest to newest to bound round-off over long histories.
    void pairwise_history(int lo, int hi, int n, std::vector<double>& out) const {
        if (hi - lo < 16) {
            std::fill(out.begin(), out.end(), 0.0);
            for (int k = hi; k >= lo; --k) { // k descending = oldest state first
                const double dk = weights_.d[k];
                const std::vector<double>& mu = mass_history_[n - k];
                for (std::size_t i = 0; i < out.size(); ++i) out[i] += dk * mu[i];
            }
            return;
        }
        const int mid = lo + (hi - lo) / 2;
        std::vector<double> right(out.size());
        pairwise_history(lo, mid, n, out);
        pairwise_history(mid + 1, hi, n, right);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += right[i];
    }

    const ProblemSpec* problem_;
    const LDGSystem* sys_;
    double tau_;
    ConvolutionWeights weights_;
    std::vector<double> partial_sums_;
    StepMatrix step_matrix_;
    QuadRule forcing_rule_;
    std::vector<std::vector<double>> history_;      // coefficients u^0..u^n
    std::vector<std::vector<double>> mass_history_; // M u^0..M u^n
};

/// Outcome of a full march: final state, per-step L2 norms, per-step L2
/// errors when an exact solution is known, and any requested snapshots.
struct RunResult {
    DGCoefficients final_state;
    double tau = 0.0;
    int steps = 0;
    std::vector<double> step_norms;
    std::vector<double> step_errors; // empty when no exact solution
    std::vector<std::pair<int, DGCoefficients>> snapshots;
    double final_error = -1.0; // L2 at T, -1 when no exact solution
};

struct RunOptions {
    InitialProjection initial_projection = InitialProjection::l2;
    bool record_step_errors = false;
    std::vector<int> snapshot_steps;
};

/// Run the fully discrete scheme for M steps of size tau = T/M.
/// Errors are measured against the exact solution with a (k+5)-node rule.
inline RunResult run(const ProblemSpec& problem, const LDGSystem& sys, int q, int M,
                     const RunOptions& opts = {}) {
    MarchState state(problem, sys, q, M, opts.initial_projection);
    const QuadRule err_rule = gauss_rule(sys.degree() + 5);
    RunResult out;
    out.tau = state.tau();
    out.steps = M;
    out.step_norms.reserve(M + 1);
    auto record = [&](int n) {
        out.step_norms.push_back(state.norm(n));
        if (problem.has_exact() && opts.record_step_errors) {
            const double t = n * state.tau();
            out.step_errors.push_back(
                l2_error(state.state(n), [&](double x) { return problem.exact(x, t); },
                         err_rule));
        }
        for (int snap : opts.snapshot_steps)
            if (snap == n) out.snapshots.emplace_back(n, state.state(n));
    };
    record(0);
    for (int n = 1; n <= M; ++n) {
        state.step();
        record(n);
    }
    out.final_state = state.current();
    if (problem.has_exact()) {
        const double T = M * state.tau();
        out.final_error = l2_error(out.final_state,
                                   [&](double x) { return problem.exact(x, T); }, err_rule);
        if (opts.record_step_errors && !out.step_errors.empty())
            out.step_errors.back() = out.final_error;
    }
    return out;
}

/// Per-step record of the discrete analogue of the continuous energy
/// estimate: lhs = ||u^n||^2 + 2 kappa I^{alpha,2lambda}(||p||^2)(t_n)
/// against rhs = e^{-2 lambda t_n} ||u^0||^2. Reported, not asserted: the
/// continuous estimate is not a theorem for the discrete solution.
struct EnergyRecord {
    int n;
    double t;
    double lhs;
    double rhs;
    double margin; // rhs - lhs
};

inline std::vector<EnergyRecord> monitor_energy(const MarchState& state) {
    const TemperedParams& prm = state.problem().params;
    const int n_max = state.step_index();
    // sampled squared gradient norms ||p(t_i)||^2
    std::vector<double> g(n_max + 1);
    for (int i = 0; i <= n_max; ++i) {
        DGCoefficients p = state.system().gradient(state.state(i));
        g[i] = p.norm_sq();
    }
    const double tau = state.tau();
    auto g_interp = [&](double s) {
        // piecewise-linear interpolant of the sampled history
        const double r = s / tau;
        int i = static_cast<int>(r);
        if (i >= n_max) return g[n_max];
        if (i < 0) return g[0];
        const double w = r - i;
        return (1.0 - w) * g[i] + w * g[i + 1];
    };
    const double u0_sq = state.norm(0) * state.norm(0);
    std::vector<EnergyRecord> records;
    records.reserve(n_max + 1);
    for (int n = 0; n <= n_max; ++n) {
        const double t = n * tau;
        double integral = 0.0;
        if (n > 0)
            integral = tempered_rl_integral(g_interp, prm.alpha, 2.0 * prm.lambda, t, 1e-7);
        const double lhs = state.norm(n) * state.norm(n) + 2.0 * prm.kappa * integral;
        const double rhs = std::exp(-2.0 * prm.lambda * t) * u0_sq;
        records.push_back({n, t, lhs, rhs, rhs - lhs});
    }
    return records;
}

} // namespace tfdiff
