#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <functional>
#include <optional>
#include <ostream>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "tfdiff/config.hpp"
#include "tfdiff/report.hpp"
#include "tfdiff/time_march.hpp"

namespace tfdiff {

inline constexpr const char* version_string = "1.0.0";

namespace detail {

/// Run work(0..n-1) on up to `threads` workers; callers index into
/// preallocated result slots, so collection order is declaration order.
inline void parallel_for_ordered(int n, int threads, const std::function<void(int)>& work) {
    threads = std::max(1, std::min(threads, n));
    if (threads == 1) {
        for (int i = 0; i < n; ++i) work(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
                try {
                    work(i);
                } catch (...) {
                    std::scoped_lock lock(error_mu);
                    if (!error) error = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

inline std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace detail

/// Shared study configuration: the problem, discretization orders, and
/// bookkeeping fields baked into report metadata.
struct StudySetup {
    ProblemSpec problem;
    int k = 1;
    int q = 1;
    InitialProjection initial_projection = InitialProjection::l2;
    int threads = 1;
    std::string timestamp; // empty -> current UTC time
    double beta = std::nan(""); // manufactured-solution exponent, if any
};

namespace detail {

inline void fill_metadata(ConvergenceReport& report, const StudySetup& setup,
                          const std::string& study) {
    const ProblemSpec& p = setup.problem;
    report.set_meta("study", study);
    report.set_meta("problem", p.label);
    report.set_meta("alpha", format_g17(p.params.alpha));
    report.set_meta("lambda", format_g17(p.params.lambda));
    report.set_meta("kappa", format_g17(p.params.kappa));
    if (!std::isnan(setup.beta)) report.set_meta("beta", format_g17(setup.beta));
    report.set_meta("k", std::to_string(setup.k));
    report.set_meta("q", std::to_string(setup.q));
    report.set_meta("T", format_g17(p.T));
    report.set_meta("bc", p.bc == BoundaryCondition::periodic ? "periodic" : "dirichlet");
    report.set_meta("initial_projection",
                    setup.initial_projection == InitialProjection::l2 ? "l2" : "pminus");
    report.set_meta("version", version_string);
    report.set_meta("timestamp",
                    setup.timestamp.empty() ? utc_timestamp() : setup.timestamp);
}

} // namespace detail

/// One row of a convergence study: one full march on N cells.
inline double study_row_error(const StudySetup& setup, int N, int M) {
    const Mesh1D mesh = build_mesh(setup.problem.x_left, setup.problem.x_right, N);
    const LDGSystem sys(mesh, setup.k, setup.problem.bc);
    RunOptions opts;
    opts.initial_projection = setup.initial_projection;
    const RunResult result = run(setup.problem, sys, setup.q, M, opts);
    return result.final_error;
}

/// Spatial study: tau is coupled to the mesh through tau = h^r
/// (M = ceil(T / h^r)), one solve per mesh, EOC against h.
inline ConvergenceReport run_spatial_study(const StudySetup& setup,
                                           const std::vector<int>& cell_counts,
                                           double coupling_r) {
    if (!setup.problem.has_exact())
        throw ConfigError("spatial study: problem has no exact solution");
    const int n = static_cast<int>(cell_counts.size());
    std::vector<double> errors(n), taus(n), hs(n);
    detail::parallel_for_ordered(n, setup.threads, [&](int i) {
        const int N = cell_counts[i];
        const double h = (setup.problem.x_right - setup.problem.x_left) / N;
        const int M = std::max(1, static_cast<int>(std::ceil(setup.problem.T / std::pow(h, coupling_r))));
        try {
            errors[i] = study_row_error(setup, N, M);
        } catch (const std::exception& e) {
            throw SolverError("spatial study row N=" + std::to_string(N) + ": " + e.what());
        }
        hs[i] = h;
        taus[i] = setup.problem.T / M;
    });
    ConvergenceReport report;
    detail::fill_metadata(report, setup, "spatial");
    report.set_meta("coupling_r", format_g17(coupling_r));
    for (int i = 0; i < n; ++i) report.add_row(hs[i], taus[i], errors[i], /*temporal=*/false);
    return report;
}

/// Temporal study: fixed fine mesh, halving tau sequence, EOC against tau.
inline ConvergenceReport run_temporal_study(const StudySetup& setup, int cells_fixed,
                                            const std::vector<double>& taus) {
    if (!setup.problem.has_exact())
        throw ConfigError("temporal study: problem has no exact solution");
    const int n = static_cast<int>(taus.size());
    std::vector<double> errors(n), actual_tau(n);
    const double h = (setup.problem.x_right - setup.problem.x_left) / cells_fixed;
    detail::parallel_for_ordered(n, setup.threads, [&](int i) {
        const int M = std::max(1, static_cast<int>(std::lround(setup.problem.T / taus[i])));
        try {
            errors[i] = study_row_error(setup, cells_fixed, M);
        } catch (const std::exception& e) {
            throw SolverError("temporal study row tau=" + format_g17(taus[i]) + ": " + e.what());
        }
        actual_tau[i] = setup.problem.T / M;
    });
    ConvergenceReport report;
    detail::fill_metadata(report, setup, "temporal");
    report.set_meta("N", std::to_string(cells_fixed));
    for (int i = 0; i < n; ++i) report.add_row(h, actual_tau[i], errors[i], /*temporal=*/true);
    return report;
}

/// One stability run: march the homogeneous problem and record the norm
/// history and the worst ||u^n||/||u^0|| ratio.
struct StabilityRun {
    double alpha;
    double lambda;
    std::string tau_spec;
    double tau;
    int steps;
    bool pass;
    double max_ratio;
    std::vector<double> norms;
};

struct StabilityResult {
    std::vector<StabilityRun> runs;
    bool all_pass = true;
};

/// Theorem-style check ||u^n|| <= ||u^0|| (1 + 1e-10) over a parameter
/// grid. The problem factory builds the homogeneous benchmark for each
/// (alpha, lambda); tau specs are expressions in the mesh size h.
inline StabilityResult run_stability_sweep(
    const std::function<ProblemSpec(double, double)>& problem_factory, int N, int k, int q,
    const std::vector<double>& alphas, const std::vector<double>& lambdas,
    const std::vector<std::string>& tau_specs, int threads = 1,
    InitialProjection init = InitialProjection::l2) {
    struct Case {
        double alpha, lambda;
        std::string spec;
    };
    std::vector<Case> cases;
    for (double a : alphas)
        for (double l : lambdas)
            for (const std::string& s : tau_specs) cases.push_back({a, l, s});
    StabilityResult result;
    result.runs.resize(cases.size());
    detail::parallel_for_ordered(static_cast<int>(cases.size()), threads, [&](int i) {
        const Case& c = cases[i];
        const ProblemSpec problem = problem_factory(c.alpha, c.lambda);
        if (problem.has_forcing())
            throw ConfigError("stability sweep requires a homogeneous problem");
        const double h = (problem.x_right - problem.x_left) / N;
        const double tau_req = parse_tau_spec(c.spec, h);
        const int M = std::max(1, static_cast<int>(std::lround(problem.T / tau_req)));
        const Mesh1D mesh = build_mesh(problem.x_left, problem.x_right, N);
        const LDGSystem sys(mesh, k, problem.bc);
        RunOptions opts;
        opts.initial_projection = init;
        const RunResult r = run(problem, sys, q, M, opts);
        StabilityRun& out = result.runs[i];
        out = {c.alpha, c.lambda, c.spec, problem.T / M, M, true, 0.0, r.step_norms};
        const double n0 = r.step_norms.front();
        for (double nn : r.step_norms) {
            const double ratio = (n0 == 0.0) ? (nn == 0.0 ? 0.0 : HUGE_VAL) : nn / n0;
            out.max_ratio = std::max(out.max_ratio, ratio);
        }
        out.pass = out.max_ratio <= 1.0 + 1e-10;
    });
    for (const StabilityRun& r : result.runs) result.all_pass = result.all_pass && r.pass;
    return result;
}

/// Norm-vs-time CSV for a stability sweep: one `alpha,lambda,tau,t,norm`
/// row per recorded step.
inline void write_stability_csv(std::ostream& os, const StabilityResult& result) {
    os << "alpha,lambda,tau,t,norm\n";
    for (const StabilityRun& run : result.runs)
        for (std::size_t n = 0; n < run.norms.size(); ++n)
            os << format_g17(run.alpha) << "," << format_g17(run.lambda) << ","
               << format_g17(run.tau) << "," << format_g17(static_cast<double>(n) * run.tau)
               << "," << format_g17(run.norms[n]) << "\n";
}

/// Solution profiles at the requested times (each mapped to the nearest
/// step of the uniform time grid), sampled at 10(k+1) points per cell.
struct ProfileData {
    std::vector<double> times;                 // actual snapshot times
    std::vector<std::vector<double>> x;        // per time, sorted
    std::vector<std::vector<double>> u;
    std::vector<std::pair<std::string, std::string>> metadata;
};

inline ProfileData run_profile(const StudySetup& setup, int N, int M,
                               const std::vector<double>& sample_times) {
    const ProblemSpec& problem = setup.problem;
    const double tau = problem.T / M;
    std::vector<int> snapshot_steps;
    for (double t : sample_times) {
        if (t < 0.0 || t > problem.T + 1e-12 * problem.T)
            throw ConfigError("profile: sample time " + format_g17(t) + " beyond final time");
        snapshot_steps.push_back(static_cast<int>(std::lround(t / tau)));
    }
    const Mesh1D mesh = build_mesh(problem.x_left, problem.x_right, N);
    const LDGSystem sys(mesh, setup.k, problem.bc);
    RunOptions opts;
    opts.initial_projection = setup.initial_projection;
    int max_step = 0;
    for (int s : snapshot_steps) max_step = std::max(max_step, s);
    opts.snapshot_steps = snapshot_steps;
    const RunResult result = run(problem, sys, setup.q, std::max(max_step, M), opts);

    ProfileData data;
    const int per_cell = 10 * (setup.k + 1);
    for (std::size_t i = 0; i < snapshot_steps.size(); ++i) {
        const DGCoefficients* state = nullptr;
        for (const auto& [step, snap] : result.snapshots)
            if (step == snapshot_steps[i]) state = &snap;
        if (!state) throw SolverError("profile: snapshot step missing");
        data.times.push_back(snapshot_steps[i] * tau);
        std::vector<double> xs, us;
        xs.reserve(static_cast<std::size_t>(N) * per_cell);
        us.reserve(static_cast<std::size_t>(N) * per_cell);
        for (int j = 0; j < N; ++j)
            for (int s = 0; s < per_cell; ++s) {
                const double xi = -1.0 + (2.0 * s + 1.0) / per_cell;
                xs.push_back(mesh.from_reference(j, xi));
                us.push_back(state->eval_in_cell(j, xi));
            }
        data.x.push_back(std::move(xs));
        data.u.push_back(std::move(us));
    }
    ConvergenceReport meta_only;
    detail::fill_metadata(meta_only, setup, "profile");
    meta_only.set_meta("N", std::to_string(N));
    meta_only.set_meta("M", std::to_string(std::max(max_step, M)));
    data.metadata = meta_only.metadata;
    return data;
}

/// Profile CSV schema: metadata block, then `t,x,u` rows grouped by t and
/// sorted by x within each group.
inline void write_profile_csv(std::ostream& os, const ProfileData& data) {
    for (const auto& [k, v] : data.metadata) os << "# " << k << "=" << v << "\n";
    os << "t,x,u\n";
    for (std::size_t i = 0; i < data.times.size(); ++i)
        for (std::size_t s = 0; s < data.x[i].size(); ++s)
            os << format_g17(data.times[i]) << "," << format_g17(data.x[i][s]) << ","
               << format_g17(data.u[i][s]) << "\n";
}

} // namespace tfdiff
