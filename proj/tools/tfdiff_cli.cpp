// Command-line front end: single solves, convergence studies, stability
// sweeps, solution profiles, and direct access to the convolution weights
// and the Mittag-Leffler function.
//
// Exit codes: 0 success, 1 configuration error, 2 solver failure,
// 3 stability-check violation.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tfdiff/tfdiff.hpp"

namespace {

using namespace tfdiff;

struct CliState {
    std::string config_path;
    std::string out_path;
    int threads = 1;
    std::vector<std::string> overrides;
};

Config load_config(const CliState& cli) {
    Config cfg;
    if (!cli.config_path.empty()) cfg = Config::from_file(cli.config_path);
    for (const std::string& kv : cli.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw ConfigError("--set expects key=value, got '" + kv + "'");
        cfg.set(Config::trim(kv.substr(0, eq)), Config::trim(kv.substr(eq + 1)));
    }
    return cfg;
}

std::ostream& open_output(const CliState& cli, std::unique_ptr<std::ofstream>& holder) {
    if (cli.out_path.empty()) return std::cout;
    holder = std::make_unique<std::ofstream>(cli.out_path);
    if (!*holder) throw ConfigError("cannot open output file: " + cli.out_path);
    return *holder;
}

ProblemSpec build_problem(const Config& cfg, double alpha, double lambda) {
    const std::string name = cfg.get("problem.name", "example1");
    ProblemSpec p = [&] {
        if (name == "example1")
            return example1(alpha, lambda, cfg.get_double("problem.kappa", 1.0),
                            cfg.get_double("problem.beta", 4.0));
        if (name == "example2") return example2(alpha, lambda);
        if (name == "example3")
            return example3(alpha, lambda, cfg.get_double("problem.sigma", 0.01));
        throw ConfigError("unknown problem name: " + name);
    }();
    if (cfg.has("problem.T")) p.T = cfg.require_double("problem.T");
    return p;
}

ProblemSpec build_problem(const Config& cfg) {
    return build_problem(cfg, cfg.get_double("problem.alpha", 0.5),
                         cfg.get_double("problem.lambda", 0.0));
}

StudySetup build_setup(const Config& cfg, const CliState& cli) {
    StudySetup setup;
    setup.problem = build_problem(cfg);
    if (cfg.get("problem.name", "example1") == "example1")
        setup.beta = cfg.get_double("problem.beta", 4.0);
    setup.k = cfg.get_int("discretization.k", 1);
    setup.q = cfg.get_int("discretization.q", 1);
    setup.threads = cli.threads;
    setup.timestamp = cfg.get("output.timestamp");
    const std::string proj = cfg.get("discretization.initial_projection", "l2");
    if (proj == "l2") setup.initial_projection = InitialProjection::l2;
    else if (proj == "pminus") setup.initial_projection = InitialProjection::p_minus;
    else throw ConfigError("initial_projection must be l2 or pminus");
    return setup;
}

int step_count(const Config& cfg, const ProblemSpec& p, int N) {
    if (cfg.has("discretization.M")) return cfg.get_int("discretization.M", 1);
    const double h = (p.x_right - p.x_left) / N;
    const std::string spec = cfg.get("discretization.tau", "h");
    const double tau = parse_tau_spec(spec, h);
    return std::max(1, static_cast<int>(std::lround(p.T / tau)));
}

int cmd_weights(const CliState& cli, int q, double alpha, double lambda, double tau, int n) {
    const ConvolutionWeights w = tempered_weights(q, TemperedParams(alpha, lambda), tau, n);
    std::unique_ptr<std::ofstream> file;
    std::ostream& os = open_output(cli, file);
    os << "k,l,d\n";
    for (int k = 0; k <= n; ++k)
        os << k << "," << format_g17(w.l[k]) << "," << format_g17(w.d[k]) << "\n";
    return 0;
}

int cmd_ml(const CliState& cli, double beta, double z) {
    std::unique_ptr<std::ofstream> file;
    std::ostream& os = open_output(cli, file);
    os << format_g17(mittag_leffler(beta, z)) << "\n";
    return 0;
}

int cmd_solve(const CliState& cli, bool energy) {
    const Config cfg = load_config(cli);
    const StudySetup setup = build_setup(cfg, cli);
    const ProblemSpec& p = setup.problem;
    const int N = cfg.get_int("discretization.N", 20);
    const int M = step_count(cfg, p, N);
    const Mesh1D mesh = build_mesh(p.x_left, p.x_right, N);
    const LDGSystem sys(mesh, setup.k, p.bc);
    MarchState state(p, sys, setup.q, M, setup.initial_projection);
    state.run_to(M);
    std::cout << "problem=" << p.label << " N=" << N << " k=" << setup.k << " q=" << setup.q
              << " M=" << M << " tau=" << format_g17(state.tau()) << "\n";
    std::cout << "norm0=" << format_g17(state.norm(0))
              << " normT=" << format_g17(state.norm(M)) << "\n";
    if (p.has_exact()) {
        const double err = l2_error(state.current(),
                                    [&](double x) { return p.exact(x, p.T); },
                                    gauss_rule(setup.k + 5));
        std::cout << "l2_error_at_T=" << format_g17(err) << "\n";
    }
    if (!cli.out_path.empty()) {
        // final-state profile
        ProfileData data;
        ConvergenceReport meta;
        detail::fill_metadata(meta, setup, "solve");
        meta.set_meta("N", std::to_string(N));
        meta.set_meta("M", std::to_string(M));
        data.metadata = meta.metadata;
        data.times.push_back(p.T);
        const int per_cell = 10 * (setup.k + 1);
        std::vector<double> xs, us;
        for (int j = 0; j < N; ++j)
            for (int s = 0; s < per_cell; ++s) {
                const double xi = -1.0 + (2.0 * s + 1.0) / per_cell;
                xs.push_back(mesh.from_reference(j, xi));
                us.push_back(state.current().eval_in_cell(j, xi));
            }
        data.x.push_back(std::move(xs));
        data.u.push_back(std::move(us));
        std::unique_ptr<std::ofstream> file;
        write_profile_csv(open_output(cli, file), data);
    }
    if (energy) {
        std::cout << "n,t,lhs,rhs,margin\n";
        for (const EnergyRecord& rec : monitor_energy(state))
            std::cout << rec.n << "," << format_g17(rec.t) << "," << format_g17(rec.lhs) << ","
                      << format_g17(rec.rhs) << "," << format_g17(rec.margin) << "\n";
    }
    return 0;
}

int cmd_converge_space(const CliState& cli) {
    const Config cfg = load_config(cli);
    const StudySetup setup = build_setup(cfg, cli);
    std::vector<int> cells = cfg.get_int_list("space_study.N_list");
    if (cells.empty()) cells = {10, 20, 40, 80};
    const double r = cfg.get_double("space_study.r", static_cast<double>(setup.k + 1) / setup.q);
    const ConvergenceReport report = run_spatial_study(setup, cells, r);
    std::unique_ptr<std::ofstream> file;
    write_report_csv(open_output(cli, file), report);
    return 0;
}

int cmd_converge_time(const CliState& cli) {
    const Config cfg = load_config(cli);
    const StudySetup setup = build_setup(cfg, cli);
    const int N = cfg.get_int("time_study.N", 100);
    std::vector<double> taus = cfg.get_double_list("time_study.tau_list");
    if (taus.empty()) taus = {0.2, 0.1, 0.05, 0.025};
    const ConvergenceReport report = run_temporal_study(setup, N, taus);
    std::unique_ptr<std::ofstream> file;
    write_report_csv(open_output(cli, file), report);
    return 0;
}

int cmd_stability(const CliState& cli) {
    const Config cfg = load_config(cli);
    const int N = cfg.get_int("stability.N", 40);
    const int k = cfg.get_int("discretization.k", 1);
    const int q = cfg.get_int("discretization.q", 1);
    std::vector<double> alphas = cfg.has("stability.alpha_list")
                                     ? cfg.get_double_list("stability.alpha_list")
                                     : std::vector<double>{0.1, 0.5, 0.9};
    std::vector<double> lambdas = cfg.has("stability.lambda_list")
                                      ? cfg.get_double_list("stability.lambda_list")
                                      : std::vector<double>{0.0, 1.0, 5.0};
    std::vector<std::string> taus = cfg.has("stability.tau_list")
                                        ? cfg.get_list("stability.tau_list")
                                        : std::vector<std::string>{"h^2", "h", "10h"};
    auto factory = [&](double a, double l) { return build_problem(cfg, a, l); };
    const StabilityResult result =
        run_stability_sweep(factory, N, k, q, alphas, lambdas, taus, cli.threads);
    for (const StabilityRun& run : result.runs)
        std::cout << (run.pass ? "PASS" : "FAIL") << " alpha=" << run.alpha
                  << " lambda=" << run.lambda << " tau=" << run.tau_spec
                  << " max_ratio=" << format_g17(run.max_ratio) << "\n";
    if (!cli.out_path.empty()) {
        std::unique_ptr<std::ofstream> file;
        write_stability_csv(open_output(cli, file), result);
    }
    return result.all_pass ? 0 : 3;
}

int cmd_profile(const CliState& cli) {
    const Config cfg = load_config(cli);
    const StudySetup setup = build_setup(cfg, cli);
    const int N = cfg.get_int("discretization.N", 40);
    const int M = step_count(cfg, setup.problem, N);
    std::vector<double> times = cfg.get_double_list("profile.times");
    if (times.empty()) times = {setup.problem.T};
    const ProfileData data = run_profile(setup, N, M, times);
    std::unique_ptr<std::ofstream> file;
    write_profile_csv(open_output(cli, file), data);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"LDG solver for the 1D time-tempered fractional diffusion equation"};
    app.require_subcommand(1);
    app.fallthrough();
    CliState cli;
    app.add_option("--config", cli.config_path, "configuration file (INI-style)");
    app.add_option("--out", cli.out_path, "output CSV path (default: stdout)");
    app.add_option("--threads", cli.threads, "worker threads for study rows")
        ->check(CLI::PositiveNumber);
    app.add_option("--set", cli.overrides, "override a config key, e.g. --set problem.alpha=0.3")
        ->type_size(1);

    int w_q = 1, w_n = 10;
    double w_alpha = 0.5, w_lambda = 0.0, w_tau = 0.1;
    auto* weights_cmd = app.add_subcommand("weights", "print convolution weights l_k and d_k");
    weights_cmd->add_option("q", w_q, "approximation order (1..5)")->required();
    weights_cmd->add_option("alpha", w_alpha, "fractional order in (0,1)")->required();
    weights_cmd->add_option("lambda", w_lambda, "tempering rate >= 0")->required();
    weights_cmd->add_option("tau", w_tau, "time step > 0")->required();
    weights_cmd->add_option("n", w_n, "largest weight index")->required();

    double ml_beta = 0.5, ml_z = 0.0;
    auto* ml_cmd = app.add_subcommand("ml", "evaluate the Mittag-Leffler function E_beta(z)");
    ml_cmd->add_option("beta", ml_beta, "order in (0,1]")->required();
    ml_cmd->add_option("z", ml_z, "argument")->required();

    bool solve_energy = false;
    auto* solve_cmd = app.add_subcommand("solve", "run one fully discrete solve");
    solve_cmd->add_flag("--energy", solve_energy, "print the energy-estimate diagnostic");

    auto* space_cmd = app.add_subcommand("converge-space", "spatial convergence study");
    auto* time_cmd = app.add_subcommand("converge-time", "temporal convergence study");
    auto* stab_cmd = app.add_subcommand("stability", "norm-monotonicity sweep");
    auto* prof_cmd = app.add_subcommand("profile", "solution profiles at sample times");

    try {
        app.parse(argc, argv);
        if (weights_cmd->parsed()) return cmd_weights(cli, w_q, w_alpha, w_lambda, w_tau, w_n);
        if (ml_cmd->parsed()) return cmd_ml(cli, ml_beta, ml_z);
        if (solve_cmd->parsed()) return cmd_solve(cli, solve_energy);
        if (space_cmd->parsed()) return cmd_converge_space(cli);
        if (time_cmd->parsed()) return cmd_converge_time(cli);
        if (stab_cmd->parsed()) return cmd_stability(cli);
        if (prof_cmd->parsed()) return cmd_profile(cli);
        return 1;
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    } catch (const tfdiff::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    } catch (const tfdiff::AccuracyError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return 2;
    }
}
