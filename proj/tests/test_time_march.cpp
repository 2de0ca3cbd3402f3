#include "doctest.h"

#include <cmath>

#include "support/oracles.hpp"
#include "tfdiff/time_march.hpp"

using namespace tfdiff;

TEST_CASE("march: zero data and zero forcing stay zero") {
    auto p = example2(0.5, 1.0);
    p.initial = [](double) { return 0.0; };
    p.exact = nullptr;
    LDGSystem sys(build_mesh(0.0, 1.0, 8), 1, p.bc);
    const auto r = run(p, sys, 1, 20);
    for (double n : r.step_norms) CHECK(n == 0.0);
}

TEST_CASE("march: zero steps returns the projected initial condition") {
    const auto p = example2(0.5, 1.0);
    const auto mesh = build_mesh(0.0, 1.0, 12);
    LDGSystem sys(mesh, 2, p.bc);
    const auto r = run(p, sys, 1, 0);
    const auto u0 = l2_project(p.initial, mesh, 2);
    REQUIRE(r.final_state.coeffs.size() == u0.coeffs.size());
    for (std::size_t i = 0; i < u0.coeffs.size(); ++i)
        CHECK(r.final_state.coeffs[i] == u0.coeffs[i]);
}

TEST_CASE("march: norms never exceed the initial norm (q = 1, homogeneous)") {
    for (double alpha : {0.2, 0.5, 0.8}) {
        for (double lambda : {0.0, 2.0}) {
            const auto p = example2(alpha, lambda);
            LDGSystem sys(build_mesh(0.0, 1.0, 16), 1, p.bc);
            const auto r = run(p, sys, 1, 60);
            const double n0 = r.step_norms.front();
            for (double nn : r.step_norms) REQUIRE(nn <= n0 * (1.0 + 1e-10));
        }
    }
}

TEST_CASE("march: single step error against a tau/16 reference run") {
    // one step at tau = 1e-3, k=2, h=1/40; the fine run estimates the
    // constant in C (tau + h^3)
    auto p = example1(0.5, 0.8, 1.0, 4.0);
    p.T = 1e-3;
    const auto mesh = build_mesh(0.0, 1.0, 40);
    LDGSystem sys(mesh, 2, p.bc);
    const double h3 = std::pow(1.0 / 40.0, 3);
    const auto coarse = run(p, sys, 1, 1);
    const auto fine = run(p, sys, 1, 16);
    const double c_est = fine.final_error / (1e-3 / 16.0 + h3);
    CHECK(coarse.final_error <= 3.0 * c_est * (1e-3 + h3));
}

TEST_CASE("march: lambda = 0 agrees with an independent plain-fractional stepper") {
    for (bool with_forcing : {false, true}) {
        ProblemSpec p = with_forcing ? example1(0.5, 0.0, 1.0, 4.0) : example2(0.5, 0.0);
        const int N = 10, k = 2, M = 25;
        const auto mesh = build_mesh(p.x_left, p.x_right, N);
        LDGSystem sys(mesh, k, p.bc);
        const auto r = run(p, sys, 1, M);
        const auto u0 = l2_project(p.initial, mesh, k);
        const auto indep = oracles::plain_fractional_march(p, sys, M, u0);
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < indep.size(); ++i) {
            num += (indep[i] - r.final_state.coeffs[i]) * (indep[i] - r.final_state.coeffs[i]);
            den += indep[i] * indep[i];
        }
        CHECK(std::sqrt(num / den) <= 1e-12);
    }
}

TEST_CASE("march: identical configurations give bitwise-identical results") {
    const auto p = example1(0.4, 1.1, 1.0, 4.0);
    LDGSystem sys(build_mesh(0.0, 1.0, 12), 2, p.bc);
    const auto a = run(p, sys, 2, 30);
    const auto b = run(p, sys, 2, 30);
    REQUIRE(a.final_state.coeffs.size() == b.final_state.coeffs.size());
    for (std::size_t i = 0; i < a.final_state.coeffs.size(); ++i)
        REQUIRE(a.final_state.coeffs[i] == b.final_state.coeffs[i]);
    for (std::size_t i = 0; i < a.step_norms.size(); ++i)
        REQUIRE(a.step_norms[i] == b.step_norms[i]);
}

TEST_CASE("march: weight array shorter than the requested step count throws") {
    const auto p = example2(0.5, 1.0);
    LDGSystem sys(build_mesh(0.0, 1.0, 6), 1, p.bc);
    MarchState state(p, sys, 1, 5);
    state.run_to(5);
    CHECK_THROWS_AS(state.step(), SolverError);
}

TEST_CASE("energy monitor: diagnostic records") {
    SUBCASE("zero solution gives zero on both sides") {
        auto p = example2(0.5, 0.0);
        p.initial = [](double) { return 0.0; };
        p.exact = nullptr;
        LDGSystem sys(build_mesh(0.0, 1.0, 8), 1, p.bc);
        MarchState state(p, sys, 1, 10);
        state.run_to(10);
        for (const auto& rec : monitor_energy(state)) {
            CHECK(rec.lhs == 0.0);
            CHECK(rec.rhs == 0.0);
        }
    }
    SUBCASE("single tiny step: integral term ~ 0, |u1| <= e^{-lambda tau} |u0|") {
        auto p = example2(0.5, 2.0);
        p.T = 1e-8; // one step of tau = 1e-8 keeps the tau^alpha term negligible
        LDGSystem sys(build_mesh(0.0, 1.0, 16), 1, p.bc);
        MarchState state(p, sys, 1, 1);
        state.step();
        const auto recs = monitor_energy(state);
        REQUIRE(recs.size() == 2);
        const double u0sq = recs[0].lhs;
        CHECK(recs[1].lhs - state.norm(1) * state.norm(1) <= 0.01 * u0sq); // integral ~ 0
        CHECK(state.norm(1) <= std::exp(-2.0 * state.tau()) * state.norm(0) * (1.0 + 1e-6));
    }
    SUBCASE("example 2 margins are reported, not asserted") {
        // The continuous estimate is not a theorem for the discrete
        // solution, and the piecewise-linear interpolant of the sampled
        // gradient history overestimates the early integral; the monitor
        // only reports the margins.
        const auto p = example2(0.5, 2.0);
        LDGSystem sys(build_mesh(0.0, 1.0, 16), 1, p.bc);
        MarchState state(p, sys, 1, 40);
        state.run_to(40);
        const auto recs = monitor_energy(state);
        REQUIRE(recs.size() == 41);
        int nonneg = 0;
        for (const auto& rec : recs) {
            REQUIRE(std::isfinite(rec.lhs));
            REQUIRE(rec.rhs ==
                    doctest::Approx(std::exp(-4.0 * rec.t) * recs[0].rhs).epsilon(1e-12));
            nonneg += rec.margin >= 0.0 ? 1 : 0;
        }
        MESSAGE("energy margins nonnegative at ", nonneg, " of ", recs.size(), " steps");
    }
}

TEST_CASE("march: per-step error recording") {
    const auto p = example1(0.5, 0.8, 1.0, 4.0);
    LDGSystem sys(build_mesh(0.0, 1.0, 10), 1, p.bc);
    RunOptions opts;
    opts.record_step_errors = true;
    const auto r = run(p, sys, 1, 8, opts);
    REQUIRE(r.step_errors.size() == 9);
    CHECK(r.step_errors.back() == r.final_error);
    for (double e : r.step_errors) CHECK(e >= 0.0);
}

TEST_CASE("march: p-minus initial projection is honoured") {
    const auto p = example2(0.5, 1.0);
    const auto mesh = build_mesh(0.0, 1.0, 9);
    LDGSystem sys(mesh, 2, p.bc);
    RunOptions opts;
    opts.initial_projection = InitialProjection::p_minus;
    const auto r = run(p, sys, 1, 0, opts);
    const auto want = project_minus(p.initial, mesh, 2);
    for (std::size_t i = 0; i < want.coeffs.size(); ++i)
        CHECK(r.final_state.coeffs[i] == want.coeffs[i]);
}

TEST_CASE("march: discrete tempering equivariance") {
    // Substituting v = e^{lambda t} u maps the tempered march onto the
    // plain fractional one; the tempered weights realize this exactly, so
    // u_lambda^n = e^{-lambda n tau} u_0^n up to round-off. This pins the
    // d_k = e^{-lambda k tau} l_k plumbing end to end.
    const double lambda = 2.3;
    const auto p_tempered = example1(0.5, lambda, 1.0, 4.0);
    const auto p_plain = example1(0.5, 0.0, 1.0, 4.0);
    ProblemSpec p_plain_scaled = p_plain;
    // forcing of the lambda-problem equals e^{-lambda t} times the plain one
    const int N = 12, k = 2, M = 30;
    const auto mesh = build_mesh(0.0, 1.0, N);
    LDGSystem sys(mesh, k, p_tempered.bc);
    MarchState tempered(p_tempered, sys, 1, M);
    MarchState plain(p_plain_scaled, sys, 1, M);
    tempered.run_to(M);
    plain.run_to(M);
    const double tau = tempered.tau();
    for (int n : {1, 10, 30}) {
        const double factor = std::exp(-lambda * n * tau);
        const auto& ut = tempered.coeffs(n);
        const auto& up = plain.coeffs(n);
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < ut.size(); ++i) {
            num += (ut[i] - factor * up[i]) * (ut[i] - factor * up[i]);
            den += up[i] * up[i] * factor * factor;
        }
        REQUIRE(std::sqrt(num / den) <= 1e-12);
    }
}

TEST_CASE("march: q = 5 smoke run") {
    // beta = 5 keeps the solution smooth enough for the fifth-order weights
    const auto p = example1(0.5, 0.8, 1.0, 5.0);
    LDGSystem sys(build_mesh(0.0, 1.0, 30), 2, p.bc);
    const auto r = run(p, sys, 5, 16);
    CHECK(std::isfinite(r.final_error));
    CHECK(r.final_error < 1e-3);
}
