#include "doctest.h"

#include <cmath>

#include "support/oracles.hpp"
#include "tfdiff/tempered_integral.hpp"
#include "tfdiff/weights.hpp"

using namespace tfdiff;

TEST_CASE("tempered integral: constant integrand closed form") {
    // I^{sigma,0}[1](t) = t^sigma / Gamma(sigma+1)
    const double got = tempered_rl_integral([](double) { return 1.0; }, 0.5, 0.0, 1.0);
    CHECK(got == doctest::Approx(1.0 / std::tgamma(1.5)).epsilon(1e-9));
}

TEST_CASE("tempered integral: tempering combines with a decaying integrand") {
    // f(s) = e^{-lambda s}: kernel and integrand merge to e^{-lambda t} t^sigma/Gamma(sigma+1)
    const double lambda = 2.0;
    const double got =
        tempered_rl_integral([&](double s) { return std::exp(-lambda * s); }, 0.5, lambda, 1.0);
    CHECK(got == doctest::Approx(std::exp(-2.0) / std::tgamma(1.5)).epsilon(1e-9));
}

TEST_CASE("tempered integral: linear integrand against the frozen oracle value") {
    // sigma=0.3, lambda=1, t=0.7; frozen from the graded fixed-quadrature
    // oracle, which agrees bitwise with the incomplete-gamma closed form
    const double frozen = 4.958953757596433e-01;
    const double sigma = 0.3, lambda = 1.0, t = 0.7;
    auto Fd = [&](double d) {
        return std::exp(-lambda * d) * std::pow(d, sigma - 1.0) * (t - d) / std::tgamma(sigma);
    };
    CHECK(oracles::graded_endpoint_singular(Fd, t) == doctest::Approx(frozen).epsilon(1e-13));
    const double g1 = oracles::lower_incomplete_gamma(sigma, lambda * t);
    const double g2 = oracles::lower_incomplete_gamma(sigma + 1.0, lambda * t);
    CHECK((t * g1 / std::pow(lambda, sigma) - g2 / std::pow(lambda, sigma + 1.0)) /
              std::tgamma(sigma) ==
          doctest::Approx(frozen).epsilon(1e-13));
    const double got = tempered_rl_integral([](double s) { return s; }, sigma, lambda, t, 1e-10);
    CHECK(got == doctest::Approx(frozen).epsilon(1e-10));
}

TEST_CASE("tempered integral: argument guards") {
    auto one = [](double) { return 1.0; };
    CHECK_THROWS_AS(tempered_rl_integral(one, 0.0, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(tempered_rl_integral(one, 1.0, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(tempered_rl_integral(one, 0.5, -1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(tempered_rl_integral(one, 0.5, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("tempered integral composed with the discrete tempered derivative") {
    // I^{alpha,lambda}[ D^{alpha,lambda}_tau f ](T) should recover
    // f(T) - e^{-lambda T} f(0) to the scheme's order (q = 1 weights).
    const double alpha = 0.6, lambda = 1.5, T = 1.0;
    auto f = [](double t) { return std::cos(t) + 2.0 * t; };
    const double target = f(T) - std::exp(-lambda * T) * f(0.0);
    auto error_at = [&](int M) {
        const double tau = T / M;
        const auto w = tempered_weights(1, TemperedParams(alpha, lambda), tau, M);
        const auto S = weight_partial_sums(w.l);
        // g_j ~ (Caputo D^{alpha,lambda} f)(t_j) via the RL form of
        // f - e^{-lambda t} f(0)
        std::vector<double> g(M + 1, 0.0);
        const double scale = std::pow(tau, -alpha);
        for (int j = 1; j <= M; ++j) {
            double acc = 0.0;
            for (int k = 0; k <= j; ++k) acc += w.d[k] * f((j - k) * tau);
            acc -= std::exp(-lambda * j * tau) * (S[j] + w.l[j]) * f(0.0);
            g[j] = scale * acc;
        }
        g[0] = g[1]; // no scheme value at t = 0; constant extension
        auto g_interp = [&](double s) {
            const double r = s / tau;
            const int i = std::min(static_cast<int>(r), M - 1);
            const double wgt = r - i;
            return (1.0 - wgt) * g[i] + wgt * g[i + 1];
        };
        const double recovered = tempered_rl_integral(g_interp, alpha, lambda, T, 1e-9);
        return std::abs(recovered - target);
    };
    const double e1 = error_at(64);
    const double e2 = error_at(128);
    CHECK(e1 / target < 0.05);
    CHECK(std::log2(e1 / e2) > 0.6); // ~first order, with interpolation noise
}
