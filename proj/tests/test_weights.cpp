#include "doctest.h"

#include <cmath>
#include <vector>

#include "support/oracles.hpp"
#include "tfdiff/weights.hpp"

using namespace tfdiff;

TEST_CASE("grunwald weights: recurrence basics") {
    CHECK(grunwald_weights(0.5, 0) == std::vector<double>{1.0});
    const auto w1 = grunwald_weights(0.5, 1);
    CHECK(w1[0] == 1.0);
    CHECK(w1[1] == doctest::Approx(-0.5).epsilon(1e-15));
    const auto w2 = grunwald_weights(0.5, 2);
    CHECK(w2[2] == doctest::Approx(-0.125).epsilon(1e-15));
    CHECK_THROWS_AS(grunwald_weights(0.0, 3), std::invalid_argument);
    CHECK_THROWS_AS(grunwald_weights(1.0, 3), std::invalid_argument);
    CHECK_THROWS_AS(grunwald_weights(0.5, -1), std::invalid_argument);
}

TEST_CASE("grunwald weights: recurrence matches the binomial form") {
    // w_k = (-1)^k binom(alpha, k) = -alpha Gamma(k-alpha)/(Gamma(1-alpha) k!)
    for (double alpha : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}) {
        const auto w = grunwald_weights(alpha, 1000);
        for (int k : {1, 2, 5, 17, 100, 501, 1000}) {
            const long double a = alpha;
            const long double lg =
                std::lgamma(k - a) - std::lgamma(1.0L - a) - std::lgamma(k + 1.0L);
            const double wk = static_cast<double>(-a * std::exp(lg));
            CHECK(w[k] == doctest::Approx(wk).epsilon(1e-12));
        }
    }
}

TEST_CASE("grunwald weights: sign pattern and partial-sum bounds up to n = 1e4") {
    for (double alpha : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const int n = 10000;
        const auto w = grunwald_weights(alpha, n);
        CHECK(w[0] == 1.0);
        for (int k = 1; k <= n; ++k) {
            REQUIRE(w[k] < 0.0);
        }
        // 1/(n^alpha Gamma(1-alpha)) < sum_{k<n} w_k <= n^{-alpha}
        long double sum = 0.0L;
        const double g = std::tgamma(1.0 - alpha);
        for (int n_chk = 1; n_chk <= n; ++n_chk) {
            sum += w[n_chk - 1];
            const double s = static_cast<double>(sum);
            REQUIRE(s > 0.0);
            const double lower = 1.0 / (std::pow(n_chk, alpha) * g);
            const double upper = std::pow(n_chk, -alpha);
            REQUIRE(s > lower);
            REQUIRE(s <= upper);
        }
    }
}

TEST_CASE("lubich weights: q = 1 shares the grunwald path bitwise") {
    const auto g = grunwald_weights(0.37, 300);
    const auto l = lubich_weights(1, 0.37, 300);
    for (int k = 0; k <= 300; ++k) CHECK(g[k] == l[k]);
    CHECK(lubich_weights(1, 0.5, 2) == std::vector<double>{1.0, -0.5, -0.125});
}

TEST_CASE("lubich weights: leading coefficient and Cauchy-integral oracle") {
    CHECK(lubich_weights(2, 0.5, 0)[0] == doctest::Approx(std::sqrt(1.5)).epsilon(1e-15));
    // oracle: Taylor coefficients by trapezoidal Cauchy integral
    for (int q : {2, 3, 4, 5}) {
        for (double alpha : {0.3, 0.5, 0.8}) {
            const auto l = lubich_weights(q, alpha, 30);
            const auto ref = oracles::lubich_cauchy_oracle(q, alpha, 30);
            for (int k = 0; k <= 30; ++k)
                CHECK(l[k] == doctest::Approx(ref[k]).epsilon(2e-11));
        }
    }
    CHECK_THROWS_AS(lubich_weights(0, 0.5, 3), std::invalid_argument);
    CHECK_THROWS_AS(lubich_weights(6, 0.5, 3), std::invalid_argument);
}

TEST_CASE("lubich weights: partial sums vanish as n grows (W(1) = 0)") {
    // The generating function vanishes at zeta = 1, so sum l_k -> 0; the
    // tail decays like n^{-alpha}/Gamma(1-alpha), which is the attainable
    // scale at finite n (0.049 at q=3, alpha=0.3, n=1e4).
    for (double alpha : {0.3, 0.9}) {
        const auto l = lubich_weights(3, alpha, 10000);
        long double acc = 0.0L;
        double s100 = 0, s1000 = 0, s10000 = 0;
        for (int k = 0; k <= 10000; ++k) {
            acc += l[k];
            if (k == 100) s100 = std::abs(static_cast<double>(acc));
            if (k == 1000) s1000 = std::abs(static_cast<double>(acc));
            if (k == 10000) s10000 = std::abs(static_cast<double>(acc));
        }
        CHECK(s10000 < s1000);
        CHECK(s1000 < s100);
        CHECK(s10000 <= 2.0 * std::pow(10000.0, -alpha) / std::tgamma(1.0 - alpha));
    }
    // a 1e-3 bound on the tail is attainable once alpha is large enough
    const auto l = lubich_weights(3, 0.9, 10000);
    long double acc = 0.0L;
    for (double v : l) acc += v;
    CHECK(std::abs(static_cast<double>(acc)) <= 1e-3);
}

TEST_CASE("tempered weights: d_k = exp(-lambda k tau) l_k") {
    SUBCASE("lambda = 0 keeps d = l") {
        const auto w = tempered_weights(1, TemperedParams(0.5, 0.0), 0.1, 2);
        CHECK(w.d == w.l);
        CHECK(w.l == std::vector<double>{1.0, -0.5, -0.125});
    }
    SUBCASE("tempering factor") {
        const auto w = tempered_weights(1, TemperedParams(0.5, 1.0), 0.1, 1);
        CHECK(w.d[1] == doctest::Approx(-0.5 * std::exp(-0.1)).epsilon(1e-15));
    }
    SUBCASE("k = 0 is untouched for any parameters") {
        const auto w = tempered_weights(4, TemperedParams(0.7, 3.0), 0.25, 0);
        CHECK(w.d[0] == w.l[0]);
    }
    SUBCASE("elementwise identity across a long array") {
        const auto w = tempered_weights(2, TemperedParams(0.4, 1.7), 0.05, 500);
        for (int k = 0; k <= 500; ++k)
            CHECK(w.d[k] == doctest::Approx(std::exp(-1.7 * k * 0.05) * w.l[k]).epsilon(1e-15));
    }
    CHECK_THROWS_AS(tempered_weights(1, TemperedParams(0.5, 0.0), 0.0, 2), std::invalid_argument);
}

TEST_CASE("weight partial sums match direct accumulation") {
    const auto l = lubich_weights(2, 0.6, 50);
    const auto s = weight_partial_sums(l);
    CHECK(s[0] == 0.0);
    long double acc = 0.0L;
    for (int n = 1; n <= 50; ++n) {
        acc += l[n - 1];
        CHECK(s[n] == doctest::Approx(static_cast<double>(acc)).epsilon(1e-15));
    }
}
