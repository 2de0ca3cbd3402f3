#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

#include "tfdiff/adaptive_quad.hpp"

namespace tfdiff {

/// Riemann-Liouville tempered fractional integral
///   (I^{sigma,lambda} f)(t) = 1/Gamma(sigma) int_0^t e^{-lambda(t-s)} (t-s)^{sigma-1} f(s) ds
/// for sigma in (0,1), lambda >= 0, t > 0. The endpoint singularity is
/// removed by the substitution u = (t-s)^sigma, which gives
///   1/Gamma(sigma+1) int_0^{t^sigma} e^{-lambda u^{1/sigma}} f(t - u^{1/sigma}) du.
/// Diagnostic-grade accuracy; throws QuadratureError with the achieved
/// estimate when the tolerance cannot be met.
inline double tempered_rl_integral(const std::function<double(double)>& f, double sigma,
                                   double lambda, double t, double rel_tol = 1e-9) {
    if (!(sigma > 0.0 && sigma < 1.0))
        throw std::invalid_argument("tempered_rl_integral: sigma must lie in (0,1)");
    if (!(lambda >= 0.0))
        throw std::invalid_argument("tempered_rl_integral: lambda must be >= 0");
    if (!(t > 0.0))
        throw std::invalid_argument("tempered_rl_integral: t must be > 0");
    const double inv_sigma = 1.0 / sigma;
    auto integrand = [&](double u) {
        const double r = std::pow(u, inv_sigma); // = t - s
        return std::exp(-lambda * r) * f(t - r);
    };
    const double value = integrate_adaptive(integrand, 0.0, std::pow(t, sigma), rel_tol,
                                            0.0, 8000);
    return value / std::tgamma(sigma + 1.0);
}

} // namespace tfdiff
