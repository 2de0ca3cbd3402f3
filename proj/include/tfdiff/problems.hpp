#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>

#include "tfdiff/ldg.hpp"
#include "tfdiff/mittag_leffler.hpp"
#include "tfdiff/params.hpp"

namespace tfdiff {

using SpaceFn = std::function<double(double)>;
using SpaceTimeFn = std::function<double(double, double)>;

constexpr double pi_v = 3.14159265358979323846;

/// A benchmark problem: equation parameters, domain, horizon, boundary
/// condition, initial data, and (when available) forcing and exact
/// solution. Functions must be pure; specs are immutable values.
struct ProblemSpec {
    TemperedParams params = TemperedParams(0.5, 0.0, 1.0);
    double x_left = 0.0;
    double x_right = 1.0;
    double T = 1.0;
    BoundaryCondition bc = BoundaryCondition::periodic;
    SpaceFn initial;
    SpaceTimeFn forcing; // empty when the equation is homogeneous
    SpaceTimeFn exact;   // empty when no closed form is known
    std::string label;

    bool has_forcing() const { return static_cast<bool>(forcing); }
    bool has_exact() const { return static_cast<bool>(exact); }
};

/// Manufactured smooth problem on [0,1] with periodic boundaries:
///   u(x,t) = e^{-lambda t} (t^beta + 1) sin(2 pi x),
/// with the forcing that makes it solve the tempered diffusion equation.
inline ProblemSpec example1(double alpha, double lambda, double kappa = 1.0,
                            double beta = 4.0) {
    if (!(beta > alpha))
        throw std::invalid_argument("example1: beta must exceed alpha");
    ProblemSpec p;
    p.params = TemperedParams(alpha, lambda, kappa);
    p.x_left = 0.0;
    p.x_right = 1.0;
    p.T = 1.0;
    p.bc = BoundaryCondition::periodic;
    p.label = "example1";
    p.initial = [](double x) { return std::sin(2.0 * pi_v * x); };
    const double gamma_ratio = std::exp(std::lgamma(beta + 1.0) - std::lgamma(beta + 1.0 - alpha));
    p.forcing = [=](double x, double t) {
        return std::exp(-lambda * t) *
               (gamma_ratio * std::pow(t, beta - alpha) +
                4.0 * kappa * pi_v * pi_v * (std::pow(t, beta) + 1.0)) *
               std::sin(2.0 * pi_v * x);
    };
    p.exact = [=](double x, double t) {
        return std::exp(-lambda * t) * (std::pow(t, beta) + 1.0) * std::sin(2.0 * pi_v * x);
    };
    return p;
}

namespace detail {

/// Single-entry memo for the time-dependent Mittag-Leffler amplitude of
/// example 2; every quadrature node at a given time shares one evaluation.
struct MLMemo {
    std::mutex mu;
    double t = -1.0;
    double value = 1.0;
};

} // namespace detail

/// Homogeneous problem on [0,1] with zero Dirichlet data (kappa = 1):
///   u(x,t) = e^{-lambda t} E_alpha(-4 pi^2 t^alpha) sin(2 pi x).
inline ProblemSpec example2(double alpha, double lambda) {
    ProblemSpec p;
    p.params = TemperedParams(alpha, lambda, 1.0);
    p.x_left = 0.0;
    p.x_right = 1.0;
    p.T = 1.0;
    p.bc = BoundaryCondition::homogeneous_dirichlet;
    p.label = "example2";
    p.initial = [](double x) { return std::sin(2.0 * pi_v * x); };
    auto memo = std::make_shared<detail::MLMemo>();
    p.exact = [=](double x, double t) {
        double amp;
        {
            std::scoped_lock lock(memo->mu);
            if (t != memo->t) {
                memo->t = t;
                memo->value = mittag_leffler(alpha, -4.0 * pi_v * pi_v * std::pow(t, alpha));
            }
            amp = memo->value;
        }
        return std::exp(-lambda * t) * amp * std::sin(2.0 * pi_v * x);
    };
    return p;
}

/// Gaussian pulse released on [-4,4] with zero Dirichlet data (kappa = 1);
/// no closed-form solution. sigma defaults to the benchmark value 0.01.
inline ProblemSpec example3(double alpha, double lambda, double sigma = 0.01) {
    if (!(sigma > 0.0))
        throw std::invalid_argument("example3: sigma must be > 0");
    ProblemSpec p;
    p.params = TemperedParams(alpha, lambda, 1.0);
    p.x_left = -4.0;
    p.x_right = 4.0;
    p.T = 1.0;
    p.bc = BoundaryCondition::homogeneous_dirichlet;
    p.label = "example3";
    p.initial = [sigma](double x) {
        return std::exp(-x * x / (2.0 * sigma * sigma)) / (sigma * std::sqrt(2.0 * pi_v));
    };
    return p;
}

} // namespace tfdiff
