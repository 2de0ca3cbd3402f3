#pragma once

#include <stdexcept>

namespace tfdiff {

/// Parameters of the tempered time-fractional diffusion operator:
/// fractional order alpha in (0,1), tempering rate lambda >= 0 (1/time),
/// diffusivity kappa > 0.
struct TemperedParams {
    double alpha;
    double lambda;
    double kappa;

    TemperedParams(double alpha_, double lambda_, double kappa_ = 1.0)
        : alpha(alpha_), lambda(lambda_), kappa(kappa_) {
        if (!(alpha > 0.0 && alpha < 1.0))
            throw std::invalid_argument("TemperedParams: alpha must lie strictly in (0,1)");
        if (!(lambda >= 0.0))
            throw std::invalid_argument("TemperedParams: lambda must be >= 0");
        if (!(kappa > 0.0))
            throw std::invalid_argument("TemperedParams: kappa must be > 0");
    }
};

} // namespace tfdiff
