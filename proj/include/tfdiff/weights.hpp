#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "tfdiff/params.hpp"

namespace tfdiff {

/// Convolution quadrature weights for the discrete tempered fractional
/// derivative of order q: l[k] are the plain (untempered) weights and
/// d[k] = exp(-lambda k tau) * l[k].
struct ConvolutionWeights {
    int q = 1;
    double alpha = 0.5;
    double lambda = 0.0;
    double tau = 1.0;
    std::vector<double> l;
    std::vector<double> d;

    int max_index() const { return static_cast<int>(l.size()) - 1; }
};

namespace detail {

/// Coefficients p_0..p_q of the degree-q polynomial
/// sum_{i=1}^{q} (1/i) (1 - z)^i, accumulated in extended precision.
inline std::vector<long double> bdf_generating_poly(int q) {
    std::vector<long double> p(q + 1, 0.0L);
    for (int i = 1; i <= q; ++i) {
        // (1 - z)^i = sum_j binom(i,j) (-1)^j z^j
        long double binom = 1.0L;
        for (int j = 0; j <= i; ++j) {
            const long double sign = (j % 2 == 0) ? 1.0L : -1.0L;
            p[j] += sign * binom / i;
            binom = binom * (i - j) / (j + 1);
        }
    }
    return p;
}

} // namespace detail

/// First-order Grunwald-Letnikov weights w_0..w_n:
/// w_0 = 1, w_k = (1 - (alpha+1)/k) w_{k-1}.
/// Generated in extended precision, stored in double.
inline std::vector<double> grunwald_weights(double alpha, int n) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("grunwald_weights: alpha must lie strictly in (0,1)");
    if (n < 0)
        throw std::invalid_argument("grunwald_weights: negative weight count");
    std::vector<double> w(n + 1);
    long double wk = 1.0L;
    w[0] = 1.0;
    const long double ap1 = 1.0L + static_cast<long double>(alpha);
    for (int k = 1; k <= n; ++k) {
        wk *= 1.0L - ap1 / k;
        w[k] = static_cast<double>(wk);
    }
    return w;
}

/// Order-q Lubich fractional BDF weights l_0..l_n: the Taylor coefficients
/// of W(z) = (sum_{i=1}^{q} (1/i)(1-z)^i)^alpha, q in {1,...,5}, computed
/// by the J.C.P. Miller power-of-a-series recurrence in extended precision.
/// For q = 1 this reduces exactly to grunwald_weights.
inline std::vector<double> lubich_weights(int q, double alpha, int n) {
    if (q < 1 || q > 5)
        throw std::invalid_argument("lubich_weights: order q must be in {1,...,5}");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("lubich_weights: alpha must lie strictly in (0,1)");
    if (n < 0)
        throw std::invalid_argument("lubich_weights: negative weight count");
    if (q == 1) return grunwald_weights(alpha, n);

    const std::vector<long double> p = detail::bdf_generating_poly(q);
    const long double a = static_cast<long double>(alpha);
    std::vector<long double> l(n + 1, 0.0L);
    l[0] = std::pow(p[0], a);
    // p_0 (m) l_m = sum_{j=1}^{min(m,q)} ((alpha+1) j - m) p_j l_{m-j}
    for (int m = 1; m <= n; ++m) {
        long double s = 0.0L;
        const int jmax = std::min(m, q);
        for (int j = 1; j <= jmax; ++j)
            s += ((a + 1.0L) * j - m) * p[j] * l[m - j];
        l[m] = s / (p[0] * m);
    }
    std::vector<double> out(n + 1);
    for (int k = 0; k <= n; ++k) out[k] = static_cast<double>(l[k]);
    return out;
}

/// Tempered weights d_k = exp(-lambda k tau) l_k alongside the plain l_k.
inline ConvolutionWeights tempered_weights(int q, const TemperedParams& params,
                                           double tau, int n) {
    if (!(tau > 0.0))
        throw std::invalid_argument("tempered_weights: tau must be > 0");
    ConvolutionWeights w;
    w.q = q;
    w.alpha = params.alpha;
    w.lambda = params.lambda;
    w.tau = tau;
    w.l = lubich_weights(q, params.alpha, n);
    w.d.resize(w.l.size());
    for (int k = 0; k <= n; ++k)
        w.d[k] = std::exp(-params.lambda * k * tau) * w.l[k];
    return w;
}

/// Prefix sums S_n = sum_{k=0}^{n-1} l_k (S_0 = 0), accumulated in
/// extended precision. Long histories make these sums small differences
/// of O(1) terms.
inline std::vector<double> weight_partial_sums(const std::vector<double>& l) {
    std::vector<double> s(l.size() + 1);
    long double acc = 0.0L;
    s[0] = 0.0;
    for (std::size_t k = 0; k < l.size(); ++k) {
        acc += static_cast<long double>(l[k]);
        s[k + 1] = static_cast<double>(acc);
    }
    return s;
}

} // namespace tfdiff
