#pragma once

#include <cmath>
#include <functional>
#include <queue>
#include <stdexcept>
#include <string>

#include "tfdiff/gauss.hpp"

namespace tfdiff {

/// Thrown when adaptive quadrature cannot reach the requested tolerance;
/// carries the best value and the achieved error estimate.
struct QuadratureError : std::runtime_error {
    double value;
    double achieved;
    QuadratureError(double v, double a, double requested)
        : std::runtime_error("adaptive quadrature did not converge: achieved error estimate " +
                             std::to_string(a) + ", requested " + std::to_string(requested)),
          value(v), achieved(a) {}
};

namespace detail {

struct Segment {
    double a, b, value, err;
    bool operator<(const Segment& o) const { return err < o.err; }
};

inline Segment eval_segment(const std::function<double(double)>& f, double a, double b,
                            const QuadRule& lo, const QuadRule& hi) {
    const double mid = 0.5 * (a + b), hl = 0.5 * (b - a);
    double slo = 0.0, shi = 0.0;
    for (int i = 0; i < lo.size(); ++i)
        slo += lo.weights[i] * f(mid + hl * lo.nodes[i]);
    for (int i = 0; i < hi.size(); ++i)
        shi += hi.weights[i] * f(mid + hl * hi.nodes[i]);
    slo *= hl;
    shi *= hl;
    return {a, b, shi, std::abs(shi - slo)};
}

} // namespace detail

/// Globally adaptive Gauss quadrature on [a,b] with a 7/15-point pair:
/// repeatedly bisects the segment with the largest error estimate until
/// the summed estimate meets max(abs_tol, rel_tol*|integral|). If
/// `achieved` is given the estimate is reported there instead of throwing.
inline double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                 double rel_tol = 1e-10, double abs_tol = 0.0,
                                 int max_segments = 4000, double* achieved = nullptr,
                                 int initial_segments = 1) {
    static const QuadRule lo = gauss_rule(7);
    static const QuadRule hi = gauss_rule(15);
    if (a == b) {
        if (achieved) *achieved = 0.0;
        return 0.0;
    }
    std::priority_queue<detail::Segment> heap;
    double total = 0.0, active_err = 0.0;
    initial_segments = std::max(1, initial_segments);
    for (int i = 0; i < initial_segments; ++i) {
        const double sa = a + (b - a) * i / initial_segments;
        const double sb = a + (b - a) * (i + 1) / initial_segments;
        const detail::Segment seg = detail::eval_segment(f, sa, sb, lo, hi);
        total += seg.value;
        active_err += seg.err;
        heap.push(seg);
    }
    double frozen_err = 0.0; // segments at round-off resolution
    int segments = initial_segments;
    auto tol = [&] { return std::max(abs_tol, rel_tol * std::abs(total)); };
    while (!heap.empty() && frozen_err + active_err > tol() && segments < max_segments) {
        const detail::Segment worst = heap.top();
        heap.pop();
        active_err -= worst.err;
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            frozen_err += worst.err;
            continue;
        }
        const detail::Segment left = detail::eval_segment(f, worst.a, mid, lo, hi);
        const detail::Segment right = detail::eval_segment(f, mid, worst.b, lo, hi);
        total += left.value + right.value - worst.value;
        active_err += left.err + right.err;
        heap.push(left);
        heap.push(right);
        ++segments;
    }
    const double err = frozen_err + active_err;
    if (achieved) *achieved = err;
    else if (err > tol() * 1.000001)
        throw QuadratureError(total, err, tol());
    return total;
}

} // namespace tfdiff
