#pragma once

#include <functional>
#include <span>

namespace kinlab {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
};

/// Adaptive Gauss-Kronrod integration of f over [a, b], split at the given
/// interior breakpoints. Throws QuadratureError when the summed error
/// estimate exceeds rel_tol * |value| (and abs_floor).
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b, double rel_tol,
                                    std::span<const double> breakpoints = {}, double abs_floor = 0.0);

}  // namespace kinlab
