#pragma once

#include <functional>

namespace rsde {

/// Adaptive Simpson quadrature of f on [a, b] to absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12, int max_depth = 40);

} // namespace rsde
