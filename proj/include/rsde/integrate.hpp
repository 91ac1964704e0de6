#pragma once

#include "rsde/coefficients.hpp"
#include "rsde/domain.hpp"
#include "rsde/driver.hpp"

namespace rsde {

enum class Scheme { ito_reference, driven_ode };

/// Output of a reflected integration: x stays in the closure of D, k(0) = 0,
/// and x = (free Euler path) + k holds bit-exactly at every node.
struct ReflectedSolution {
    SampledPath x;
    SampledPath k;
    std::vector<double> k_tv;
    Scheme scheme = Scheme::ito_reference;
};

/// Projected Euler-Maruyama for the reflected Ito equation with corrected
/// drift: step = sigma(X) dW + bbar(X) dt, then projection. Deterministic
/// given (w, x0). Pass a zero matrix for c to drop the drift correction.
ReflectedSolution integrate_ito_reflected(const Coefficients& coeffs, const DomainShape& domain,
                                          const BrownianPath& w, const Matrix& c,
                                          std::span<const double> x0);

/// Projected fine-step integration of the driven reflected ODE against the
/// shifted driver: step = sigma(X) dB^delta + b(X) dt, then projection. Over
/// [0, delta) the driver contributes nothing and only drift and reflection act.
ReflectedSolution integrate_driven_reflected(const Coefficients& coeffs, const DomainShape& domain,
                                             const ApproxDriver& driver, const BrownianPath& w,
                                             std::span<const double> x0);

/// max over nodes of |x_a - x_b| raised to the p (the per-path integrand of
/// the strong-convergence functional).
double coupled_sup_error(const ReflectedSolution& a, const ReflectedSolution& b, double p);

} // namespace rsde
