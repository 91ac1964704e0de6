#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rsde/domain.hpp"
#include "rsde/linalg.hpp"
#include "rsde/stats.hpp"

namespace rsde {

/// SDE coefficients. sigma is d x r (row-major, sigma[alpha*r + i] is the
/// alpha-th state component of noise column i); dsigma holds the derivatives
/// d sigma_j^l / d x_alpha laid out as [(l*r + j)*d + alpha]. Coefficient
/// callables must be stateless: integrators call them from worker threads.
struct Coefficients {
    int d = 1;
    int r = 1;
    std::function<void(std::span<const double> x, std::span<double> sigma)> sigma;
    std::function<void(std::span<const double> x, std::span<double> b)> drift;
    std::function<void(std::span<const double> x, std::span<double> dsigma)> dsigma;
    double lipschitz_hint = 1.0;
    std::string name = "custom";
};

/// Registered presets: "additive" (constant sigma), "trig"
/// (sigma = a0 + a1 sin(2 pi x), cos in the second column when r = 2) and
/// "linear-sigma" (sigma(x) = x clipped to [clip_lo, clip_hi]); all with
/// b(x) = b0 * x + b1. See build_coefficients for the config keys.
Coefficients coefficients_preset(const std::string& name, int r = 1,
                                 const std::vector<double>& params = {});
std::vector<std::string> coefficient_preset_names();

/// Corrected drift of the limiting equation:
///   bbar^l(x) = b^l(x) + sum_{i,j,alpha} c_ij sigma_i^alpha(x) d_alpha sigma_j^l(x).
void corrected_drift(const Coefficients& coeffs, const Matrix& c, std::span<const double> x,
                     std::span<double> out);
Vec corrected_drift(const Coefficients& coeffs, const Matrix& c, std::span<const double> x);

/// Consistency check of dsigma against central finite differences at
/// n_points random points of the box [lo, hi]; throws ConfigError when the
/// worst relative error exceeds 1e-5 (step 1e-6 * (1 + |x|)).
void check_coefficients(const Coefficients& coeffs, std::span<const double> lo,
                        std::span<const double> hi, int n_points, std::uint64_t seed);

} // namespace rsde
