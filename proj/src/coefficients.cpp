#include "rsde/coefficients.hpp"

#include <algorithm>
#include <cmath>

#include "rsde/rng.hpp"

namespace rsde {

namespace {

double param_or(const std::vector<double>& params, std::size_t i, double fallback) {
    return i < params.size() ? params[i] : fallback;
}

} // namespace

Coefficients coefficients_preset(const std::string& name, int r, const std::vector<double>& params) {
    Coefficients c;
    c.name = name;
    c.r = r;
    if (name == "additive") {
        // sigma constant, drift b0*x + b1; params: {sigma0, b0, b1}
        const double s0 = param_or(params, 0, 1.0);
        const double b0 = param_or(params, 1, 0.0);
        const double b1 = param_or(params, 2, 0.0);
        c.d = 1;
        c.sigma = [s0, r](std::span<const double>, std::span<double> sig) {
            for (int i = 0; i < r; ++i) sig[i] = s0;
        };
        c.drift = [b0, b1](std::span<const double> x, std::span<double> b) { b[0] = b0 * x[0] + b1; };
        c.dsigma = [r](std::span<const double>, std::span<double> ds) {
            for (int i = 0; i < r; ++i) ds[i] = 0.0;
        };
        c.lipschitz_hint = std::abs(b0);
        return c;
    }
    if (name == "trig") {
        // sigma_1 = a0 + a1 sin(2 pi x); with r = 2 the second column is
        // a0 + a1 cos(2 pi x); drift b0*x + b1. params: {a0, a1, b0, b1}
        if (r < 1 || r > 2) throw ConfigError("preset 'trig': r must be 1 or 2");
        const double a0 = param_or(params, 0, 0.3);
        const double a1 = param_or(params, 1, 0.2);
        const double b0 = param_or(params, 2, -0.5);
        const double b1 = param_or(params, 3, 0.0);
        c.d = 1;
        c.sigma = [a0, a1, r](std::span<const double> x, std::span<double> sig) {
            const double w = 2.0 * M_PI * x[0];
            sig[0] = a0 + a1 * std::sin(w);
            if (r == 2) sig[1] = a0 + a1 * std::cos(w);
        };
        c.drift = [b0, b1](std::span<const double> x, std::span<double> b) { b[0] = b0 * x[0] + b1; };
        c.dsigma = [a1, r](std::span<const double> x, std::span<double> ds) {
            const double w = 2.0 * M_PI * x[0];
            ds[0] = a1 * 2.0 * M_PI * std::cos(w);
            if (r == 2) ds[1] = -a1 * 2.0 * M_PI * std::sin(w);
        };
        c.lipschitz_hint = std::max(std::abs(b0), std::abs(a1) * 2.0 * M_PI);
        return c;
    }
    if (name == "linear-sigma") {
        // sigma(x) = x clipped to [clip_lo, clip_hi]; params: {clip_lo, clip_hi, b0, b1}
        if (r != 1) throw ConfigError("preset 'linear-sigma': r must be 1");
        const double lo = param_or(params, 0, 0.0);
        const double hi = param_or(params, 1, 1.0);
        const double b0 = param_or(params, 2, 0.0);
        const double b1 = param_or(params, 3, 0.0);
        if (!(lo < hi)) throw ConfigError("preset 'linear-sigma': require clip_lo < clip_hi");
        c.d = 1;
        c.sigma = [lo, hi](std::span<const double> x, std::span<double> sig) {
            sig[0] = std::clamp(x[0], lo, hi);
        };
        c.drift = [b0, b1](std::span<const double> x, std::span<double> b) { b[0] = b0 * x[0] + b1; };
        c.dsigma = [lo, hi](std::span<const double> x, std::span<double> ds) {
            ds[0] = (x[0] > lo && x[0] < hi) ? 1.0 : 0.0;
        };
        c.lipschitz_hint = std::max(1.0, std::abs(b0));
        return c;
    }
    throw ConfigError("unknown coefficient preset '" + name + "'");
}

std::vector<std::string> coefficient_preset_names() {
    return {"additive", "trig", "linear-sigma"};
}

void corrected_drift(const Coefficients& coeffs, const Matrix& c, std::span<const double> x,
                     std::span<double> out) {
    const int d = coeffs.d;
    const int r = coeffs.r;
    if (c.rows() != r || c.cols() != r) {
        throw ConfigError("corrected_drift: correction matrix dimension mismatch");
    }
    if (static_cast<int>(x.size()) != d || static_cast<int>(out.size()) != d) {
        throw ConfigError("corrected_drift: state dimension mismatch");
    }
    coeffs.drift(x, out);
    double sig_buf[64];
    double dsig_buf[512];
    const std::size_t need_sig = static_cast<std::size_t>(d) * r;
    const std::size_t need_dsig = need_sig * d;
    Vec sig_heap, dsig_heap;
    std::span<double> sig(sig_buf, need_sig);
    std::span<double> dsig(dsig_buf, need_dsig);
    if (need_sig > 64) {
        sig_heap.resize(need_sig);
        sig = sig_heap;
    }
    if (need_dsig > 512) {
        dsig_heap.resize(need_dsig);
        dsig = dsig_heap;
    }
    coeffs.sigma(x, sig);
    coeffs.dsigma(x, dsig);
    for (int l = 0; l < d; ++l) {
        double acc = 0.0;
        for (int i = 0; i < r; ++i) {
            for (int j = 0; j < r; ++j) {
                const double cij = c(i, j);
                if (cij == 0.0) continue;
                double inner = 0.0;
                for (int alpha = 0; alpha < d; ++alpha) {
                    inner += sig[static_cast<std::size_t>(alpha) * r + i] *
                             dsig[(static_cast<std::size_t>(l) * r + j) * d + alpha];
                }
                acc += cij * inner;
            }
        }
        out[l] += acc;
    }
}

Vec corrected_drift(const Coefficients& coeffs, const Matrix& c, std::span<const double> x) {
    Vec out(coeffs.d);
    corrected_drift(coeffs, c, x, out);
    return out;
}

void check_coefficients(const Coefficients& coeffs, std::span<const double> lo,
                        std::span<const double> hi, int n_points, std::uint64_t seed) {
    const int d = coeffs.d;
    const int r = coeffs.r;
    if (static_cast<int>(lo.size()) != d || static_cast<int>(hi.size()) != d) {
        throw ConfigError("check_coefficients: box dimension mismatch");
    }
    Xoshiro256pp rng(seed);
    Vec x(d), xp(d), xm(d);
    Vec sp(static_cast<std::size_t>(d) * r), sm(sp.size());
    Vec ds(static_cast<std::size_t>(d) * r * d);
    double worst = 0.0;
    for (int pt = 0; pt < n_points; ++pt) {
        for (int a = 0; a < d; ++a) x[a] = lo[a] + (hi[a] - lo[a]) * rng.uniform01();
        coeffs.dsigma(x, ds);
        const double h = 1e-6 * (1.0 + norm2(x));
        for (int alpha = 0; alpha < d; ++alpha) {
            xp = x;
            xm = x;
            xp[alpha] += h;
            xm[alpha] -= h;
            coeffs.sigma(xp, sp);
            coeffs.sigma(xm, sm);
            for (int l = 0; l < d; ++l) {
                for (int j = 0; j < r; ++j) {
                    const double fd = (sp[static_cast<std::size_t>(l) * r + j] -
                                       sm[static_cast<std::size_t>(l) * r + j]) /
                                      (2.0 * h);
                    const double an = ds[(static_cast<std::size_t>(l) * r + j) * d + alpha];
                    const double rel = std::abs(fd - an) / std::max(1.0, std::abs(an));
                    worst = std::max(worst, rel);
                }
            }
        }
    }
    if (worst > 1e-5) {
        throw ConfigError("coefficients '" + coeffs.name +
                          "': dsigma inconsistent with finite differences (max rel err " +
                          std::to_string(worst) + ")");
    }
}

} // namespace rsde
