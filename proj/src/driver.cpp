#include "rsde/driver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rsde/quadrature.hpp"

namespace rsde {

// ---------------------------------------------------------------------------
// Interpolant
// ---------------------------------------------------------------------------

Interpolant::Interpolant(std::string name, std::vector<double> coeffs)
    : name_(std::move(name)), coeffs_(std::move(coeffs)) {
    validate();
}

Interpolant Interpolant::from_name(const std::string& name) {
    if (name == "linear") return Interpolant(name, {0.0, 1.0});
    if (name == "quadratic") return Interpolant(name, {0.0, 0.0, 1.0});
    if (name == "smoothstep") return Interpolant(name, {0.0, 0.0, 3.0, -2.0});
    throw ConfigError("unknown interpolant '" + name + "'");
}

Interpolant Interpolant::from_coeffs(std::vector<double> coeffs, std::string name) {
    if (coeffs.empty()) throw ConfigError("interpolant: empty coefficient list");
    return Interpolant(std::move(name), std::move(coeffs));
}

std::vector<std::string> Interpolant::registered_names() {
    return {"linear", "quadratic", "smoothstep"};
}

double Interpolant::value(double u) const {
    double v = 0.0;
    for (std::size_t k = coeffs_.size(); k-- > 0;) v = v * u + coeffs_[k];
    return v;
}

double Interpolant::deriv(double u) const {
    double v = 0.0;
    for (std::size_t k = coeffs_.size(); k-- > 1;) v = v * u + coeffs_[k] * static_cast<double>(k);
    return v;
}

void Interpolant::validate() const {
    if (std::abs(value(0.0)) > 1e-12) throw ConfigError("interpolant: f(0) must equal 0");
    if (std::abs(value(1.0) - 1.0) > 1e-12) throw ConfigError("interpolant: f(1) must equal 1");
    // C^1 sanity: analytic derivative against central differences.
    const double h = 1e-6;
    for (int i = 1; i <= 9; ++i) {
        const double u = i / 10.0;
        const double fd = (value(u + h) - value(u - h)) / (2.0 * h);
        const double an = deriv(u);
        if (std::abs(fd - an) > 1e-5 * std::max(1.0, std::abs(an))) {
            throw ConfigError("interpolant: derivative inconsistent with finite differences");
        }
    }
}

// ---------------------------------------------------------------------------
// Kernel
// ---------------------------------------------------------------------------

Kernel::Kernel(std::string name, std::function<double(double)> rho,
               std::function<double(double)> drho)
    : name_(std::move(name)), rho_(std::move(rho)), drho_(std::move(drho)) {
    validate();
}

Kernel Kernel::from_name(const std::string& name) {
    if (name == "bump") {
        // classical C-infinity bump on [0,1], normalized once at construction
        auto raw = [](double s) -> double {
            if (s <= 0.0 || s >= 1.0) return 0.0;
            return std::exp(-1.0 / (s * (1.0 - s)));
        };
        const double mass = adaptive_simpson(raw, 0.0, 1.0, 1e-15);
        const double c = 1.0 / mass;
        auto rho = [raw, c](double s) { return c * raw(s); };
        auto drho = [raw, c](double s) -> double {
            if (s <= 0.0 || s >= 1.0) return 0.0;
            const double u = s * (1.0 - s);
            return c * raw(s) * (1.0 - 2.0 * s) / (u * u);
        };
        return Kernel(name, rho, drho);
    }
    if (name == "poly") {
        // 30 s^2 (1-s)^2: unit mass on [0,1] exactly
        auto rho = [](double s) -> double {
            if (s <= 0.0 || s >= 1.0) return 0.0;
            const double t = 1.0 - s;
            return 30.0 * s * s * t * t;
        };
        auto drho = [](double s) -> double {
            if (s <= 0.0 || s >= 1.0) return 0.0;
            return 60.0 * s * (1.0 - s) * (1.0 - 2.0 * s);
        };
        return Kernel(name, rho, drho);
    }
    throw ConfigError("unknown kernel '" + name + "'");
}

Kernel Kernel::from_coeffs(std::vector<double> coeffs, std::string name) {
    if (coeffs.empty()) throw ConfigError("kernel: empty coefficient list");
    auto poly = [coeffs](double s) {
        double v = 0.0;
        for (std::size_t k = coeffs.size(); k-- > 0;) v = v * s + coeffs[k];
        return v;
    };
    auto dpoly = [coeffs](double s) {
        double v = 0.0;
        for (std::size_t k = coeffs.size(); k-- > 1;) v = v * s + coeffs[k] * static_cast<double>(k);
        return v;
    };
    const double mass = adaptive_simpson(poly, 0.0, 1.0, 1e-15);
    if (!(mass > 0.0)) throw ConfigError("kernel: polynomial has nonpositive mass on [0,1]");
    const double c = 1.0 / mass;
    auto rho = [poly, c](double s) -> double {
        if (s < 0.0 || s > 1.0) return 0.0;
        return c * poly(s);
    };
    auto drho = [dpoly, c](double s) -> double {
        if (s < 0.0 || s > 1.0) return 0.0;
        return c * dpoly(s);
    };
    return Kernel(std::move(name), rho, drho);
}

std::vector<std::string> Kernel::registered_names() { return {"bump", "poly"}; }

void Kernel::validate() const {
    const double mass = adaptive_simpson(rho_, 0.0, 1.0, 1e-14);
    if (std::abs(mass - 1.0) > 1e-10) {
        throw ConfigError("kernel '" + name_ + "': integral over [0,1] is " + std::to_string(mass) +
                          ", must be 1 within 1e-10");
    }
    for (int i = 0; i <= 64; ++i) {
        const double s = i / 64.0;
        if (rho_(s) < -1e-12) throw ConfigError("kernel '" + name_ + "': negative value at s=" + std::to_string(s));
    }
    // analytic derivative against central differences away from the endpoints
    const double h = 1e-7;
    for (int i = 1; i <= 15; ++i) {
        const double s = i / 16.0;
        const double fd = (rho_(s + h) - rho_(s - h)) / (2.0 * h);
        const double an = drho_(s);
        if (std::abs(fd - an) > 1e-4 * std::max(1.0, std::abs(an))) {
            throw ConfigError("kernel '" + name_ + "': rho' inconsistent with finite differences");
        }
    }
}

// ---------------------------------------------------------------------------
// ApproxDriver
// ---------------------------------------------------------------------------

ApproxDriver ApproxDriver::piecewise_linear(std::vector<Interpolant> f_per_component, double delta) {
    if (!(delta > 0.0)) throw ConfigError("driver: require delta > 0");
    if (f_per_component.empty()) throw ConfigError("driver: need at least one interpolant");
    ApproxDriver d;
    d.kind_ = Kind::piecewise_linear;
    d.delta_ = delta;
    d.fs_ = std::move(f_per_component);
    return d;
}

ApproxDriver ApproxDriver::piecewise_linear(Interpolant f, double delta) {
    std::vector<Interpolant> fs;
    fs.push_back(std::move(f));
    return piecewise_linear(std::move(fs), delta);
}

ApproxDriver ApproxDriver::mollifier(Kernel rho, double delta, int quad_points) {
    if (!(delta > 0.0)) throw ConfigError("driver: require delta > 0");
    if (quad_points < 2) throw ConfigError("mollifier: require quad_points >= 2");
    ApproxDriver d;
    d.kind_ = Kind::mollifier;
    d.delta_ = delta;
    d.kernel_ = std::make_shared<Kernel>(std::move(rho));
    d.quad_nodes_.resize(quad_points);
    d.quad_weights_.resize(quad_points);
    d.quad_dweights_.resize(quad_points);
    double wsum = 0.0;
    for (int q = 0; q < quad_points; ++q) {
        const double xi = (q + 0.5) / quad_points;
        d.quad_nodes_[q] = xi;
        d.quad_weights_[q] = d.kernel_->rho(xi) / quad_points;
        d.quad_dweights_[q] = d.kernel_->drho(xi) / quad_points;
        wsum += d.quad_weights_[q];
    }
    if (!(wsum > 0.0)) throw ConfigError("mollifier: kernel vanishes on all quadrature nodes");
    // Renormalize the discrete weights to unit sum so the shift identity
    // G(t + k delta, w) = G(t, theta w) + w(k delta) holds exactly under the
    // discrete quadrature, not just up to its truncation error.
    for (double& w : d.quad_weights_) w /= wsum;
    return d;
}

ApproxDriver ApproxDriver::mcshane(Interpolant f1, Interpolant f2, double delta) {
    if (!(delta > 0.0)) throw ConfigError("driver: require delta > 0");
    ApproxDriver d;
    d.kind_ = Kind::mcshane;
    d.delta_ = delta;
    d.fs_.push_back(std::move(f1));
    d.fs_.push_back(std::move(f2));
    return d;
}

std::string ApproxDriver::kind_name() const {
    switch (kind_) {
        case Kind::piecewise_linear: return "piecewise_linear";
        case Kind::mollifier: return "mollifier";
        case Kind::mcshane: return "mcshane";
    }
    return "?";
}

const Interpolant& ApproxDriver::f(int component) const {
    if (fs_.empty()) throw ConfigError("driver has no interpolants");
    if (fs_.size() == 1) return fs_[0];
    return fs_.at(static_cast<std::size_t>(component));
}

const Kernel& ApproxDriver::kernel() const {
    if (!kernel_) throw ConfigError("driver has no kernel");
    return *kernel_;
}

void ApproxDriver::validate_grid(const TimeGrid& grid) const {
    const double ratio = delta_ / grid.dt();
    const double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
        throw ConfigError("driver: delta must be an integer multiple of the grid dt");
    }
    if (delta_ > grid.horizon + 1e-12 * grid.horizon) {
        throw ConfigError("driver: delta exceeds the grid horizon");
    }
}

namespace {

// Window decomposition t = m*delta + frac*delta with frac in [0, 1); snaps to
// the next window when t sits within relative 1e-9 of its left edge.
struct Window {
    std::int64_t m;
    double frac;
};

Window window_of(double t, double delta) {
    const double u = t / delta;
    auto m = static_cast<std::int64_t>(std::floor(u));
    double frac = u - static_cast<double>(m);
    if (frac > 1.0 - 1e-9) {
        m += 1;
        frac = 0.0;
    }
    if (m < 0) { // t == -0.0 or a hair below zero after range checks
        m = 0;
        frac = 0.0;
    }
    return {m, frac};
}

void check_eval_range(const char* who, double t, double lo, double hi, double scale) {
    const double slack = 1e-9 * std::max(1.0, scale);
    if (t < lo - slack || t > hi + slack) {
        throw NumericError(std::string(who) + ": t out of range");
    }
}

} // namespace

void ApproxDriver::eval_interp(const BrownianPath& w, double t, bool derivative, Vec& out) const {
    const TimeGrid& g = w.grid();
    const auto M = static_cast<std::int64_t>(std::round(delta_ / g.dt()));
    const Window win = window_of(t, delta_);
    const std::int64_t j0 = win.m * M;
    const std::int64_t j1 = j0 + M;
    const auto base = w.path.node(std::min(j0, g.n_fine));
    const auto ahead = w.path.node(std::min(j1, g.n_fine));
    const int r = w.r();
    out.assign(r, 0.0);

    bool swap = false;
    if (kind_ == Kind::mcshane) {
        // branch on the sign of the increment product over this window;
        // a product of exactly zero takes the first branch
        const double d1 = ahead[0] - base[0];
        const double d2 = ahead[1] - base[1];
        swap = (d1 * d2 < 0.0);
    }

    for (int i = 0; i < r; ++i) {
        const Interpolant& fi = (kind_ == Kind::mcshane) ? fs_[swap ? (1 - i) : i] : f(i);
        const double inc = ahead[i] - base[i];
        if (derivative) {
            out[i] = fi.deriv(win.frac) * inc / delta_;
        } else {
            out[i] = base[i] + fi.value(win.frac) * inc;
        }
    }
}

void ApproxDriver::eval_mollifier(const BrownianPath& w, double t, bool derivative, Vec& out) const {
    const int r = w.r();
    out.assign(r, 0.0);
    double sample[8];
    if (r > 8) throw ConfigError("mollifier: r > 8 unsupported");
    std::span<double> sv(sample, static_cast<std::size_t>(r));
    const auto& weights = derivative ? quad_dweights_ : quad_weights_;
    for (std::size_t q = 0; q < quad_nodes_.size(); ++q) {
        w.path.eval(t + delta_ * quad_nodes_[q], sv);
        const double wq = weights[q];
        for (int i = 0; i < r; ++i) out[i] += wq * sample[i];
    }
    if (derivative) {
        for (int i = 0; i < r; ++i) out[i] = -out[i] / delta_;
    }
}

void ApproxDriver::eval_G(const BrownianPath& w, double t, Vec& out) const {
    validate_grid(w.grid());
    if (kind_ == Kind::mcshane && w.r() != 2) throw ConfigError("mcshane driver requires r = 2");
    check_eval_range("eval_G", t, 0.0, w.grid().horizon - delta_, w.grid().horizon);
    if (kind_ == Kind::mollifier) {
        eval_mollifier(w, t, false, out);
    } else {
        eval_interp(w, t, false, out);
    }
}

void ApproxDriver::eval_G_dot(const BrownianPath& w, double t, Vec& out) const {
    validate_grid(w.grid());
    if (kind_ == Kind::mcshane && w.r() != 2) throw ConfigError("mcshane driver requires r = 2");
    check_eval_range("eval_G_dot", t, 0.0, w.grid().horizon - delta_, w.grid().horizon);
    if (kind_ == Kind::mollifier) {
        eval_mollifier(w, t, true, out);
    } else {
        eval_interp(w, t, true, out);
    }
}

void ApproxDriver::eval_B_shifted(const BrownianPath& w, double t, Vec& out) const {
    validate_grid(w.grid());
    if (kind_ == Kind::mcshane && w.r() != 2) throw ConfigError("mcshane driver requires r = 2");
    check_eval_range("eval_B_shifted", t, 0.0, w.grid().horizon, w.grid().horizon);
    if (t < delta_) {
        out.assign(static_cast<std::size_t>(w.r()), 0.0);
        return;
    }
    if (kind_ == Kind::mollifier) {
        eval_mollifier(w, t - delta_, false, out);
    } else {
        eval_interp(w, t - delta_, false, out);
    }
}

Vec ApproxDriver::eval_G(const BrownianPath& w, double t) const {
    Vec out;
    eval_G(w, t, out);
    return out;
}

Vec ApproxDriver::eval_G_dot(const BrownianPath& w, double t) const {
    Vec out;
    eval_G_dot(w, t, out);
    return out;
}

Vec ApproxDriver::eval_B_shifted(const BrownianPath& w, double t) const {
    Vec out;
    eval_B_shifted(w, t, out);
    return out;
}

} // namespace rsde
