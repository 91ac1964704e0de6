#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "rsde/brownian.hpp"
#include "rsde/linalg.hpp"

namespace rsde {

/// Interpolation profile f on [0,1] with f(0) = 0, f(1) = 1, continuously
/// differentiable. Built-ins are polynomials selected by name or supplied as a
/// coefficient list (ascending powers).
class Interpolant {
public:
    static Interpolant from_name(const std::string& name);
    static Interpolant from_coeffs(std::vector<double> coeffs, std::string name = "poly");
    static std::vector<std::string> registered_names();

    double value(double u) const;
    double deriv(double u) const;
    const std::string& name() const { return name_; }
    const std::vector<double>& coeffs() const { return coeffs_; }

private:
    Interpolant(std::string name, std::vector<double> coeffs);
    void validate() const;

    std::string name_;
    std::vector<double> coeffs_;
};

/// Mollifier kernel rho >= 0 supported in [0,1] with unit integral, plus its
/// analytic derivative. "bump" is the classical C-infinity bump normalized on
/// [0,1]; "poly" is 30 s^2 (1-s)^2.
class Kernel {
public:
    static Kernel from_name(const std::string& name);
    static Kernel from_coeffs(std::vector<double> coeffs, std::string name = "poly-user");
    static std::vector<std::string> registered_names();

    double rho(double s) const { return rho_(s); }
    double drho(double s) const { return drho_(s); }
    const std::string& name() const { return name_; }

private:
    Kernel(std::string name, std::function<double(double)> rho, std::function<double(double)> drho);
    void validate() const;

    std::string name_;
    std::function<double(double)> rho_;
    std::function<double(double)> drho_;
};

/// One of the paper-style approximation families G^delta evaluated on a
/// sampled Brownian path:
///   piecewise_linear: G^i(t) = w^i(t_d) + f^i((t-t_d)/d) (w^i(t_d+d) - w^i(t_d))
///   mollifier:        G^i(t) = integral_0^d w^i(s+t) rho_d(s) ds  (midpoint rule)
///   mcshane (r = 2):  interpolation with the profile pair swapped on windows
///                     where the two increments have opposite signs
/// plus the shifted driver B^delta(t) = G^delta(t - delta) for t >= delta and
/// 0 on [0, delta).
class ApproxDriver {
public:
    enum class Kind { piecewise_linear, mollifier, mcshane };

    static ApproxDriver piecewise_linear(std::vector<Interpolant> f_per_component, double delta);
    static ApproxDriver piecewise_linear(Interpolant f, double delta);
    static ApproxDriver mollifier(Kernel rho, double delta, int quad_points = 32);
    static ApproxDriver mcshane(Interpolant f1, Interpolant f2, double delta);

    Kind kind() const { return kind_; }
    std::string kind_name() const;
    double delta() const { return delta_; }
    int quad_points() const { return static_cast<int>(quad_nodes_.size()); }
    /// McShane is pinned to r = 2; other kinds accept any r >= 1.
    int required_r() const { return kind_ == Kind::mcshane ? 2 : 0; }

    const Interpolant& f(int component) const;
    const std::vector<Interpolant>& interpolants() const { return fs_; }
    const Kernel& kernel() const;

    /// G^delta(t, w) and its time derivative. Valid for 0 <= t <= T - delta;
    /// delta must be an integer multiple of the grid dt.
    Vec eval_G(const BrownianPath& w, double t) const;
    Vec eval_G_dot(const BrownianPath& w, double t) const;

    /// Shifted driver of the driven equation; valid for 0 <= t <= T.
    Vec eval_B_shifted(const BrownianPath& w, double t) const;

    // allocation-free variants for hot loops (out is resized to r)
    void eval_G(const BrownianPath& w, double t, Vec& out) const;
    void eval_G_dot(const BrownianPath& w, double t, Vec& out) const;
    void eval_B_shifted(const BrownianPath& w, double t, Vec& out) const;

    void validate_grid(const TimeGrid& grid) const;

private:
    ApproxDriver() = default;
    void eval_interp(const BrownianPath& w, double t, bool derivative, Vec& out) const;
    void eval_mollifier(const BrownianPath& w, double t, bool derivative, Vec& out) const;

    Kind kind_ = Kind::piecewise_linear;
    double delta_ = 0.0;
    std::vector<Interpolant> fs_;          // piecewise_linear (1 shared or per component); mcshane f1,f2
    std::shared_ptr<Kernel> kernel_;       // mollifier
    std::vector<double> quad_nodes_;       // midpoint nodes in [0,1]
    std::vector<double> quad_weights_;     // rho weights, renormalized to sum exactly 1
    std::vector<double> quad_dweights_;    // rho' weights (raw)
};

} // namespace rsde
