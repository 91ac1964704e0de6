#include "rsde/integrate.hpp"

#include <algorithm>
#include <cmath>

namespace rsde {

namespace {

void check_start(const Coefficients& coeffs, const DomainShape& domain, std::span<const double> x0) {
    if (coeffs.d != domain.dim()) throw ConfigError("integrate: state/domain dimension mismatch");
    if (static_cast<int>(x0.size()) != coeffs.d) throw ConfigError("integrate: x0 dimension mismatch");
    if (!domain.contains(x0)) throw DomainError("integrate: x0 outside the closure of D");
}

} // namespace

ReflectedSolution integrate_ito_reflected(const Coefficients& coeffs, const DomainShape& domain,
                                          const BrownianPath& w, const Matrix& c,
                                          std::span<const double> x0) {
    check_start(coeffs, domain, x0);
    if (coeffs.r != w.r()) throw ConfigError("integrate: noise dimension mismatch");
    const TimeGrid& g = w.grid();
    const int d = coeffs.d;
    const int r = coeffs.r;
    const double dt = g.dt();

    ReflectedSolution sol{SampledPath(g, d), SampledPath(g, d),
                          std::vector<double>(static_cast<std::size_t>(g.n_fine + 1), 0.0),
                          Scheme::ito_reference};
    Vec x(x0.begin(), x0.end());
    Vec free(x0.begin(), x0.end()); // x0 + accumulated increments (no reflection)
    Vec sig(static_cast<std::size_t>(d) * r), bbar(d), delta(d), y(d);
    for (int a = 0; a < d; ++a) {
        sol.x.node(0)[a] = x[a];
        sol.k.node(0)[a] = 0.0;
    }
    for (std::int64_t j = 0; j < g.n_fine; ++j) {
        coeffs.sigma(x, sig);
        corrected_drift(coeffs, c, x, bbar);
        const auto wj = w.path.node(j);
        const auto wj1 = w.path.node(j + 1);
        for (int a = 0; a < d; ++a) {
            double acc = bbar[a] * dt;
            for (int i = 0; i < r; ++i) acc += sig[static_cast<std::size_t>(a) * r + i] * (wj1[i] - wj[i]);
            delta[a] = acc;
            y[a] = x[a] + acc;
        }
        Vec xn = domain.project(y);
        double dk2 = 0.0;
        for (int a = 0; a < d; ++a) {
            const double dk = xn[a] - y[a];
            dk2 += dk * dk;
            free[a] += delta[a];
        }
        sol.k_tv[j + 1] = sol.k_tv[j] + std::sqrt(dk2);
        x = std::move(xn);
        for (int a = 0; a < d; ++a) {
            sol.x.node(j + 1)[a] = x[a];
            sol.k.node(j + 1)[a] = x[a] - free[a];
        }
    }
    return sol;
}

ReflectedSolution integrate_driven_reflected(const Coefficients& coeffs, const DomainShape& domain,
                                             const ApproxDriver& driver, const BrownianPath& w,
                                             std::span<const double> x0) {
    check_start(coeffs, domain, x0);
    if (coeffs.r != w.r()) throw ConfigError("integrate: noise dimension mismatch");
    driver.validate_grid(w.grid());
    const TimeGrid& g = w.grid();
    const int d = coeffs.d;
    const int r = coeffs.r;
    const double dt = g.dt();

    ReflectedSolution sol{SampledPath(g, d), SampledPath(g, d),
                          std::vector<double>(static_cast<std::size_t>(g.n_fine + 1), 0.0),
                          Scheme::driven_ode};
    Vec x(x0.begin(), x0.end());
    Vec free(x0.begin(), x0.end());
    Vec sig(static_cast<std::size_t>(d) * r), b(d), delta(d), y(d);
    Vec b_prev, b_next;
    driver.eval_B_shifted(w, g.node_time(0), b_prev);
    for (int a = 0; a < d; ++a) {
        sol.x.node(0)[a] = x[a];
        sol.k.node(0)[a] = 0.0;
    }
    for (std::int64_t j = 0; j < g.n_fine; ++j) {
        driver.eval_B_shifted(w, g.node_time(j + 1), b_next);
        coeffs.sigma(x, sig);
        coeffs.drift(x, b);
        for (int a = 0; a < d; ++a) {
            double acc = b[a] * dt;
            for (int i = 0; i < r; ++i) {
                acc += sig[static_cast<std::size_t>(a) * r + i] * (b_next[i] - b_prev[i]);
            }
            delta[a] = acc;
            y[a] = x[a] + acc;
        }
        Vec xn = domain.project(y);
        double dk2 = 0.0;
        for (int a = 0; a < d; ++a) {
            const double dk = xn[a] - y[a];
            dk2 += dk * dk;
            free[a] += delta[a];
        }
        sol.k_tv[j + 1] = sol.k_tv[j] + std::sqrt(dk2);
        x = std::move(xn);
        for (int a = 0; a < d; ++a) {
            sol.x.node(j + 1)[a] = x[a];
            sol.k.node(j + 1)[a] = x[a] - free[a];
        }
        std::swap(b_prev, b_next);
    }
    return sol;
}

double coupled_sup_error(const ReflectedSolution& a, const ReflectedSolution& b, double p) {
    if (!(a.x.grid() == b.x.grid()) || a.x.dim() != b.x.dim()) {
        throw NumericError("coupled_sup_error: grid or dimension mismatch");
    }
    double sup = 0.0;
    for (std::int64_t j = 0; j < a.x.n_nodes(); ++j) {
        sup = std::max(sup, dist2(a.x.node(j), b.x.node(j)));
    }
    return std::pow(sup, p);
}

} // namespace rsde
