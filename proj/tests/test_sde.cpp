#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "rsde/integrate.hpp"
#include "rsde/parallel.hpp"
#include "rsde/rng.hpp"

using namespace rsde;

namespace {

Coefficients unit_noise() { return coefficients_preset("additive", 1, {1.0, 0.0, 0.0}); }

Coefficients pure_drift(double b) { return coefficients_preset("additive", 1, {0.0, 0.0, b}); }

} // namespace

TEST_CASE("corrected drift: constant sigma leaves b alone") {
    const Coefficients c = coefficients_preset("additive", 2, {0.7, -0.3, 0.1});
    const Matrix half = Matrix::identity(2, 0.5);
    const Vec x = {0.4};
    const Vec bbar = corrected_drift(c, half, x);
    Vec b(1);
    c.drift(x, b);
    CHECK(bbar[0] == b[0]);
}

TEST_CASE("corrected drift: d=r=1, sigma(x)=x, c=1/2 gives x/2") {
    const Coefficients c = coefficients_preset("linear-sigma", 1, {-10.0, 10.0, 0.0, 0.0});
    const Matrix half = Matrix::identity(1, 0.5);
    const Vec bbar = corrected_drift(c, half, Vec{0.8});
    CHECK(bbar[0] == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("corrected drift: sin/cos pair cancels under c = I/2") {
    // d = 1, r = 2, sigma = (sin x, cos x): sum sigma_i dsigma_i = 0
    Coefficients c;
    c.d = 1;
    c.r = 2;
    c.name = "sincos";
    c.sigma = [](std::span<const double> x, std::span<double> s) {
        s[0] = std::sin(x[0]);
        s[1] = std::cos(x[0]);
    };
    c.drift = [](std::span<const double> x, std::span<double> b) { b[0] = -0.1 * x[0]; };
    c.dsigma = [](std::span<const double> x, std::span<double> ds) {
        ds[0] = std::cos(x[0]);
        ds[1] = -std::sin(x[0]);
    };
    const Matrix half = Matrix::identity(2, 0.5);
    for (double x : {0.0, 0.3, 1.2}) {
        const Vec bbar = corrected_drift(c, half, Vec{x});
        CHECK(bbar[0] == doctest::Approx(-0.1 * x).epsilon(1e-12));
        // independent finite-difference route
        const Vec fd = oracles::fd_corrected_drift(c, half, Vec{x});
        CHECK(bbar[0] == doctest::Approx(fd[0]).epsilon(1e-5));
    }
}

TEST_CASE("corrected drift cross-checked against finite differences at random points") {
    const Coefficients c = coefficients_preset("trig", 2);
    const CorrectionMatrix lim = limit_correction(
        ApproxDriver::mcshane(Interpolant::from_name("linear"), Interpolant::from_name("quadratic"),
                              0.25),
        2);
    Xoshiro256pp rng(55);
    for (int i = 0; i < 100; ++i) {
        const Vec x = {rng.uniform01()};
        const Vec got = corrected_drift(c, lim.c, x);
        const Vec want = oracles::fd_corrected_drift(c, lim.c, x);
        CHECK(std::abs(got[0] - want[0]) <= 1e-5 * std::max(1.0, std::abs(want[0])));
    }
    check_coefficients(c, Vec{0.0}, Vec{1.0}, 100, 7);
}

TEST_CASE("ito integrator reduces to the half-line reflection of x0 + W") {
    TimeGrid g(1.0, 2048);
    const DomainShape D = DomainShape::half_line(0.0);
    const Coefficients c = unit_noise();
    const Matrix c_half = Matrix::identity(1, 0.5);
    const BrownianPath w = sample_brownian(g, 1, 321);
    const ReflectedSolution sol = integrate_ito_reflected(c, D, w, c_half, Vec{0.0});
    const ReflectedPair oracle = skorohod_halfline(w.path, 0.0);
    double sup = 0.0;
    for (std::int64_t j = 0; j <= g.n_fine; ++j) {
        sup = std::max(sup, std::abs(sol.x.value1(j) - oracle.x.value1(j)));
    }
    CHECK(sup < 1e-12);
}

TEST_CASE("deterministic reflected ODE: X(t) = max(1/2 - t, 0)") {
    TimeGrid g(1.0, 1024);
    const DomainShape D = DomainShape::interval(0.0, 1.0);
    const Coefficients c = pure_drift(-1.0);
    const BrownianPath w = sample_brownian(g, 1, 1); // unused by sigma = 0
    const ReflectedSolution sol =
        integrate_ito_reflected(c, D, w, Matrix::identity(1, 0.5), Vec{0.5});
    for (std::int64_t j = 0; j <= g.n_fine; ++j) {
        const double t = g.node_time(j);
        CHECK(sol.x.value1(j) == doctest::Approx(std::max(0.5 - t, 0.0)).epsilon(1e-12));
        CHECK(sol.k.value1(j) == doctest::Approx(std::max(t - 0.5, 0.0)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(integrate_ito_reflected(c, D, w, Matrix::identity(1, 0.5), Vec{1.5}),
                    DomainError);
}

TEST_CASE("sigma = 0: both integrators produce node-identical output") {
    TimeGrid g(1.0, 512);
    const DomainShape D = DomainShape::interval(0.0, 1.0);
    const Coefficients c = pure_drift(-0.8);
    const BrownianPath w = sample_brownian(g, 1, 5);
    const ApproxDriver drv =
        ApproxDriver::piecewise_linear(Interpolant::from_name("linear"), 1.0 / 16.0);
    const ReflectedSolution a = integrate_ito_reflected(c, D, w, Matrix(1, 1), Vec{0.5});
    const ReflectedSolution b = integrate_driven_reflected(c, D, drv, w, Vec{0.5});
    CHECK(a.x.raw() == b.x.raw());
    CHECK(a.k.raw() == b.k.raw());
}

TEST_CASE("driven integrator on a straight-line test path: step-halving consistency") {
    // w(t) = t * v is a C^1 path; X^delta solves a smooth reflected ODE.
    const DomainShape D = DomainShape::interval(0.0, 1.0);
    const Coefficients c = coefficients_preset("trig", 1);
    const double delta = 1.0 / 8.0;
    auto line_path = [](std::int64_t n) {
        TimeGrid g(1.0, n);
        BrownianPath w = zero_brownian(g, 1);
        for (std::int64_t j = 0; j <= n; ++j) w.path.node(j)[0] = 1.7 * g.node_time(j);
        return w;
    };
    const ApproxDriver drv = ApproxDriver::piecewise_linear(Interpolant::from_name("linear"), delta);
    const ReflectedSolution coarse = integrate_driven_reflected(c, D, drv, line_path(512), Vec{0.5});
    const ReflectedSolution mid = integrate_driven_reflected(c, D, drv, line_path(1024), Vec{0.5});
    const ReflectedSolution fine = integrate_driven_reflected(c, D, drv, line_path(2048), Vec{0.5});
    auto sup_on_common = [](const ReflectedSolution& a, const ReflectedSolution& b, std::int64_t f) {
        double sup = 0.0;
        for (std::int64_t j = 0; j <= a.x.grid().n_fine; ++j) {
            sup = std::max(sup, std::abs(a.x.value1(j) - b.x.value1(j * f)));
        }
        return sup;
    };
    const double e1 = sup_on_common(coarse, fine, 4);
    const double e2 = sup_on_common(mid, fine, 2);
    CHECK(e2 > 0.0);
    CHECK(e1 <= 4.0 * e2 + 1e-15); // Richardson-style: halving the step shrinks the gap
}

TEST_CASE("containment holds pathwise for the driven integrator") {
    TimeGrid g(1.0, 1024);
    const DomainShape D = DomainShape::interval(0.0, 1.0);
    const Coefficients c = coefficients_preset("additive", 1, {0.2, 0.0, 0.0});
    const ApproxDriver drv =
        ApproxDriver::piecewise_linear(Interpolant::from_name("linear"), 1.0 / 32.0);
    const BrownianPath w = sample_brownian(g, 1, 2718);
    const ReflectedSolution sol = integrate_driven_reflected(c, D, drv, w, Vec{0.5});
    for (std::int64_t j = 0; j <= g.n_fine; ++j) {
        CHECK(D.contains(sol.x.node(j)));
        CHECK(sol.x.value1(j) - (sol.x.value1(j) - sol.k.value1(j)) - sol.k.value1(j) == 0.0);
    }
    CHECK(std::is_sorted(sol.k_tv.begin(), sol.k_tv.end()));
}

TEST_CASE("coupled sup error examples") {
    TimeGrid g(1.0, 4);
    BrownianPath a = zero_brownian(g, 1), b = zero_brownian(g, 1);
    const DomainShape D = DomainShape::interval(-10.0, 10.0);
    const Coefficients c = pure_drift(0.0);
    const ReflectedSolution sa = integrate_ito_reflected(c, D, a, Matrix(1, 1), Vec{0.0});
    ReflectedSolution sb = sa;
    CHECK(coupled_sup_error(sa, sb, 2.0) == 0.0);
    for (std::int64_t j = 0; j <= 4; ++j) sb.x.node(j)[0] += 0.5;
    CHECK(coupled_sup_error(sa, sb, 2.0) == doctest::Approx(0.25));
    sb = sa;
    sb.x.node(2)[0] += 0.3;
    CHECK(coupled_sup_error(sa, sb, 4.0) == doctest::Approx(0.0081));
    ReflectedSolution other = sa;
    other.x = SampledPath(TimeGrid(1.0, 8), 1);
    CHECK_THROWS_AS(coupled_sup_error(sa, other, 2.0), NumericError);
}

TEST_CASE("ito reference converges under step refinement (fixed seed)") {
    const DomainShape D = DomainShape::interval(0.0, 1.0);
    const Coefficients c = coefficients_preset("trig", 1);
    const Matrix half = Matrix::identity(1, 0.5);
    const std::int64_t n0 = 512;
    TimeGrid fine_grid(1.0, 8 * n0);
    const BrownianPath w = sample_brownian(fine_grid, 1, 140);
    auto restrict = [&](std::int64_t factor) {
        TimeGrid g(1.0, 8 * n0 / factor);
        BrownianPath out{SampledPath(g, 1), w.seed, w.generator_id};
        for (std::int64_t j = 0; j <= g.n_fine; ++j) {
            out.path.node(j)[0] = w.path.value1(j * factor);
        }
        return out;
    };
    const ReflectedSolution s1 = integrate_ito_reflected(c, D, restrict(8), half, Vec{0.5});
    const ReflectedSolution s2 = integrate_ito_reflected(c, D, restrict(4), half, Vec{0.5});
    const ReflectedSolution s4 = integrate_ito_reflected(c, D, restrict(2), half, Vec{0.5});
    const ReflectedSolution s8 = integrate_ito_reflected(c, D, restrict(1), half, Vec{0.5});
    auto gap = [](const ReflectedSolution& a, const ReflectedSolution& b, std::int64_t f) {
        double sup = 0.0;
        for (std::int64_t j = 0; j <= a.x.grid().n_fine; ++j) {
            sup = std::max(sup, std::abs(a.x.value1(j) - b.x.value1(j * f)));
        }
        return sup;
    };
    const double d1 = gap(s1, s2, 2);
    const double d2 = gap(s2, s4, 2);
    const double d3 = gap(s4, s8, 2);
    CHECK(d1 > d2);
    CHECK(d2 > d3);
}
