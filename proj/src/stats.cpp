#include "rsde/stats.hpp"

#include <algorithm>
#include <cmath>

#include "rsde/parallel.hpp"
#include "rsde/quadrature.hpp"

namespace rsde {

CorrectionMatrix CorrectionMatrix::from_skew(Matrix skew, Provenance prov, std::int64_t n,
                                             Matrix stderr_s) {
    const int r = skew.rows();
    if (skew.cols() != r) throw ConfigError("CorrectionMatrix: skew must be square");
    CorrectionMatrix cm;
    cm.r = r;
    cm.s = Matrix(r, r);
    // enforce exact antisymmetry from the upper triangle
    for (int i = 0; i < r; ++i) {
        for (int j = i + 1; j < r; ++j) {
            cm.s(i, j) = skew(i, j);
            cm.s(j, i) = -skew(i, j);
        }
    }
    cm.c = cm.s;
    for (int i = 0; i < r; ++i) cm.c(i, i) += 0.5;
    cm.provenance = prov;
    cm.n_samples = n;
    cm.stderr_s = stderr_s.rows() == r ? std::move(stderr_s) : Matrix(r, r);
    return cm;
}

namespace {

struct EstimatorGrid {
    TimeGrid grid;      // horizon t + delta, step delta/substeps
    std::int64_t j_t;   // index count covering [0, t]
    std::int64_t j_delta; // index count covering [0, delta]
    double dt;
};

EstimatorGrid make_estimator_grid(const ApproxDriver& driver, double t, int substeps) {
    if (substeps < 1) throw ConfigError("estimator: require substeps >= 1");
    const double delta = driver.delta();
    const double dt = delta / substeps;
    const double jt_real = t / dt;
    const auto j_t = static_cast<std::int64_t>(std::round(jt_real));
    if (j_t < substeps || std::abs(jt_real - static_cast<double>(j_t)) > 1e-9 * std::max(1.0, jt_real)) {
        throw ConfigError("estimator: t must be a multiple of delta/substeps and >= delta");
    }
    EstimatorGrid eg;
    eg.j_t = j_t;
    eg.j_delta = substeps;
    eg.grid = TimeGrid(t + delta, j_t + substeps);
    eg.dt = eg.grid.dt();
    return eg;
}

void check_samples(std::int64_t n) {
    if (n < 100) throw ConfigError("estimator: require at least 100 samples");
}

// Integrand accumulation shared by the three statistics: midpoint rule over
// [0, t] on the estimator grid, with the inner [0, delta] range split out for
// the c* statistic.
struct PathAccum {
    // upper-triangle skew integrand, then full matrices for c and c*
    std::vector<double> s_upper; // i<j pairs, row-major order
    Matrix c;
    Matrix c_star;
};

void accumulate_path(const ApproxDriver& driver, const BrownianPath& w, const EstimatorGrid& eg,
                     double t, Vec& g, Vec& gd, Vec& g_end, PathAccum& out) {
    const int r = w.r();
    const double delta = driver.delta();
    driver.eval_G(w, t, g_end);
    out.c = Matrix(r, r);
    out.c_star = Matrix(r, r);
    out.s_upper.assign(static_cast<std::size_t>(r) * (r - 1) / 2, 0.0);
    const double dt = eg.dt;
    for (std::int64_t j = 0; j < eg.j_t; ++j) {
        const double s_mid = (static_cast<double>(j) + 0.5) * dt;
        driver.eval_G(w, s_mid, g);
        driver.eval_G_dot(w, s_mid, gd);
        std::size_t pair = 0;
        for (int i = 0; i < r; ++i) {
            for (int l = i + 1; l < r; ++l) {
                out.s_upper[pair++] += (g[i] * gd[l] - g[l] * gd[i]) * dt;
            }
        }
        const bool in_delta = j < eg.j_delta;
        for (int i = 0; i < r; ++i) {
            for (int l = 0; l < r; ++l) {
                const double v = gd[i] * (g_end[l] - g[l]) * dt;
                out.c(i, l) += v;
                if (in_delta) out.c_star(i, l) += v;
            }
        }
    }
    const double inv2t = 1.0 / (2.0 * t);
    for (double& v : out.s_upper) v *= inv2t;
    for (int i = 0; i < r; ++i) {
        for (int l = 0; l < r; ++l) {
            out.c(i, l) /= t;
            out.c_star(i, l) /= delta;
        }
    }
}

struct SampleTables {
    // one column per sample so parallel fills are race-free and the
    // aggregation order is fixed
    std::vector<std::vector<double>> s_upper; // [pair][sample]
    std::vector<std::vector<double>> c;       // [i*r+l][sample]
    std::vector<std::vector<double>> c_star;
};

SampleTables run_samples(const ApproxDriver& driver, int r, double t, std::int64_t n_samples,
                         std::uint64_t seed, int substeps, int threads) {
    check_samples(n_samples);
    if (driver.required_r() != 0 && r != driver.required_r()) {
        throw ConfigError(driver.kind_name() + " driver requires r = " +
                          std::to_string(driver.required_r()));
    }
    const EstimatorGrid eg = make_estimator_grid(driver, t, substeps);
    SampleTables tables;
    const std::size_t n_pairs = static_cast<std::size_t>(r) * (r - 1) / 2;
    tables.s_upper.assign(n_pairs, std::vector<double>(n_samples));
    tables.c.assign(static_cast<std::size_t>(r) * r, std::vector<double>(n_samples));
    tables.c_star.assign(static_cast<std::size_t>(r) * r, std::vector<double>(n_samples));
    parallel_chunks(n_samples, threads, [&](std::int64_t lo, std::int64_t hi) {
        Vec g, gd, g_end;
        PathAccum acc;
        for (std::int64_t k = lo; k < hi; ++k) {
            // fresh, independent path per sample
            const BrownianPath w = sample_brownian(eg.grid, r, derive_seed(seed, k));
            accumulate_path(driver, w, eg, t, g, gd, g_end, acc);
            for (std::size_t p = 0; p < n_pairs; ++p) tables.s_upper[p][k] = acc.s_upper[p];
            for (int i = 0; i < r; ++i) {
                for (int l = 0; l < r; ++l) {
                    tables.c[static_cast<std::size_t>(i) * r + l][k] = acc.c(i, l);
                    tables.c_star[static_cast<std::size_t>(i) * r + l][k] = acc.c_star(i, l);
                }
            }
        }
    });
    return tables;
}

MatrixEstimate reduce_matrix(const std::vector<std::vector<double>>& cols, int r,
                             std::int64_t n_samples) {
    MatrixEstimate est;
    est.value = Matrix(r, r);
    est.stderr_ = Matrix(r, r);
    est.n_samples = n_samples;
    for (int i = 0; i < r; ++i) {
        for (int l = 0; l < r; ++l) {
            const auto ms = mean_stderr(cols[static_cast<std::size_t>(i) * r + l]);
            est.value(i, l) = ms.mean;
            est.stderr_(i, l) = ms.stderr_;
        }
    }
    return est;
}

} // namespace

PathStatistics compute_path_statistics(const ApproxDriver& driver, const BrownianPath& w, double t) {
    const int r = w.r();
    const double delta = driver.delta();
    const double dtg = w.grid().dt();
    const auto substeps = static_cast<int>(std::round(delta / dtg));
    EstimatorGrid eg;
    eg.j_delta = substeps;
    eg.j_t = static_cast<std::int64_t>(std::round(t / dtg));
    eg.grid = w.grid();
    eg.dt = dtg;
    if (eg.j_t < substeps) throw ConfigError("compute_path_statistics: require t >= delta");
    Vec g, gd, g_end;
    PathAccum acc;
    accumulate_path(driver, w, eg, t, g, gd, g_end, acc);
    PathStatistics ps;
    ps.s_integral = Matrix(r, r);
    std::size_t pair = 0;
    for (int i = 0; i < r; ++i) {
        for (int l = i + 1; l < r; ++l) {
            ps.s_integral(i, l) = acc.s_upper[pair];
            ps.s_integral(l, i) = -acc.s_upper[pair];
            ++pair;
        }
    }
    ps.c_integral = acc.c;
    ps.c_star_integral = acc.c_star;
    return ps;
}

CorrectionMatrix estimate_s(const ApproxDriver& driver, int r, double t, std::int64_t n_samples,
                            std::uint64_t seed, int substeps, int threads) {
    const SampleTables tables = run_samples(driver, r, t, n_samples, seed, substeps, threads);
    Matrix skew(r, r);
    Matrix err(r, r);
    std::size_t pair = 0;
    for (int i = 0; i < r; ++i) {
        for (int l = i + 1; l < r; ++l) {
            const auto ms = mean_stderr(tables.s_upper[pair++]);
            skew(i, l) = ms.mean;
            err(i, l) = ms.stderr_;
            err(l, i) = ms.stderr_;
        }
    }
    return CorrectionMatrix::from_skew(skew, CorrectionMatrix::Provenance::monte_carlo, n_samples,
                                       err);
}

CEstimate estimate_c(const ApproxDriver& driver, int r, double t, std::int64_t n_samples,
                     std::uint64_t seed, int substeps, int threads) {
    const SampleTables tables = run_samples(driver, r, t, n_samples, seed, substeps, threads);
    CEstimate out;
    out.raw = reduce_matrix(tables.c, r, n_samples);
    // skew part of the raw statistic as a candidate limit object
    Matrix skew(r, r);
    Matrix err(r, r);
    for (int i = 0; i < r; ++i) {
        for (int l = i + 1; l < r; ++l) {
            skew(i, l) = 0.5 * (out.raw.value(i, l) - out.raw.value(l, i));
            const double e = 0.5 * std::hypot(out.raw.stderr_(i, l), out.raw.stderr_(l, i));
            err(i, l) = e;
            err(l, i) = e;
        }
    }
    out.induced = CorrectionMatrix::from_skew(skew, CorrectionMatrix::Provenance::monte_carlo,
                                              n_samples, err);
    return out;
}

MatrixEstimate estimate_c_star(const ApproxDriver& driver, int r, double t, std::int64_t n_samples,
                               std::uint64_t seed, int substeps, int threads) {
    const SampleTables tables = run_samples(driver, r, t, n_samples, seed, substeps, threads);
    return reduce_matrix(tables.c_star, r, n_samples);
}

CorrectionMatrix limit_correction(const ApproxDriver& driver, int r) {
    if (driver.kind() == ApproxDriver::Kind::mcshane) {
        if (r != 2) throw ConfigError("mcshane driver requires r = 2");
        const Interpolant& f1 = driver.f(0);
        const Interpolant& f2 = driver.f(1);
        const double inner = adaptive_simpson(
            [&](double u) { return f1.deriv(u) * f2.value(u); }, 0.0, 1.0, 1e-12);
        Matrix skew(2, 2);
        skew(0, 1) = (1.0 - 2.0 * inner) / M_PI;
        return CorrectionMatrix::from_skew(skew, CorrectionMatrix::Provenance::limit);
    }
    return CorrectionMatrix::from_skew(Matrix(r, r), CorrectionMatrix::Provenance::limit);
}

ApproxDriver with_delta(const ApproxDriver& proto, double delta) {
    switch (proto.kind()) {
        case ApproxDriver::Kind::piecewise_linear:
            return ApproxDriver::piecewise_linear(proto.interpolants(), delta);
        case ApproxDriver::Kind::mollifier:
            return ApproxDriver::mollifier(proto.kernel(), delta, proto.quad_points());
        case ApproxDriver::Kind::mcshane:
            return ApproxDriver::mcshane(proto.f(0), proto.f(1), delta);
    }
    throw ConfigError("with_delta: unknown driver kind");
}

double ScalingCheck::ratio_spread() const {
    double lo = 0.0, hi = 0.0;
    bool any = false;
    for (const auto& row : rows) {
        if (row.ratio == 0.0) continue;
        if (!any) {
            lo = hi = row.ratio;
            any = true;
        } else {
            lo = std::min(lo, row.ratio);
            hi = std::max(hi, row.ratio);
        }
    }
    return any ? hi / lo : 0.0;
}

ScalingCheck moment_scaling_check(const ApproxDriver& proto, int r, int p,
                                   const std::vector<double>& deltas, std::int64_t n_samples,
                                   std::uint64_t seed, int substeps, int threads) {
    if (p != 1 && p != 2) throw ConfigError("scaling check: p must be 1 or 2");
    check_samples(n_samples);
    ScalingCheck out;
    out.p = p;
    for (std::size_t di = 0; di < deltas.size(); ++di) {
        const double delta = deltas[di];
        const ApproxDriver driver = with_delta(proto, delta);
        const TimeGrid grid(delta, substeps);
        std::vector<double> vals(n_samples);
        parallel_chunks(n_samples, threads, [&](std::int64_t lo, std::int64_t hi) {
            Vec g0;
            for (std::int64_t k = lo; k < hi; ++k) {
                const BrownianPath w = sample_brownian(grid, r, derive_seed(seed, di, k));
                driver.eval_G(w, 0.0, g0);
                const double n2 = dot(g0, g0);
                vals[k] = (p == 1) ? n2 : n2 * n2;
            }
        });
        const auto ms = mean_stderr(vals);
        const double dp = std::pow(delta, p);
        out.rows.push_back({delta, ms.mean, ms.stderr_, ms.mean / dp});
    }
    return out;
}

} // namespace rsde
