#include "rsde/study.hpp"

#include <algorithm>
#include <cmath>

#include "rsde/parallel.hpp"
#include "rsde/rng.hpp"

namespace rsde {

std::int64_t n_of_delta(double delta, double q) {
    return static_cast<std::int64_t>(std::ceil(std::pow(delta, -q) - 1e-12));
}

void StudyConfig::validate() const {
    if (!(horizon > 0.0)) throw ConfigError("study: horizon must be positive");
    if (!(q > 0.0 && q < 0.2)) {
        throw ConfigError("study: n_delta_rule exponent must satisfy 0 < q < 1/5 "
                          "(so that n(delta)^5 delta -> 0); got q = " + std::to_string(q));
    }
    if (delta_schedule.empty()) throw ConfigError("study: empty delta schedule");
    if (n_fine_ref < 1) throw ConfigError("study: n_fine_ref must be >= 1");
    if (n_paths < 1) throw ConfigError("study: n_paths must be >= 1");
    if (p_list.empty()) throw ConfigError("study: empty p list");
    if (!domain.bounded()) {
        throw ConfigError("study: the convergence study requires a bounded domain "
                          "(the half-line is admitted as a test oracle only)");
    }
    if (static_cast<int>(x0.size()) != coeffs.d) throw ConfigError("study: x0 dimension mismatch");
    if (!domain.contains(x0)) throw ConfigError("study: x0 outside the domain closure");
    if (driver_proto.required_r() != 0 && coeffs.r != driver_proto.required_r()) {
        throw ConfigError("study: " + driver_proto.kind_name() + " driver requires r = " +
                          std::to_string(driver_proto.required_r()));
    }
    const double dt_ref = horizon / static_cast<double>(n_fine_ref);
    for (double delta : delta_schedule) {
        if (!(delta > 0.0)) throw ConfigError("study: deltas must be positive");
        const double m = horizon / delta;
        if (std::abs(m - std::round(m)) > 1e-9 * std::max(1.0, m)) {
            throw ConfigError("study: every delta must divide the horizon T");
        }
        const double k = delta / dt_ref;
        if (std::round(k) < 1.0 || std::abs(k - std::round(k)) > 1e-9 * std::max(1.0, k)) {
            throw ConfigError("study: every delta must be a multiple of T/n_fine_ref");
        }
    }
}

SlopeFit fit_rate(const std::vector<ReportRow>& rows_for_p) {
    SlopeFit fit;
    std::vector<double> xs, ys;
    for (const auto& row : rows_for_p) {
        if (!(row.error > 0.0)) {
            fit.excluded_deltas.push_back(row.delta);
            continue;
        }
        xs.push_back(std::log(row.delta));
        ys.push_back(std::log(row.error));
    }
    const int n = static_cast<int>(xs.size());
    fit.n_used = n;
    if (n < 2) return fit;
    double mx = 0.0, my = 0.0;
    for (int i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0.0) return fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (n > 2) {
        double ss_res = 0.0;
        for (int i = 0; i < n; ++i) {
            const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
            ss_res += r * r;
        }
        fit.slope_stderr = std::sqrt(ss_res / (n - 2) / sxx);
    }
    return fit;
}

namespace {

// Deterministic seed streams: path seeds live under (base, 1, delta_idx, i);
// diagnostics under (base, 2, ...) so no stream is ever reused.
constexpr std::uint64_t kPathStream = 1;
constexpr std::uint64_t kDiagStream = 2;

} // namespace

ConvergenceReport run_convergence_study(const StudyConfig& cfg) {
    cfg.validate();
    ConvergenceReport report;
    report.config_echo = cfg;

    const TimeGrid ref_grid(cfg.horizon, cfg.n_fine_ref);
    const CorrectionMatrix climit = limit_correction(cfg.driver_proto, cfg.coeffs.r);
    const Matrix c_used = cfg.zero_correction ? Matrix(cfg.coeffs.r, cfg.coeffs.r) : climit.c;

    std::vector<double> deltas = cfg.delta_schedule;
    std::sort(deltas.begin(), deltas.end(), std::greater<double>());

    const std::size_t n_p = cfg.p_list.size();
    // rows grouped by p, each delta-descending
    std::vector<std::vector<ReportRow>> rows_by_p(n_p);

    for (std::size_t di = 0; di < deltas.size(); ++di) {
        const double delta = deltas[di];
        const ApproxDriver driver = with_delta(cfg.driver_proto, delta);
        driver.validate_grid(ref_grid);
        std::vector<std::vector<double>> sup_p(n_p, std::vector<double>(cfg.n_paths));
        parallel_chunks(cfg.n_paths, cfg.threads, [&](std::int64_t lo, std::int64_t hi) {
            for (std::int64_t i = lo; i < hi; ++i) {
                const std::uint64_t s = derive_seed(cfg.base_seed, kPathStream,
                                                    di * static_cast<std::uint64_t>(cfg.n_paths) + i);
                const BrownianPath w = sample_brownian(ref_grid, cfg.coeffs.r, s);
                const ReflectedSolution ito =
                    integrate_ito_reflected(cfg.coeffs, cfg.domain, w, c_used, cfg.x0);
                const ReflectedSolution drv =
                    integrate_driven_reflected(cfg.coeffs, cfg.domain, driver, w, cfg.x0);
                for (std::size_t pi = 0; pi < n_p; ++pi) {
                    sup_p[pi][i] = coupled_sup_error(ito, drv, cfg.p_list[pi]);
                }
            }
        });
        for (std::size_t pi = 0; pi < n_p; ++pi) {
            const auto ms = mean_stderr(sup_p[pi]);
            rows_by_p[pi].push_back({delta, n_of_delta(delta, cfg.q), cfg.p_list[pi], ms.mean,
                                     ms.stderr_, cfg.n_paths});
        }
    }

    for (std::size_t pi = 0; pi < n_p; ++pi) {
        for (const auto& row : rows_by_p[pi]) report.rows.push_back(row);
        report.slopes.emplace_back(cfg.p_list[pi], fit_rate(rows_by_p[pi]));
    }

    // Diagnostics 1: proxy bias of the reference layer. Integrate the same
    // Brownian paths at n_fine_ref and n_fine_ref/2 and record the mean sup^p
    // gap on the common nodes.
    if (cfg.n_fine_ref % 2 == 0 && cfg.n_bias_paths > 0) {
        const std::int64_t nb = std::min<std::int64_t>(cfg.n_bias_paths, cfg.n_paths);
        const TimeGrid half_grid(cfg.horizon, cfg.n_fine_ref / 2);
        std::vector<std::vector<double>> gap_p(n_p, std::vector<double>(nb));
        parallel_chunks(nb, cfg.threads, [&](std::int64_t lo, std::int64_t hi) {
            for (std::int64_t i = lo; i < hi; ++i) {
                const std::uint64_t s = derive_seed(cfg.base_seed, kDiagStream, i);
                const BrownianPath w = sample_brownian(ref_grid, cfg.coeffs.r, s);
                BrownianPath w_half{SampledPath(half_grid, cfg.coeffs.r), w.seed, w.generator_id};
                for (std::int64_t j = 0; j <= half_grid.n_fine; ++j) {
                    const auto src = w.path.node(2 * j);
                    auto dst = w_half.path.node(j);
                    std::copy(src.begin(), src.end(), dst.begin());
                }
                const ReflectedSolution fine =
                    integrate_ito_reflected(cfg.coeffs, cfg.domain, w, c_used, cfg.x0);
                const ReflectedSolution coarse =
                    integrate_ito_reflected(cfg.coeffs, cfg.domain, w_half, c_used, cfg.x0);
                for (std::size_t pi = 0; pi < n_p; ++pi) {
                    double sup = 0.0;
                    for (std::int64_t j = 0; j <= half_grid.n_fine; ++j) {
                        sup = std::max(sup, dist2(fine.x.node(2 * j), coarse.x.node(j)));
                    }
                    gap_p[pi][i] = std::pow(sup, cfg.p_list[pi]);
                }
            }
        });
        for (std::size_t pi = 0; pi < n_p; ++pi) {
            report.diagnostics.proxy_bias.push_back(mean_stderr(gap_p[pi]).mean);
        }
    }

    // Diagnostics 2: correction-matrix deviation |c_hat(delta~, delta) - c|
    // with delta~ = n(delta) * delta, per delta.
    if (cfg.n_corr_samples >= 100) {
        for (std::size_t di = 0; di < deltas.size(); ++di) {
            const double delta = deltas[di];
            const std::int64_t n_delta = n_of_delta(delta, cfg.q);
            const double t = static_cast<double>(n_delta) * delta;
            const ApproxDriver driver = with_delta(cfg.driver_proto, delta);
            const CEstimate ce = estimate_c(driver, cfg.coeffs.r, t, cfg.n_corr_samples,
                                            derive_seed(cfg.base_seed, kDiagStream, 1000 + di),
                                            kDefaultSubsteps, cfg.threads);
            const Matrix dev = ce.raw.value - climit.c;
            report.diagnostics.correction_deviation.push_back(dev.frobenius_norm());
            double var = 0.0;
            const double nrm = dev.frobenius_norm();
            for (int i = 0; i < dev.rows(); ++i) {
                for (int j = 0; j < dev.cols(); ++j) {
                    const double wgt = nrm > 0.0 ? dev(i, j) / nrm : 1.0;
                    var += wgt * wgt * ce.raw.stderr_(i, j) * ce.raw.stderr_(i, j);
                }
            }
            report.diagnostics.correction_deviation_stderr.push_back(std::sqrt(var));
        }
    }

    return report;
}

RecursionReport verify_recursion(const ApproxDriver& driver, int r, int k_max,
                                 std::int64_t n_samples, std::uint64_t seed, int substeps,
                                 int threads) {
    if (k_max < 2) throw ConfigError("verify_recursion: require k_max >= 2");
    const double delta = driver.delta();
    // independent estimates per (statistic, k); seeds never shared
    std::vector<MatrixEstimate> c_of_k(static_cast<std::size_t>(k_max) + 1);
    std::vector<MatrixEstimate> cstar_of_k(static_cast<std::size_t>(k_max) + 1);
    for (int k = 1; k <= k_max; ++k) {
        c_of_k[k] = estimate_c(driver, r, k * delta, n_samples, derive_seed(seed, 10, k), substeps,
                               threads)
                        .raw;
        if (k >= 2) {
            cstar_of_k[k] = estimate_c_star(driver, r, k * delta, n_samples,
                                            derive_seed(seed, 20, k), substeps, threads);
        }
    }
    RecursionReport report;
    report.all_pass = true;
    for (int k = 2; k <= k_max; ++k) {
        RecursionRow row;
        row.k = k;
        row.residual = Matrix(r, r);
        row.band = Matrix(r, r);
        row.pass = true;
        for (int i = 0; i < r; ++i) {
            for (int j = 0; j < r; ++j) {
                const double res = k * c_of_k[k].value(i, j) - cstar_of_k[k].value(i, j) -
                                   (k - 1) * c_of_k[k - 1].value(i, j);
                const double se =
                    std::sqrt(std::pow(k * c_of_k[k].stderr_(i, j), 2) +
                              std::pow(cstar_of_k[k].stderr_(i, j), 2) +
                              std::pow((k - 1) * c_of_k[k - 1].stderr_(i, j), 2));
                row.residual(i, j) = res;
                row.band(i, j) = 4.0 * se;
                if (std::abs(res) > 4.0 * se) row.pass = false;
            }
        }
        report.all_pass = report.all_pass && row.pass;
        report.rows.push_back(std::move(row));
    }
    return report;
}

TrendReport verify_correction_trend(const ApproxDriver& proto, int r, const std::vector<double>& deltas_in,
                         double q, std::int64_t n_samples, std::uint64_t seed, int substeps,
                         int threads) {
    if (!(q > 0.0 && q < 0.2)) {
        throw ConfigError("verify_correction_trend: require 0 < q < 1/5; got q = " + std::to_string(q));
    }
    std::vector<double> deltas = deltas_in;
    std::sort(deltas.begin(), deltas.end(), std::greater<double>());
    const CorrectionMatrix climit = limit_correction(proto, r);
    TrendReport report;
    for (std::size_t di = 0; di < deltas.size(); ++di) {
        const double delta = deltas[di];
        const std::int64_t k = n_of_delta(delta, q);
        const double t = static_cast<double>(k) * delta;
        const ApproxDriver driver = with_delta(proto, delta);
        const CEstimate ce =
            estimate_c(driver, r, t, n_samples, derive_seed(seed, di), substeps, threads);
        const Matrix dev = ce.raw.value - climit.c;
        const double nrm = dev.frobenius_norm();
        double var = 0.0;
        for (int i = 0; i < r; ++i) {
            for (int j = 0; j < r; ++j) {
                const double wgt = nrm > 0.0 ? dev(i, j) / nrm : 1.0;
                var += wgt * wgt * ce.raw.stderr_(i, j) * ce.raw.stderr_(i, j);
            }
        }
        report.rows.push_back({delta, k, nrm, std::sqrt(var)});
    }
    const auto& first = report.rows.front();
    const auto& last = report.rows.back();
    const double combined = std::hypot(first.deviation_stderr, last.deviation_stderr);
    report.pass = last.deviation < first.deviation - combined;
    return report;
}

} // namespace rsde
