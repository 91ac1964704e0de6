#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rsde/coefficients.hpp"
#include "rsde/domain.hpp"
#include "rsde/driver.hpp"
#include "rsde/integrate.hpp"
#include "rsde/stats.hpp"

namespace rsde {

/// Full specification of one convergence study. delta_schedule entries must
/// divide the horizon and be multiples of the reference step T/n_fine_ref;
/// q must satisfy 0 < q < 1/5 so that n(delta)^5 delta -> 0.
struct StudyConfig {
    std::string name = "study";
    DomainShape domain = DomainShape::interval(0.0, 1.0);
    Coefficients coeffs;
    ApproxDriver driver_proto = ApproxDriver::piecewise_linear(Interpolant::from_name("linear"), 0.0625);
    double horizon = 1.0;
    Vec x0;
    std::vector<double> delta_schedule;
    double q = 1.0 / 6.0; // n(delta) = ceil(delta^-q)
    std::vector<double> p_list = {2.0};
    std::int64_t n_paths = 2000;
    std::uint64_t base_seed = 0;
    std::int64_t n_fine_ref = 4096;
    bool zero_correction = false;     // force c = 0 in the reference drift
    std::int64_t n_corr_samples = 2000; // samples for the c(delta~, delta) diagnostic
    std::int64_t n_bias_paths = 100;    // paths for the proxy-bias diagnostic
    int threads = 0;

    void validate() const; // throws ConfigError with the violated constraint named
};

struct ReportRow {
    double delta;
    std::int64_t n_delta; // ceil(delta^-q)
    double p;
    double error;   // mean of sup-error^p over paths
    double stderr_;
    std::int64_t n_paths;
};

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    int n_used = 0;
    std::vector<double> excluded_deltas; // rows dropped because error <= 0
};

struct Diagnostics {
    /// mean sup^p gap between the reference at n_fine_ref and n_fine_ref/2
    std::vector<double> proxy_bias; // one entry per p
    /// |c_hat(delta~, delta) - c_limit|_F per delta (delta~ = n(delta) delta)
    std::vector<double> correction_deviation;
    std::vector<double> correction_deviation_stderr;
};

struct ConvergenceReport {
    StudyConfig config_echo;
    std::vector<ReportRow> rows; // sorted by delta descending, grouped by p
    std::vector<std::pair<double, SlopeFit>> slopes; // per p
    Diagnostics diagnostics;
};

ConvergenceReport run_convergence_study(const StudyConfig& cfg);

/// Least squares of log(error) on log(delta) for the rows of one p.
SlopeFit fit_rate(const std::vector<ReportRow>& rows_for_p);

/// Recursion identity check: residual of
///   k c(k d, d) - c*(k d, d) - (k-1) c((k-1) d, d)
/// against 4x the stderr propagated across the three independent estimates.
struct RecursionRow {
    int k;
    Matrix residual;
    Matrix band; // 4 * propagated stderr, per entry
    bool pass;
};

struct RecursionReport {
    std::vector<RecursionRow> rows;
    bool all_pass;
};

RecursionReport verify_recursion(const ApproxDriver& driver, int r, int k_max,
                                 std::int64_t n_samples, std::uint64_t seed,
                                 int substeps = kDefaultSubsteps, int threads = 0);

/// Trend of |c_hat(k(delta) delta, delta) - c_limit| over a delta schedule
/// with k(delta) = ceil(delta^-q). Passes when the smallest-delta deviation
/// lies below the largest-delta one minus their combined stderr.
struct TrendRow {
    double delta;
    std::int64_t k;
    double deviation;        // Frobenius norm
    double deviation_stderr; // delta-method stderr of the norm
};

struct TrendReport {
    std::vector<TrendRow> rows; // delta descending
    bool pass;
};

TrendReport verify_correction_trend(const ApproxDriver& proto, int r, const std::vector<double>& deltas,
                         double q, std::int64_t n_samples, std::uint64_t seed,
                         int substeps = kDefaultSubsteps, int threads = 0);

std::int64_t n_of_delta(double delta, double q);

} // namespace rsde
