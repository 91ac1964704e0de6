#pragma once

#include <cstdint>
#include <vector>

#include "rsde/driver.hpp"
#include "rsde/linalg.hpp"

namespace rsde {

/// Candidate limit object: c = s + I/2 with skew-symmetric s, both held
/// exactly (c is constructed from s entry-by-entry, s is antisymmetrized
/// bit-exactly). Provenance records whether s is the analytic limit or a
/// Monte Carlo estimate.
struct CorrectionMatrix {
    enum class Provenance { limit, monte_carlo };

    int r = 0;
    Matrix c;
    Matrix s;
    Provenance provenance = Provenance::limit;
    std::int64_t n_samples = 0;
    Matrix stderr_s; // per-entry standard error (monte_carlo only)

    static CorrectionMatrix from_skew(Matrix skew, Provenance prov,
                                      std::int64_t n = 0, Matrix stderr_s = {});
};

/// Plain r x r Monte Carlo estimate with per-entry standard errors. Used for
/// the finite-(t, delta) statistics c_ij(t, delta), c*_ij(t, delta), whose
/// symmetric part genuinely differs from I/2 at finite delta.
struct MatrixEstimate {
    Matrix value;
    Matrix stderr_;
    std::int64_t n_samples = 0;
};

/// Per-path values of the three statistics' integrands on one sampled path
/// (no expectation taken). Exposed so degenerate single-path inputs can be
/// checked directly.
struct PathStatistics {
    Matrix s_integral;      // (1/2t) int_0^t (G^i Gdot^j - G^j Gdot^i) ds
    Matrix c_integral;      // (1/t)  int_0^t Gdot^i (G^j(t) - G^j(s)) ds
    Matrix c_star_integral; // (1/d)  int_0^d Gdot^i (G^j(t) - G^j(s)) ds
};

/// Substep count m per delta for the estimators' internal fine grid
/// (dt = delta / m). The midpoint rule runs on this grid.
inline constexpr int kDefaultSubsteps = 16;

PathStatistics compute_path_statistics(const ApproxDriver& driver, const BrownianPath& w, double t);

/// Monte Carlo estimate of s_ij(t, delta) over N fresh Brownian paths.
/// The returned s is antisymmetric bit-exactly by construction of the
/// integrand, and c = s + I/2 exactly.
CorrectionMatrix estimate_s(const ApproxDriver& driver, int r, double t, std::int64_t n_samples,
                            std::uint64_t seed, int substeps = kDefaultSubsteps, int threads = 0);

struct CEstimate {
    MatrixEstimate raw;        // the genuine c_ij(t, delta) statistic
    CorrectionMatrix induced;  // skew part of raw packaged as a candidate limit
};

CEstimate estimate_c(const ApproxDriver& driver, int r, double t, std::int64_t n_samples,
                     std::uint64_t seed, int substeps = kDefaultSubsteps, int threads = 0);

MatrixEstimate estimate_c_star(const ApproxDriver& driver, int r, double t, std::int64_t n_samples,
                               std::uint64_t seed, int substeps = kDefaultSubsteps, int threads = 0);

/// Analytic limit per family: piecewise-linear and mollifier have s = 0;
/// McShane has s_12 = -s_21 = (1 - 2 int_0^1 f1' f2 ds) / pi.
CorrectionMatrix limit_correction(const ApproxDriver& driver, int r);

/// Moment scaling rows for E|G^delta(0)|^{2p}: one row per delta with the
/// Monte Carlo estimate, its standard error, and estimate/delta^p.
struct ScalingRow {
    double delta;
    double estimate;
    double stderr_;
    double ratio; // estimate / delta^p
};

struct ScalingCheck {
    int p;
    std::vector<ScalingRow> rows;
    /// max/min of the nonzero ratios (0 when everything vanished identically)
    double ratio_spread() const;
};

/// Build a driver of the same kind/parameters but a different mesh delta.
ApproxDriver with_delta(const ApproxDriver& proto, double delta);

ScalingCheck moment_scaling_check(const ApproxDriver& proto, int r, int p,
                                   const std::vector<double>& deltas, std::int64_t n_samples,
                                   std::uint64_t seed, int substeps = kDefaultSubsteps,
                                   int threads = 0);

} // namespace rsde
