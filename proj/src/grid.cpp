#include "rsde/grid.hpp"

#include <algorithm>
#include <cmath>

#include "rsde/linalg.hpp"

namespace rsde {

SampledPath::SampledPath(TimeGrid grid, int dim)
    : grid_(grid), dim_(dim),
      values_(static_cast<std::size_t>(grid.n_fine + 1) * dim, 0.0) {
    if (dim < 1) throw ConfigError("SampledPath: dim must be >= 1");
}

SampledPath::SampledPath(TimeGrid grid, int dim, std::vector<double> values)
    : grid_(grid), dim_(dim), values_(std::move(values)) {
    if (dim < 1) throw ConfigError("SampledPath: dim must be >= 1");
    if (values_.size() != static_cast<std::size_t>(grid.n_fine + 1) * dim) {
        throw ConfigError("SampledPath: values length must equal (n_fine + 1) * dim");
    }
}

namespace {

// Endpoint slack for time queries: a few ulp of the horizon.
double time_slack(const TimeGrid& g) { return 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, g.horizon); }

} // namespace

void SampledPath::eval(double t, std::span<double> out) const {
    const double slack = time_slack(grid_);
    if (t < -slack || t > grid_.horizon + slack) {
        throw NumericError("SampledPath::eval: time outside [0, T]");
    }
    t = std::clamp(t, 0.0, grid_.horizon);
    const double dt = grid_.dt();
    std::int64_t j = static_cast<std::int64_t>(t / dt);
    j = std::clamp<std::int64_t>(j, 0, grid_.n_fine - 1);
    const double t0 = grid_.node_time(j);
    const double t1 = grid_.node_time(j + 1);
    double theta = (t - t0) / (t1 - t0);
    theta = std::clamp(theta, 0.0, 1.0);
    const auto a = node(j);
    const auto b = node(j + 1);
    for (int i = 0; i < dim_; ++i) out[i] = a[i] + theta * (b[i] - a[i]);
}

double SampledPath::eval1(double t) const {
    double v;
    eval(t, {&v, 1});
    return v;
}

double total_variation(const SampledPath& p, double s, double t) {
    if (s > t) throw NumericError("total_variation: require s <= t");
    const TimeGrid& g = p.grid();
    const double slack = 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, g.horizon);
    if (s < -slack || t > g.horizon + slack) {
        throw NumericError("total_variation: range outside [0, T]");
    }
    s = std::clamp(s, 0.0, g.horizon);
    t = std::clamp(t, 0.0, g.horizon);
    const double dt = g.dt();
    const std::int64_t j_lo = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::ceil(s / dt - 1e-12)), 0, g.n_fine);
    const std::int64_t j_hi = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor(t / dt + 1e-12)), 0, g.n_fine);
    const int d = p.dim();
    Vec a(d), b(d);
    double tv = 0.0;
    if (j_lo > j_hi) {
        // both endpoints inside one segment
        p.eval(s, a);
        p.eval(t, b);
        return dist2(a, b);
    }
    p.eval(s, a);
    tv += dist2(a, p.node(j_lo));
    for (std::int64_t j = j_lo; j < j_hi; ++j) {
        tv += dist2(p.node(j), p.node(j + 1));
    }
    p.eval(t, b);
    tv += dist2(p.node(j_hi), b);
    return tv;
}

std::vector<double> prefix_total_variation(const SampledPath& p) {
    std::vector<double> out(static_cast<std::size_t>(p.n_nodes()), 0.0);
    for (std::int64_t j = 1; j < p.n_nodes(); ++j) {
        out[j] = out[j - 1] + dist2(p.node(j - 1), p.node(j));
    }
    return out;
}

} // namespace rsde
