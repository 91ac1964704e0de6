#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rsde/errors.hpp"

namespace rsde {

/// Uniform grid on [0, T]. Node k sits at k*T/n_fine, computed exactly in that
/// form so node times carry no accumulated rounding.
struct TimeGrid {
    double horizon = 1.0;
    std::int64_t n_fine = 1;

    TimeGrid() = default;
    TimeGrid(double T, std::int64_t n) : horizon(T), n_fine(n) {
        if (!(T > 0.0)) throw ConfigError("TimeGrid: horizon must be positive");
        if (n < 1) throw ConfigError("TimeGrid: n_fine must be >= 1");
    }

    double dt() const { return horizon / static_cast<double>(n_fine); }
    double node_time(std::int64_t k) const {
        return static_cast<double>(k) * horizon / static_cast<double>(n_fine);
    }

    bool operator==(const TimeGrid& o) const {
        return horizon == o.horizon && n_fine == o.n_fine;
    }
};

/// Vector-valued path sampled on a TimeGrid, linear between nodes.
class SampledPath {
public:
    SampledPath() = default;
    SampledPath(TimeGrid grid, int dim);
    SampledPath(TimeGrid grid, int dim, std::vector<double> values);

    const TimeGrid& grid() const { return grid_; }
    int dim() const { return dim_; }
    std::int64_t n_nodes() const { return grid_.n_fine + 1; }

    std::span<double> node(std::int64_t k) {
        return {values_.data() + static_cast<std::size_t>(k) * dim_, static_cast<std::size_t>(dim_)};
    }
    std::span<const double> node(std::int64_t k) const {
        return {values_.data() + static_cast<std::size_t>(k) * dim_, static_cast<std::size_t>(dim_)};
    }

    /// Scalar access for 1-d paths.
    double value1(std::int64_t k) const { return values_[static_cast<std::size_t>(k) * dim_]; }

    /// Linear interpolation at time t; throws NumericError outside [0, T]
    /// (up to a few ulp of slack at the endpoints).
    void eval(double t, std::span<double> out) const;
    double eval1(double t) const;

    std::vector<double>& raw() { return values_; }
    const std::vector<double>& raw() const { return values_; }

private:
    TimeGrid grid_;
    int dim_ = 0;
    std::vector<double> values_;
};

/// Total variation of the (piecewise-linear) path over [s, t], exact for the
/// stored polyline: interior node increments plus the partial end segments.
double total_variation(const SampledPath& p, double s, double t);

/// Node-resolution prefix total variation: out[k] = TV over [0, node k].
std::vector<double> prefix_total_variation(const SampledPath& p);

} // namespace rsde
