#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rsde/grid.hpp"
#include "rsde/linalg.hpp"

namespace rsde {

namespace tol {
// Numerical tolerances for the reflection machinery. All sit far below the
// statistical resolution of any experiment in this project.
inline constexpr double proj = 1e-10;       // Dykstra stopping threshold
inline constexpr double interior_rel = 1e-9; // interior test, relative to domain scale
inline constexpr double cone = 1e-8;        // normal-cone inner-product slack
inline constexpr int max_proj_iter = 10000; // Dykstra sweep limit
} // namespace tol

struct ProjectOptions {
    double stop = tol::proj;
    int max_iter = tol::max_proj_iter;
};

/// Closed convex region with projection, membership and boundary-distance
/// queries. All kinds except the half-line are bounded; the half-line is kept
/// as a test oracle only (it carries the one closed-form reflection map).
class DomainShape {
public:
    enum class Kind { half_line, interval, box, ball, polytope };

    static DomainShape half_line(double origin);
    static DomainShape interval(double a, double b);
    static DomainShape box(Vec lo, Vec hi);
    static DomainShape ball(Vec center, double radius);
    /// Half-space intersection {x : n_i . x <= d_i}. Normals are normalized to
    /// unit length (offsets rescaled accordingly). The caller must supply a
    /// strict interior witness; boundedness is checked by direction sampling.
    static DomainShape polytope(std::vector<Vec> normals, Vec offsets, Vec interior_witness);

    Kind kind() const { return kind_; }
    int dim() const { return dim_; }
    bool bounded() const { return kind_ != Kind::half_line; }
    bool oracle_only() const { return kind_ == Kind::half_line; }
    std::string kind_name() const;

    /// Closest point of the closure; returns y bit-unchanged when y already
    /// lies inside, which keeps the flatness bookkeeping exact.
    Vec project(std::span<const double> y) const;
    Vec project(std::span<const double> y, const ProjectOptions& opts) const;

    bool contains(std::span<const double> x, double slack = tol::proj) const;

    /// Distance to the boundary, positive inside, negative outside (exact for
    /// every kind except outside a polytope, where it is a lower bound).
    double boundary_distance(std::span<const double> x) const;

    /// Characteristic length used for relative tolerances; 1 for the half-line.
    double scale() const;
    double interior_tolerance() const { return tol::interior_rel * scale(); }

    // kind-specific accessors (throw on mismatch)
    double origin() const;
    double lower() const;
    double upper() const;
    const Vec& lo() const;
    const Vec& hi() const;
    const Vec& center() const;
    double radius() const;
    const std::vector<Vec>& normals() const;
    const Vec& offsets() const;

private:
    DomainShape() = default;

    Kind kind_ = Kind::interval;
    int dim_ = 1;
    double a_ = 0.0, b_ = 1.0;   // half-line origin / interval ends / ball radius (b_)
    Vec lo_, hi_;                // box
    Vec center_;                 // ball
    std::vector<Vec> normals_;   // polytope
    Vec offsets_;
    Vec witness_;
};

/// One step of the projection scheme: x_new = project(x + delta),
/// dk = x_new - (x + delta). dk is exactly zero when x + delta stays inside.
struct ReflectStep {
    Vec x_new;
    Vec dk;
};
ReflectStep reflect_increment(const DomainShape& domain, std::span<const double> x,
                              std::span<const double> delta);

/// Solution of the discrete Skorohod problem: x = h + k node-by-node
/// (bit-identical by construction), k(0) = 0, k_tv nondecreasing and flat
/// wherever x is strictly interior.
struct ReflectedPair {
    SampledPath x;
    SampledPath k;
    std::vector<double> k_tv;
};

/// Half-line reflection via the explicit running-supremum formula
///   x(t) = h(t) + max(0, sup_{s<=t}(origin - h(s))).
ReflectedPair skorohod_halfline(const SampledPath& h, double origin = 0.0);

/// Two-sided reflection on [a, b] via the per-step clamp recursion
///   x_{j+1} = min(max(x_j + dh_j, a), b).
ReflectedPair skorohod_interval(const SampledPath& h, double a, double b);

/// Generic per-step projection scheme for any convex DomainShape.
ReflectedPair skorohod_reflect(const DomainShape& domain, const SampledPath& h);

} // namespace rsde
