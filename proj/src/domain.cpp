#include "rsde/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rsde/rng.hpp"

namespace rsde {

namespace {

void require_dim(const DomainShape& d, std::span<const double> x, const char* who) {
    if (static_cast<int>(x.size()) != d.dim()) {
        throw DomainError(std::string(who) + ": point dimension mismatch");
    }
}

} // namespace

DomainShape DomainShape::half_line(double origin) {
    DomainShape d;
    d.kind_ = Kind::half_line;
    d.dim_ = 1;
    d.a_ = origin;
    return d;
}

DomainShape DomainShape::interval(double a, double b) {
    if (!(a < b)) throw DomainError("interval: require a < b");
    DomainShape d;
    d.kind_ = Kind::interval;
    d.dim_ = 1;
    d.a_ = a;
    d.b_ = b;
    return d;
}

DomainShape DomainShape::box(Vec lo, Vec hi) {
    if (lo.empty() || lo.size() != hi.size()) throw DomainError("box: lo/hi size mismatch");
    for (std::size_t i = 0; i < lo.size(); ++i) {
        if (!(lo[i] < hi[i])) throw DomainError("box: require lo < hi componentwise");
    }
    DomainShape d;
    d.kind_ = Kind::box;
    d.dim_ = static_cast<int>(lo.size());
    d.lo_ = std::move(lo);
    d.hi_ = std::move(hi);
    return d;
}

DomainShape DomainShape::ball(Vec center, double radius) {
    if (center.empty()) throw DomainError("ball: empty center");
    if (!(radius > 0.0)) throw DomainError("ball: require radius > 0");
    DomainShape d;
    d.kind_ = Kind::ball;
    d.dim_ = static_cast<int>(center.size());
    d.center_ = std::move(center);
    d.b_ = radius;
    return d;
}

DomainShape DomainShape::polytope(std::vector<Vec> normals, Vec offsets, Vec interior_witness) {
    if (normals.empty() || normals.size() != offsets.size()) {
        throw DomainError("polytope: normals/offsets size mismatch");
    }
    const int dim = static_cast<int>(normals.front().size());
    if (static_cast<int>(interior_witness.size()) != dim) {
        throw DomainError("polytope: witness dimension mismatch");
    }
    for (std::size_t i = 0; i < normals.size(); ++i) {
        if (static_cast<int>(normals[i].size()) != dim) {
            throw DomainError("polytope: inconsistent normal dimensions");
        }
        const double n = norm2(normals[i]);
        if (!(n > 0.0)) throw DomainError("polytope: zero normal");
        for (double& v : normals[i]) v /= n;
        offsets[i] /= n;
    }
    // strict interior witness
    for (std::size_t i = 0; i < normals.size(); ++i) {
        if (!(dot(normals[i], interior_witness) < offsets[i])) {
            throw DomainError("polytope: witness is not strictly interior");
        }
    }
    // Boundedness: the recession cone {v : n_i . v <= 0 for all i} must be {0}.
    // Checked by sampling unit directions; a direction that violates no
    // constraint witnesses an unbounded ray.
    {
        NormalSampler gauss(0x9D0F17E5EEDULL);
        const int n_dirs = 4096;
        for (int s = 0; s < n_dirs; ++s) {
            Vec v(dim);
            double nrm = 0.0;
            for (int c = 0; c < dim; ++c) {
                v[c] = gauss.next();
                nrm += v[c] * v[c];
            }
            nrm = std::sqrt(nrm);
            if (nrm == 0.0) continue;
            for (double& c : v) c /= nrm;
            bool escapes = true;
            for (std::size_t i = 0; i < normals.size(); ++i) {
                if (dot(normals[i], v) > 1e-12) {
                    escapes = false;
                    break;
                }
            }
            if (escapes) throw DomainError("polytope: region appears unbounded (recession direction found)");
        }
    }
    DomainShape d;
    d.kind_ = Kind::polytope;
    d.dim_ = dim;
    d.normals_ = std::move(normals);
    d.offsets_ = std::move(offsets);
    d.witness_ = std::move(interior_witness);
    return d;
}

std::string DomainShape::kind_name() const {
    switch (kind_) {
        case Kind::half_line: return "halfline";
        case Kind::interval: return "interval";
        case Kind::box: return "box";
        case Kind::ball: return "ball";
        case Kind::polytope: return "polytope";
    }
    return "?";
}

double DomainShape::origin() const {
    if (kind_ != Kind::half_line) throw DomainError("origin(): not a half-line");
    return a_;
}
double DomainShape::lower() const {
    if (kind_ != Kind::interval) throw DomainError("lower(): not an interval");
    return a_;
}
double DomainShape::upper() const {
    if (kind_ != Kind::interval) throw DomainError("upper(): not an interval");
    return b_;
}
const Vec& DomainShape::lo() const {
    if (kind_ != Kind::box) throw DomainError("lo(): not a box");
    return lo_;
}
const Vec& DomainShape::hi() const {
    if (kind_ != Kind::box) throw DomainError("hi(): not a box");
    return hi_;
}
const Vec& DomainShape::center() const {
    if (kind_ != Kind::ball) throw DomainError("center(): not a ball");
    return center_;
}
double DomainShape::radius() const {
    if (kind_ != Kind::ball) throw DomainError("radius(): not a ball");
    return b_;
}
const std::vector<Vec>& DomainShape::normals() const {
    if (kind_ != Kind::polytope) throw DomainError("normals(): not a polytope");
    return normals_;
}
const Vec& DomainShape::offsets() const {
    if (kind_ != Kind::polytope) throw DomainError("offsets(): not a polytope");
    return offsets_;
}

double DomainShape::scale() const {
    switch (kind_) {
        case Kind::half_line: return 1.0;
        case Kind::interval: return b_ - a_;
        case Kind::box: {
            double s = 0.0;
            for (std::size_t i = 0; i < lo_.size(); ++i) {
                const double d = hi_[i] - lo_[i];
                s += d * d;
            }
            return std::sqrt(s);
        }
        case Kind::ball: return 2.0 * b_;
        case Kind::polytope: {
            double m = 0.0;
            for (std::size_t i = 0; i < normals_.size(); ++i) {
                m = std::max(m, offsets_[i] - dot(normals_[i], witness_));
            }
            return 2.0 * m;
        }
    }
    return 1.0;
}

double DomainShape::boundary_distance(std::span<const double> x) const {
    require_dim(*this, x, "boundary_distance");
    switch (kind_) {
        case Kind::half_line: return x[0] - a_;
        case Kind::interval: return std::min(x[0] - a_, b_ - x[0]);
        case Kind::box: {
            double m = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < lo_.size(); ++i) {
                m = std::min({m, x[i] - lo_[i], hi_[i] - x[i]});
            }
            return m;
        }
        case Kind::ball: return b_ - dist2(x, center_);
        case Kind::polytope: {
            double m = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < normals_.size(); ++i) {
                m = std::min(m, offsets_[i] - dot(normals_[i], x));
            }
            return m;
        }
    }
    return 0.0;
}

bool DomainShape::contains(std::span<const double> x, double slack) const {
    return boundary_distance(x) >= -slack;
}

Vec DomainShape::project(std::span<const double> y) const {
    return project(y, ProjectOptions{});
}

Vec DomainShape::project(std::span<const double> y, const ProjectOptions& opts) const {
    require_dim(*this, y, "project");
    Vec out(y.begin(), y.end());
    switch (kind_) {
        case Kind::half_line:
            out[0] = std::max(out[0], a_);
            return out;
        case Kind::interval:
            out[0] = std::min(std::max(out[0], a_), b_);
            return out;
        case Kind::box:
            for (std::size_t i = 0; i < lo_.size(); ++i) {
                out[i] = std::min(std::max(out[i], lo_[i]), hi_[i]);
            }
            return out;
        case Kind::ball: {
            const double d = dist2(y, center_);
            if (d <= b_) return out; // inside: return y unchanged
            const double f = b_ / d;
            for (std::size_t i = 0; i < out.size(); ++i) {
                out[i] = center_[i] + f * (y[i] - center_[i]);
            }
            return out;
        }
        case Kind::polytope: {
            if (boundary_distance(y) >= 0.0) return out; // inside: unchanged
            // Dykstra's alternating projections onto the half-spaces. For an
            // intersection of half-spaces this converges to the exact
            // Euclidean projection.
            const std::size_t m = normals_.size();
            const int d = dim_;
            std::vector<Vec> corrections(m, Vec(d, 0.0));
            Vec z = out;
            Vec prev(d);
            for (int it = 0; it < opts.max_iter; ++it) {
                prev = z;
                for (std::size_t i = 0; i < m; ++i) {
                    Vec w(d);
                    for (int c = 0; c < d; ++c) w[c] = z[c] + corrections[i][c];
                    const double viol = dot(normals_[i], w) - offsets_[i];
                    if (viol > 0.0) {
                        for (int c = 0; c < d; ++c) z[c] = w[c] - viol * normals_[i][c];
                    } else {
                        z = w;
                    }
                    for (int c = 0; c < d; ++c) corrections[i][c] = w[c] - z[c];
                }
                if (dist2(z, prev) < opts.stop) return z;
            }
            throw NumericError("polytope projection did not converge within max_iter (residual " +
                               std::to_string(dist2(z, prev)) + ")");
        }
    }
    return out;
}

ReflectStep reflect_increment(const DomainShape& domain, std::span<const double> x,
                              std::span<const double> delta) {
    require_dim(domain, x, "reflect_increment");
    const int d = domain.dim();
    Vec y(d);
    for (int c = 0; c < d; ++c) y[c] = x[c] + delta[c];
    ReflectStep step;
    step.x_new = domain.project(y);
    step.dk.resize(d);
    for (int c = 0; c < d; ++c) step.dk[c] = step.x_new[c] - y[c];
    return step;
}

ReflectedPair skorohod_halfline(const SampledPath& h, double origin) {
    if (h.dim() != 1) throw DomainError("skorohod_halfline: path must be 1-d");
    if (h.value1(0) < origin) {
        throw DomainError("skorohod_halfline: starting point outside the closure");
    }
    const std::int64_t n = h.n_nodes();
    ReflectedPair rp{SampledPath(h.grid(), 1), SampledPath(h.grid(), 1),
                     std::vector<double>(static_cast<std::size_t>(n), 0.0)};
    double running = 0.0; // max(0, sup_{s<=t} (origin - h(s)))
    for (std::int64_t j = 0; j < n; ++j) {
        running = std::max(running, origin - h.value1(j));
        const double k = running;
        rp.k.node(j)[0] = k;
        rp.x.node(j)[0] = h.value1(j) + k;
        rp.k_tv[j] = k; // k is nondecreasing from 0, so TV(k) = k
    }
    return rp;
}

ReflectedPair skorohod_interval(const SampledPath& h, double a, double b) {
    if (!(a < b)) throw DomainError("skorohod_interval: require a < b");
    if (h.dim() != 1) throw DomainError("skorohod_interval: path must be 1-d");
    const double h0 = h.value1(0);
    if (h0 < a || h0 > b) {
        throw DomainError("skorohod_interval: starting point outside [a, b]");
    }
    const std::int64_t n = h.n_nodes();
    ReflectedPair rp{SampledPath(h.grid(), 1), SampledPath(h.grid(), 1),
                     std::vector<double>(static_cast<std::size_t>(n), 0.0)};
    double x = h0;
    rp.x.node(0)[0] = x;
    rp.k.node(0)[0] = x - h0; // exactly 0
    for (std::int64_t j = 0; j + 1 < n; ++j) {
        const double dh = h.value1(j + 1) - h.value1(j);
        const double y = x + dh;
        const double xn = std::min(std::max(y, a), b);
        const double dk = xn - y; // exactly 0 while unclamped
        rp.k_tv[j + 1] = rp.k_tv[j] + std::abs(dk);
        x = xn;
        rp.x.node(j + 1)[0] = x;
        rp.k.node(j + 1)[0] = x - h.value1(j + 1);
    }
    return rp;
}

ReflectedPair skorohod_reflect(const DomainShape& domain, const SampledPath& h) {
    if (h.dim() != domain.dim()) throw DomainError("skorohod_reflect: dimension mismatch");
    if (!domain.contains(h.node(0))) {
        throw DomainError("skorohod_reflect: starting point outside the closure");
    }
    const std::int64_t n = h.n_nodes();
    const int d = h.dim();
    ReflectedPair rp{SampledPath(h.grid(), d), SampledPath(h.grid(), d),
                     std::vector<double>(static_cast<std::size_t>(n), 0.0)};
    Vec x(h.node(0).begin(), h.node(0).end());
    Vec delta(d);
    for (int c = 0; c < d; ++c) {
        rp.x.node(0)[c] = x[c];
        rp.k.node(0)[c] = x[c] - h.node(0)[c];
    }
    for (std::int64_t j = 0; j + 1 < n; ++j) {
        for (int c = 0; c < d; ++c) delta[c] = h.node(j + 1)[c] - h.node(j)[c];
        ReflectStep step = reflect_increment(domain, x, delta);
        rp.k_tv[j + 1] = rp.k_tv[j] + norm2(step.dk);
        x = std::move(step.x_new);
        for (int c = 0; c < d; ++c) {
            rp.x.node(j + 1)[c] = x[c];
            rp.k.node(j + 1)[c] = x[c] - h.node(j + 1)[c];
        }
    }
    return rp;
}

} // namespace rsde
