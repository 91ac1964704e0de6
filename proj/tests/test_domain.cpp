#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "rsde/brownian.hpp"
#include "rsde/domain.hpp"
#include "rsde/rng.hpp"

using namespace rsde;

namespace {

SampledPath path_from(std::vector<double> nodes, double T = 0.0) {
    const auto n = static_cast<std::int64_t>(nodes.size()) - 1;
    TimeGrid g(T > 0.0 ? T : static_cast<double>(n), n);
    return SampledPath(g, 1, std::move(nodes));
}

} // namespace

TEST_CASE("skorohod half-line: documented node values") {
    // h = [0,-1,1]: x = [0,0,2], k = [0,1,1] per the discrete recursion oracle
    const auto rp = skorohod_halfline(path_from({0.0, -1.0, 1.0}), 0.0);
    CHECK(rp.x.value1(0) == 0.0);
    CHECK(rp.x.value1(1) == 0.0);
    CHECK(rp.x.value1(2) == 2.0);
    CHECK(rp.k.value1(0) == 0.0);
    CHECK(rp.k.value1(1) == 1.0);
    CHECK(rp.k.value1(2) == 1.0);
    CHECK(rp.k_tv[2] == 1.0);

    const auto oracle = oracles::halfline_clamp({0.0, -1.0, 1.0}, 0.0);
    for (int j = 0; j <= 2; ++j) {
        CHECK(rp.x.value1(j) == doctest::Approx(oracle.x[j]).epsilon(1e-15));
        CHECK(rp.k.value1(j) == doctest::Approx(oracle.k[j]).epsilon(1e-15));
    }
}

TEST_CASE("skorohod half-line: increasing path is untouched, decreasing sticks") {
    TimeGrid g(1.0, 64);
    std::vector<double> up(65), down(65);
    for (int j = 0; j <= 64; ++j) {
        up[j] = g.node_time(j);
        down[j] = -g.node_time(j);
    }
    const auto rp_up = skorohod_halfline(SampledPath(g, 1, up), 0.0);
    for (int j = 0; j <= 64; ++j) {
        CHECK(rp_up.x.value1(j) == up[j]);
        CHECK(rp_up.k.value1(j) == 0.0);
    }
    const auto rp_down = skorohod_halfline(SampledPath(g, 1, down), 0.0);
    for (int j = 0; j <= 64; ++j) {
        CHECK(rp_down.x.value1(j) == 0.0);
        CHECK(rp_down.k.value1(j) == g.node_time(j));
    }
}

TEST_CASE("skorohod half-line: starting point must be in the closure") {
    CHECK_THROWS_AS(skorohod_halfline(path_from({-0.5, 0.0}), 0.0), DomainError);
}

TEST_CASE("skorohod interval: clamp recursion examples") {
    // h(t) = 2t on [0,1], D = [0,1]: x = min(2t,1), k = -max(2t-1,0)
    TimeGrid g(1.0, 128);
    std::vector<double> h(129);
    for (int j = 0; j <= 128; ++j) h[j] = 2.0 * g.node_time(j);
    const auto rp = skorohod_interval(SampledPath(g, 1, h), 0.0, 1.0);
    for (int j = 0; j <= 128; ++j) {
        const double t = g.node_time(j);
        CHECK(rp.x.value1(j) == doctest::Approx(std::min(2.0 * t, 1.0)).epsilon(1e-14));
        CHECK(rp.k.value1(j) == doctest::Approx(-std::max(2.0 * t - 1.0, 0.0)).epsilon(1e-14));
    }

    // documented three-node case
    const auto rp2 = skorohod_interval(path_from({0.5, 1.5, -0.5}), 0.0, 1.0);
    CHECK(rp2.x.value1(0) == 0.5);
    CHECK(rp2.x.value1(1) == 1.0);
    CHECK(rp2.x.value1(2) == 0.0);
    CHECK(rp2.k.value1(1) == -0.5);
    CHECK(rp2.k.value1(2) == 0.5);
    CHECK(rp2.k_tv[2] == doctest::Approx(1.5)); // |−0.5| + |+1.0|

    // oscillation strictly inside leaves the path alone
    const auto rp3 = skorohod_interval(path_from({0.5, 0.7, 0.3, 0.6}), 0.0, 1.0);
    for (int j = 0; j <= 3; ++j) {
        CHECK(rp3.k.value1(j) == 0.0);
        CHECK(rp3.k_tv[j] == 0.0);
    }

    CHECK_THROWS_AS(skorohod_interval(path_from({0.5, 0.0}), 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(skorohod_interval(path_from({2.0, 0.0}), 0.0, 1.0), DomainError);
}

TEST_CASE("skorohod decomposition/flatness/containment invariants") {
    TimeGrid g(1.0, 512);
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        const BrownianPath w = sample_brownian(g, 1, seed);
        std::vector<double> h(w.path.raw());
        for (auto& v : h) v += 0.25; // start inside [0,1]
        const SampledPath hp(g, 1, h);
        const auto rp = skorohod_interval(hp, 0.0, 1.0);
        const DomainShape D = DomainShape::interval(0.0, 1.0);
        for (std::int64_t j = 0; j <= g.n_fine; ++j) {
            // decomposition exact by construction
            CHECK(rp.x.value1(j) - hp.value1(j) - rp.k.value1(j) == 0.0);
            CHECK(D.contains(rp.x.node(j)));
            // flatness: strict interior => no k_tv increment at this node
            if (j > 0 && D.boundary_distance(rp.x.node(j)) > D.interior_tolerance()) {
                CHECK(rp.k_tv[j] == rp.k_tv[j - 1]);
            }
        }
        CHECK(std::is_sorted(rp.k_tv.begin(), rp.k_tv.end()));
    }
}

TEST_CASE("projection: examples and domain constructors") {
    const DomainShape ball = DomainShape::ball({0.0, 0.0}, 1.0);
    const Vec p1 = ball.project(Vec{2.0, 0.0});
    CHECK(p1[0] == doctest::Approx(1.0));
    CHECK(p1[1] == 0.0);

    const DomainShape box = DomainShape::box({0.0, 0.0}, {1.0, 1.0});
    const Vec p2 = box.project(Vec{-0.5, 0.3});
    CHECK(p2[0] == 0.0);
    CHECK(p2[1] == 0.3);

    const DomainShape tri = DomainShape::polytope(
        {{-1.0, 0.0}, {0.0, -1.0}, {1.0, 1.0}}, {0.0, 0.0, 1.0}, {0.25, 0.25});
    const Vec p3 = tri.project(Vec{1.0, 1.0});
    CHECK(p3[0] == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(p3[1] == doctest::Approx(0.5).epsilon(1e-8));

    CHECK_THROWS_AS(DomainShape::interval(1.0, 1.0), DomainError);
    CHECK_THROWS_AS(DomainShape::ball({0.0}, 0.0), DomainError);
    CHECK_THROWS_AS(DomainShape::box({0.0, 0.0}, {1.0, 0.0}), DomainError);
    // witness not interior
    CHECK_THROWS_AS(DomainShape::polytope({{1.0, 0.0}}, {0.0}, {0.5, 0.0}), DomainError);
    // open half-space is unbounded
    CHECK_THROWS_AS(DomainShape::polytope({{1.0, 0.0}}, {1.0}, {0.0, 0.0}), DomainError);
}

TEST_CASE("projection agrees with the face-enumeration QP oracle") {
    const std::vector<Vec> normals = {{-1.0, 0.0}, {0.0, -1.0},
                                      {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)}};
    const Vec offsets = {0.0, 0.0, 1.0 / std::sqrt(2.0)};
    const DomainShape tri = DomainShape::polytope(normals, offsets, {0.25, 0.25});
    Xoshiro256pp rng(77);
    for (int trial = 0; trial < 500; ++trial) {
        const Vec y = {4.0 * rng.uniform01() - 2.0, 4.0 * rng.uniform01() - 2.0};
        const Vec got = tri.project(y);
        const auto want = oracles::qp_project(normals, offsets, y);
        REQUIRE(want.has_value());
        CHECK(dist2(got, *want) < 1e-7);
        // idempotent
        CHECK(dist2(tri.project(got), got) < 1e-9);
    }
}

TEST_CASE("projection is nonexpansive (all kinds)") {
    const std::vector<DomainShape> domains = {
        DomainShape::half_line(0.0),
        DomainShape::interval(-1.0, 2.0),
        DomainShape::box({0.0, 0.0}, {1.0, 2.0}),
        DomainShape::ball({0.5, -0.5}, 1.5),
        DomainShape::polytope({{-1.0, 0.0}, {0.0, -1.0}, {1.0, 1.0}}, {0.0, 0.0, 1.0},
                              {0.25, 0.25}),
    };
    Xoshiro256pp rng(123);
    for (const auto& D : domains) {
        const int d = D.dim();
        for (int trial = 0; trial < 10000; ++trial) {
            Vec y1(d), y2(d);
            for (int c = 0; c < d; ++c) {
                y1[c] = 8.0 * rng.uniform01() - 4.0;
                y2[c] = 8.0 * rng.uniform01() - 4.0;
            }
            const Vec p1 = D.project(y1);
            const Vec p2 = D.project(y2);
            CHECK(dist2(p1, p2) <= dist2(y1, y2) + tol::proj);
        }
    }
}

TEST_CASE("reflect_increment: interior step, clamp, polytope with cone check") {
    const DomainShape ball = DomainShape::ball({0.0, 0.0}, 1.0);
    const auto s1 = reflect_increment(ball, Vec{0.0, 0.0}, Vec{0.1, 0.0});
    CHECK(s1.x_new[0] == 0.1);
    CHECK(s1.dk[0] == 0.0);
    CHECK(s1.dk[1] == 0.0);

    const DomainShape box1 = DomainShape::box({0.0}, {1.0});
    const auto s2 = reflect_increment(box1, Vec{0.9}, Vec{0.3});
    CHECK(s2.x_new[0] == 1.0);
    CHECK(s2.dk[0] == doctest::Approx(-0.2));

    const DomainShape tri = DomainShape::polytope(
        {{-1.0, 0.0}, {0.0, -1.0}, {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)}},
        {0.0, 0.0, 1.0 / std::sqrt(2.0)}, {0.25, 0.25});
    const auto s3 = reflect_increment(tri, Vec{0.9, 0.0}, Vec{0.2, 0.2});
    CHECK(s3.x_new[0] == doctest::Approx(0.95).epsilon(1e-7));
    CHECK(s3.x_new[1] == doctest::Approx(0.05).epsilon(1e-7));
    CHECK(s3.dk[0] == doctest::Approx(-0.15).epsilon(1e-6));
    CHECK(s3.dk[1] == doctest::Approx(-0.15).epsilon(1e-6));
    // dk lies in the inward normal cone at x_new: nonnegative inner product
    // with every direction into the domain (obtuse-angle property of the
    // projection, up to tolerance)
    Xoshiro256pp rng(5);
    const double dknorm = norm2(s3.dk);
    for (int i = 0; i < 200; ++i) {
        Vec z = {rng.uniform01(), rng.uniform01()};
        if (z[0] + z[1] > 1.0) {
            z[0] = 1.0 - z[0];
            z[1] = 1.0 - z[1];
        }
        double ip = 0.0;
        for (int c = 0; c < 2; ++c) ip += s3.dk[c] * (z[c] - s3.x_new[c]);
        CHECK(ip >= -tol::cone * dknorm);
    }
}

TEST_CASE("projection nonconvergence reports residual") {
    const DomainShape tri = DomainShape::polytope(
        {{-1.0, 0.0}, {0.0, -1.0}, {1.0, 1.0}}, {0.0, 0.0, 1.0}, {0.25, 0.25});
    ProjectOptions opts;
    opts.max_iter = 1;
    opts.stop = 0.0;
    CHECK_THROWS_AS(tri.project(Vec{5.0, 5.0}, opts), NumericError);
}

TEST_CASE("total-variation bound of the reflection map (spot check)") {
    // |x|_s^t <= 2(sqrt(2)+1)|h|_s^t on random piecewise-linear inputs
    const double bound = 2.0 * (std::sqrt(2.0) + 1.0);
    TimeGrid g(1.0, 64);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const BrownianPath w = sample_brownian(g, 1, derive_seed(4242, seed));
        std::vector<double> h(w.path.raw());
        for (auto& v : h) v = 0.3 + 0.5 * v;
        const SampledPath hp(g, 1, h);
        const auto rp = skorohod_interval(hp, 0.0, 1.0);
        const auto tv_x = prefix_total_variation(rp.x);
        const auto tv_h = prefix_total_variation(hp);
        for (int s = 0; s <= 64; s += 8) {
            for (int t = s + 1; t <= 64; t += 8) {
                CHECK(tv_x[t] - tv_x[s] <= bound * (tv_h[t] - tv_h[s]) + 1e-12);
            }
        }
    }
}

TEST_CASE("oracle equivalence: explicit formula vs naive clamp recursion") {
    TimeGrid g(1.0, 4096);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const BrownianPath w = sample_brownian(g, 1, derive_seed(31337, seed));
        const auto rp = skorohod_halfline(w.path, 0.0);
        const auto oracle = oracles::halfline_clamp(w.path.raw(), 0.0);
        double sup = 0.0;
        for (std::int64_t j = 0; j <= g.n_fine; ++j) {
            sup = std::max(sup, std::abs(rp.x.value1(j) - oracle.x[j]));
        }
        CHECK(sup < 1e-12);
    }
}
