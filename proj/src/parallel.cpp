#include "rsde/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

namespace rsde {

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

void parallel_chunks(std::int64_t n, int threads,
                     const std::function<void(std::int64_t, std::int64_t)>& body) {
    const int nt = std::min<std::int64_t>(std::max(1, resolve_threads(threads)), std::max<std::int64_t>(n, 1));
    if (nt == 1 || n <= 1) {
        body(0, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nt);
    const std::int64_t chunk = (n + nt - 1) / nt;
    for (int t = 0; t < nt; ++t) {
        const std::int64_t lo = t * chunk;
        const std::int64_t hi = std::min<std::int64_t>(lo + chunk, n);
        if (lo >= hi) break;
        pool.emplace_back([&body, lo, hi] { body(lo, hi); });
    }
    for (auto& th : pool) th.join();
}

namespace {

double pairwise(std::span<const double> v, std::size_t lo, std::size_t hi) {
    const std::size_t n = hi - lo;
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += v[i];
        return s;
    }
    const std::size_t mid = lo + n / 2;
    return pairwise(v, lo, mid) + pairwise(v, mid, hi);
}

} // namespace

double pairwise_sum(std::span<const double> values) {
    if (values.empty()) return 0.0;
    return pairwise(values, 0, values.size());
}

MeanStderr mean_stderr(std::span<const double> values) {
    MeanStderr out;
    const std::size_t n = values.size();
    if (n == 0) return out;
    out.mean = pairwise_sum(values) / static_cast<double>(n);
    if (n == 1) return out;
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = values[i] - out.mean;
        sq[i] = d * d;
    }
    const double var = pairwise_sum(sq) / static_cast<double>(n - 1);
    out.stderr_ = std::sqrt(var / static_cast<double>(n));
    return out;
}

} // namespace rsde
