#pragma once

#include <cstdint>
#include <functional>
#include <span>

namespace rsde {

/// Resolve a thread-count request: 0 means auto (hardware concurrency).
int resolve_threads(int requested);

/// Run body(begin, end) over a static block partition of [0, n). Results must
/// be written to disjoint indexed slots so the outcome is independent of the
/// thread count.
void parallel_chunks(std::int64_t n, int threads,
                     const std::function<void(std::int64_t, std::int64_t)>& body);

/// Pairwise (cascade) summation: deterministic, order-independent of any
/// parallel fill of the buffer, and accurate to O(log n) rounding.
double pairwise_sum(std::span<const double> values);

struct MeanStderr {
    double mean = 0.0;
    double stderr_ = 0.0;
};

/// Sample mean and standard error of the mean via pairwise sums.
MeanStderr mean_stderr(std::span<const double> values);

} // namespace rsde
