#include "rsde/brownian.hpp"

#include <cmath>

namespace rsde {

BrownianPath sample_brownian(const TimeGrid& grid, int r, std::uint64_t seed) {
    if (r < 1) throw ConfigError("sample_brownian: require r >= 1");
    BrownianPath w{SampledPath(grid, r), seed, kGeneratorId};
    NormalSampler gauss(seed);
    const double sd = std::sqrt(grid.dt());
    // Node 0 is exactly zero from value-initialization. Generation order is
    // fixed (node-major, then component) and part of the reproducibility
    // contract together with generator_id.
    for (std::int64_t j = 0; j < grid.n_fine; ++j) {
        auto prev = w.path.node(j);
        auto next = w.path.node(j + 1);
        for (int i = 0; i < r; ++i) {
            next[i] = prev[i] + sd * gauss.next();
        }
    }
    return w;
}

BrownianPath zero_brownian(const TimeGrid& grid, int r) {
    if (r < 1) throw ConfigError("zero_brownian: require r >= 1");
    return BrownianPath{SampledPath(grid, r), 0, "zero"};
}

} // namespace rsde
