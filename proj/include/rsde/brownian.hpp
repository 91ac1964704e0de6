#pragma once

#include <cstdint>
#include <string>

#include "rsde/grid.hpp"
#include "rsde/rng.hpp"

namespace rsde {

/// Sampled standard r-dimensional Brownian motion. W(0) = 0; node increments
/// are independent N(0, dt) per component, reproducible bit-exactly from
/// (seed, generator_id, grid, r).
struct BrownianPath {
    SampledPath path;
    std::uint64_t seed = 0;
    std::string generator_id;

    const TimeGrid& grid() const { return path.grid(); }
    int r() const { return path.dim(); }
};

BrownianPath sample_brownian(const TimeGrid& grid, int r, std::uint64_t seed);

/// All-zero path with the BrownianPath interface (degenerate single-sample
/// inputs for the statistics; documented as non-convergent for studies).
BrownianPath zero_brownian(const TimeGrid& grid, int r);

} // namespace rsde
