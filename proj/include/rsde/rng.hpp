#pragma once

#include <cstdint>
#include <string>

namespace rsde {

/// Identifier of the generation scheme baked into every BrownianPath.
/// Bump it if the uniform generator or the normal transform ever changes.
inline const std::string kGeneratorId = "xoshiro256pp-boxmuller-v1";

struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
};

/// Deterministic stream split: the k-th child seed of `base`.
/// Used for per-sample and per-(delta, path) seed derivation so results are
/// independent of thread count and iteration order.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    SplitMix64 s(base + (index + 1) * 0x9E3779B97F4A7C15ULL);
    return s.next();
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
    return derive_seed(derive_seed(base, a), b);
}

class Xoshiro256pp {
public:
    explicit Xoshiro256pp(std::uint64_t seed) {
        SplitMix64 sm(seed);
        for (auto& w : s_) w = sm.next();
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform on [0, 1) with 53 random mantissa bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s_[4];
};

/// Standard normals via Box-Muller. No rejection step, so the draw count per
/// variate is fixed and the stream is reproducible bit-for-bit.
class NormalSampler {
public:
    explicit NormalSampler(std::uint64_t seed) : rng_(seed) {}

    double next();

private:
    Xoshiro256pp rng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace rsde
