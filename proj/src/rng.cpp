#include "vpnd/rng.hpp"

namespace vpnd {

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
    if (range == 0) return static_cast<std::int64_t>(next_u64());  // full 64-bit span
    // Rejection sampling; never use std distributions, their output is
    // implementation-defined and would break cross-platform determinism.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
    std::uint64_t draw;
    do {
        draw = next_u64();
    } while (draw >= limit);
    return lo + static_cast<std::int64_t>(draw % range);
}

bool Rng::bernoulli(const Rational& p) {
    // Exactly one draw regardless of p, so call sites that compute the same
    // probabilities consume identical stream positions.
    const std::uint64_t draw = next_u64() >> 11;  // 53 uniform bits
    return Rational(draw) < p * Rational(BigInt(1) << 53);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    // splitmix64 steps; enough to decorrelate sub-streams.
    auto step = [](std::uint64_t x) {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    };
    std::uint64_t h = step(seed ^ step(a + 1));
    return step(h ^ step(b + 0x9E3779B97F4A7C15ULL));
}

}  // namespace vpnd
