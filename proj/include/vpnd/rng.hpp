#ifndef VPND_RNG_HPP
#define VPND_RNG_HPP

#include <cstdint>
#include <random>

#include "vpnd/rational.hpp"

namespace vpnd {

/// All randomness in the project flows through this wrapper around
/// std::mt19937_64 (fully specified by the standard, so identical on every
/// platform). The std <random> distributions are NOT specified and are never
/// used; bounded draws are done by rejection below.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [lo, hi], inclusive, by rejection sampling.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

    /// True with probability p (0 <= p <= 1), decided by comparing one
    /// 53-bit draw against p with exact rational arithmetic.
    bool bernoulli(const Rational& p);

private:
    std::mt19937_64 engine_;
};

/// Deterministic seed derivation for independent sub-streams.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

}  // namespace vpnd

#endif  // VPND_RNG_HPP
