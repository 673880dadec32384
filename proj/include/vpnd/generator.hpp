#ifndef VPND_GENERATOR_HPP
#define VPND_GENERATOR_HPP

#include <cstdint>

#include "vpnd/instance.hpp"

namespace vpnd {

enum class InstanceKind { RandomConnected, Grid, Star, Path };

/// Parameters for gen_instance. Fields are read per kind:
///   random-connected: n, edge_prob, max_cost, max_demand
///   grid:             rows, cols, max_cost, max_demand
///   path:             n, max_cost, max_demand
///   star:             k leaves (unit costs, unit leaf demands; fixed shape)
struct GenParams {
    InstanceKind kind = InstanceKind::RandomConnected;
    int n = 6;
    int rows = 2;
    int cols = 3;
    int k = 3;
    Rational edge_prob = Rational(1, 2);
    std::int64_t max_cost = 5;    // costs uniform in 1..max_cost
    std::int64_t max_demand = 2;  // demands uniform in 0..max_demand
};

/// Deterministic for a fixed seed. Random kinds draw costs and demands from
/// the seeded stream; if no vertex draws a positive demand, vertex 1 gets
/// demand 1 so the instance stays valid. random-connected resamples the edge
/// set until connected (up to a retry budget) and fails with ValidationError
/// when the budget runs out.
Instance gen_instance(const GenParams& params, std::uint64_t rng_seed);

}  // namespace vpnd

#endif  // VPND_GENERATOR_HPP
