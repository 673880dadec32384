#ifndef VPND_ORACLE_HPP
#define VPND_ORACLE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vpnd/tree_routing.hpp"

namespace vpnd {

/// Size caps for the exponential oracles. Exceeding a cap is a hard
/// SizeCapError, never a silent truncation.
struct OracleCaps {
    static constexpr int kMaxTerminalsCapacity = 6;   // capacity_requirement
    static constexpr std::int64_t kMaxDemandCapacity = 4;
    static constexpr int kMaxVerticesTree = 8;        // optimal_tree_oracle
    static constexpr int kMaxVerticesRouting = 5;     // optimal_routing_oracle
    static constexpr int kMaxTerminalsRouting = 4;
    static constexpr std::int64_t kMaxDemandRouting = 2;
};

/// A symmetric demand matrix over terminal pairs, the certificate object for
/// worst-case loads. Feasible means sum_{u != v} d_uv <= b_v per terminal v.
class DemandMatrix {
public:
    static DemandMatrix make(const Instance& instance,
                             std::map<TerminalPair, Rational> values);

    const std::map<TerminalPair, Rational>& values() const { return values_; }
    Rational value(VertexId u, VertexId v) const;

    /// Lines "demand U V VALUE" sorted by (U,V); zero entries omitted.
    std::string serialize() const;

private:
    DemandMatrix() = default;
    std::map<TerminalPair, Rational> values_;
};

/// Worst-case load of edge e under the given routing: the maximum over all
/// feasible demand matrices of the total demand routed across e. Computed by
/// exhaustive enumeration of half-integral matrices (the feasible polytope
/// has half-integral vertices, a structure the quarter-integral regression
/// test guards). Caps: |W| <= 6, max b <= 4.
Rational capacity_requirement(const Instance& instance, const Routing& routing,
                              EdgeId e);

/// Same value plus a maximizing demand matrix.
struct CapacityWitness {
    Rational value;
    DemandMatrix witness;
};
CapacityWitness capacity_requirement_witness(const Instance& instance,
                                             const Routing& routing, EdgeId e);

/// Same maximum taken over a finer grid (entries in quarter-integral steps).
/// Exists only to guard the half-integrality assumption; slower.
Rational capacity_requirement_quarter_grid(const Instance& instance,
                                           const Routing& routing, EdgeId e);

/// Best tree solution by brute force: enumerates every subtree of G spanning
/// all terminals (over all connected vertex subsets containing W), prices
/// each by tree_cost under f, and returns the minimum. Ties resolved by the
/// lexicographically smallest sorted edge list. Cap: |V| <= 8.
struct TreeOracleResult {
    Rational value;
    std::vector<EdgeId> tree_edges;
};
TreeOracleResult optimal_tree_oracle(const Instance& instance, const ConcaveCost& f);

/// Optimal cost over ALL routings (one simple path per terminal pair, any
/// shape), with required capacities priced by the worst-case load of each
/// edge. Doubly exponential; caps |V| <= 5, |W| <= 4, max b <= 2.
Rational optimal_routing_oracle(const Instance& instance, const ConcaveCost& f);

/// Exhaustive minimum Steiner tree over `required`; same subtree enumeration
/// as the tree oracle with plain edge costs. Cap: |V| <= 8.
struct SteinerOracleResult {
    Rational value;
    std::vector<EdgeId> tree_edges;
};
SteinerOracleResult steiner_tree_optimum(const Instance& instance,
                                         const std::vector<VertexId>& required);

/// Checks every edge of G: installed capacity >= worst-case load. On
/// failure, reports the first violating edge (ascending id) and a
/// maximizing demand matrix as the counterexample.
struct FeasibilityReport {
    bool feasible = false;
    std::optional<EdgeId> violating_edge;
    std::optional<Rational> required;
    std::optional<Rational> installed;
    std::optional<DemandMatrix> certificate;
};
FeasibilityReport verify_feasible(const Instance& instance, const Routing& routing);

}  // namespace vpnd

#endif  // VPND_ORACLE_HPP
