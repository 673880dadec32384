#ifndef VPND_SSF_HPP
#define VPND_SSF_HPP

#include <cstdint>
#include <map>
#include <variant>
#include <vector>

#include "vpnd/cables.hpp"
#include "vpnd/cost_fn.hpp"
#include "vpnd/tree_routing.hpp"

namespace vpnd {

/// Single-source concave-cost flow instance: every demand terminal must move
/// its demand to the source. Priced either by a concave function f or by a
/// cable list (buy-at-bulk view).
struct SsfInstance {
    const Instance* instance = nullptr;
    VertexId source = 0;
    /// terminal -> positive demand; keys must be terminals of the instance.
    std::map<VertexId, std::int64_t> demands;
    std::variant<ConcaveCost, CableList> cost_model = ConcaveCost::identity();

    /// Throws ValidationError on a bad source, non-terminal demand keys, or
    /// non-positive demands.
    void validate() const;
};

/// A single-source flow. Solvers in this module canonicalize their output by
/// cycle cancellation (concavity makes one direction around any cycle free
/// to push), so the support is always a tree containing the source and every
/// demand terminal, and flow[e] is exactly the demand separated from the
/// source by e.
struct FlowSolution {
    /// Sorted ascending; edges with zero flow are absent.
    std::vector<EdgeId> support_edges;
    /// Positive flow magnitude per support edge, aligned with support_edges.
    std::vector<Rational> flow;
    /// For cable-priced instances: index of the envelope-optimal cable per
    /// support edge, aligned with support_edges. Empty otherwise.
    std::vector<int> cable_assignment;
    /// Sum over support edges of c_e * price(flow_e) under the instance's
    /// cost model, exact.
    Rational total_cost;

    Rational flow_on(EdgeId e) const;
};

/// Cost of a flow under an arbitrary concave function: sum c_e * f(flow_e).
Rational flow_cost(const Instance& instance, const FlowSolution& flow,
                   const ConcaveCost& f);

/// Tree spanning `required` of cost at most twice the optimal Steiner tree:
/// minimum spanning tree of the metric closure, shortcut back to G, reduced
/// to a tree again and pruned of non-required leaves. Deterministic
/// (Kruskal ordering by (weight, u, v); shortest-path ties by smallest
/// parent id). |required| <= 1 gives the empty set.
std::vector<EdgeId> steiner_2approx(const Instance& instance,
                                    const std::vector<VertexId>& required);

/// Single Source Rent-or-Buy by sample-augment. Requires cost model
/// f = min(mu*x, M): each demand terminal is marked with probability
/// min(1, mu*d_w/M); the edges of steiner_2approx over marked terminals plus
/// the source are bought; every unmarked terminal rents a shortest path to
/// the nearest bought vertex. The reported cost reprices the resulting flow
/// by f exactly. Deterministic given the seed.
FlowSolution solve_ssrob(const SsfInstance& ssf, std::uint64_t rng_seed);

/// Single Source Buy-at-Bulk by staged sample-augment, one stage per cable
/// from smallest sigma to largest. Stage i holds aggregation points carrying
/// accumulated demand (stage 0: the demand terminals); a point with demand D
/// is marked with probability min(1, D*delta_i / (sigma_{i+1} - sigma_i +
/// D*delta_{i+1})). Unmarked points route along shortest paths to the
/// nearest next-stage aggregation vertex; the source anchors every stage, so
/// an empty sample degenerates to routing everything home. The final stage
/// buys a steiner_2approx tree over the surviving points plus the source and
/// routes along it (plain shortest paths when the last cable has zero fixed
/// cost, where buying is free and tree detours pointless). Cost is the
/// cable envelope price of the canonicalized flow. Deterministic given the
/// seed; with the two cables of a rent-or-buy function this coincides with
/// solve_ssrob move for move.
FlowSolution solve_ssbab(const SsfInstance& ssf, std::uint64_t rng_seed);

/// Concave VPND driver. Reduces to single-source flow: for every terminal r
/// as candidate source and `repetitions` independent seeds, runs solve_ssbab
/// on prune_cables(segments_to_cables(f), 2) with demands b restricted to
/// W \ {r}, converts each flow support to a tree (shortest-path tree inside
/// the support, pruned, min-side capacities), and returns the cheapest tree
/// under tree_cost(., f). Feasibility is unconditional; the returned value
/// never exceeds the f-cost of the flow it came from.
struct CvpndResult {
    Rational value;
    TreeSolution solution;
    VertexId source = 0;     // source of the winning run
    std::uint64_t seed = 0;  // sub-seed of the winning run
};

CvpndResult solve_cvpnd(const Instance& instance, const ConcaveCost& f,
                        std::uint64_t rng_seed, int repetitions);

/// Flow-support-to-tree conversion used by solve_cvpnd: union of
/// shortest paths from every demand terminal to the source inside the
/// support, pruned. Exposed for testing.
TreeSolution flow_to_tree(const SsfInstance& ssf, const FlowSolution& flow);

}  // namespace vpnd

#endif  // VPND_SSF_HPP
