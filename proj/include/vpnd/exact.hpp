#ifndef VPND_EXACT_HPP
#define VPND_EXACT_HPP

#include "vpnd/tree_routing.hpp"

namespace vpnd {

/// Result of the exact linear-cost solver. `value` is the optimum of linear
/// VPND over all routings: min over roots r of sum_w b_w * dist(w, r).
/// `solution` is a concrete network realizing it (the shortest-path tree of
/// the best root restricted to terminal-to-root paths, pruned, with min-side
/// capacities); its linear tree cost equals `value` exactly, since tree
/// distances to the root coincide with graph distances on a shortest-path
/// tree.
struct ExactResult {
    Rational value;
    VertexId root = 0;
    TreeSolution solution;
};

/// Exact polynomial solver for linear VPND by enumerating shortest-path tree
/// roots over all of V (the best root can be a non-terminal). Smallest root
/// id wins ties.
ExactResult solve_exact_linear(const Instance& instance);

}  // namespace vpnd

#endif  // VPND_EXACT_HPP
