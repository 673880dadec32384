#include "vpnd/exact.hpp"

#include "vpnd/shortest_path.hpp"

namespace vpnd {

ExactResult solve_exact_linear(const Instance& instance) {
    // By the tree routing property the optimum is attained by a tree, and on
    // a tree the linear cost equals the weighted 1-median objective, which a
    // shortest-path tree of the median realizes in G. So minimizing the
    // root formula over all of V is exact.
    std::optional<Rational> best;
    VertexId best_root = 0;
    for (VertexId r = 0; r < instance.vertex_count(); ++r) {
        auto spt = shortest_path_tree(instance, r);
        Rational value = 0;
        for (VertexId w : instance.terminals())
            value += spt.dist[static_cast<std::size_t>(w)] * instance.demand(w);
        if (!best || value < *best) {
            best = std::move(value);
            best_root = r;
        }
    }

    auto spt = shortest_path_tree(instance, best_root);
    std::vector<EdgeId> union_edges;
    for (VertexId w : instance.terminals())
        for (VertexId v = w; spt.parent_edge[static_cast<std::size_t>(v)];
             v = *spt.parent[static_cast<std::size_t>(v)])
            union_edges.push_back(*spt.parent_edge[static_cast<std::size_t>(v)]);

    return ExactResult{*best, best_root, TreeSolution::make(instance, std::move(union_edges))};
}

}  // namespace vpnd
