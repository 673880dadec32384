#ifndef VPND_SHORTEST_PATH_HPP
#define VPND_SHORTEST_PATH_HPP

#include <optional>
#include <vector>

#include "vpnd/instance.hpp"

namespace vpnd {

/// Single-source shortest paths under exact rational edge costs.
/// parent[v] is the predecessor of v in one shortest-path tree; among
/// equal-distance predecessors the smallest vertex id wins, so the tree is
/// the same on every run and platform. parent[source] is empty.
struct ShortestPathTree {
    VertexId source = 0;
    std::vector<Rational> dist;
    std::vector<std::optional<VertexId>> parent;
    std::vector<std::optional<EdgeId>> parent_edge;

    /// Vertices of the source->v path, source first. v must be reachable
    /// (always true on a connected instance).
    std::vector<VertexId> path_from_source(VertexId v) const;
};

ShortestPathTree shortest_path_tree(const Instance& instance, VertexId root);

/// Dijkstra from a set of roots, all at distance zero, over an optional edge
/// subset (mask[e] == true means usable; empty mask means all edges).
/// nearest_root[v] is the root whose tree contains v. Unreachable vertices
/// keep dist empty. Same smallest-parent-id tie rule as above.
struct MultiSourceShortestPaths {
    std::vector<std::optional<Rational>> dist;
    std::vector<std::optional<VertexId>> parent;
    std::vector<std::optional<EdgeId>> parent_edge;
    std::vector<std::optional<VertexId>> nearest_root;

    /// Path from v to its nearest root (v first). v must be reachable.
    std::vector<VertexId> path_to_root(VertexId v) const;
    std::vector<EdgeId> path_edges_to_root(VertexId v) const;
};

MultiSourceShortestPaths multi_source_shortest_paths(
    const Instance& instance, const std::vector<VertexId>& roots,
    const std::vector<bool>& edge_mask = {});

}  // namespace vpnd

#endif  // VPND_SHORTEST_PATH_HPP
