#include "vpnd/shortest_path.hpp"

#include <algorithm>
#include <queue>

#include "vpnd/errors.hpp"

namespace vpnd {

namespace {

struct HeapEntry {
    Rational dist;
    VertexId vertex;
    bool operator>(const HeapEntry& o) const {
        return dist > o.dist || (dist == o.dist && vertex > o.vertex);
    }
};

// Dijkstra over an optional edge mask. Distances only; parents are assigned
// afterwards so heap pop order cannot influence the tree shape.
std::vector<std::optional<Rational>> dijkstra(const Instance& instance,
                                              const std::vector<VertexId>& roots,
                                              const std::vector<bool>& edge_mask) {
    std::vector<std::optional<Rational>> dist(
        static_cast<std::size_t>(instance.vertex_count()));
    std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<>> heap;
    for (VertexId r : roots) {
        dist[static_cast<std::size_t>(r)] = Rational(0);
        heap.push({Rational(0), r});
    }
    while (!heap.empty()) {
        auto [d, v] = heap.top();
        heap.pop();
        if (d > *dist[static_cast<std::size_t>(v)]) continue;
        for (const auto& [w, e] : instance.neighbors(v)) {
            if (!edge_mask.empty() && !edge_mask[static_cast<std::size_t>(e)]) continue;
            Rational nd = d + instance.edge(e).cost;
            auto& dw = dist[static_cast<std::size_t>(w)];
            if (!dw || nd < *dw) {
                dw = nd;
                heap.push({std::move(nd), w});
            }
        }
    }
    return dist;
}

}  // namespace

std::vector<VertexId> ShortestPathTree::path_from_source(VertexId v) const {
    std::vector<VertexId> path{v};
    while (parent[static_cast<std::size_t>(v)]) {
        v = *parent[static_cast<std::size_t>(v)];
        path.push_back(v);
    }
    std::reverse(path.begin(), path.end());
    return path;
}

ShortestPathTree shortest_path_tree(const Instance& instance, VertexId root) {
    if (root < 0 || root >= instance.vertex_count())
        throw ValidationError("shortest path root out of range");
    auto msp = multi_source_shortest_paths(instance, {root});
    ShortestPathTree tree;
    tree.source = root;
    tree.dist.reserve(msp.dist.size());
    for (const auto& d : msp.dist) tree.dist.push_back(*d);  // connected graph
    tree.parent = std::move(msp.parent);
    tree.parent_edge = std::move(msp.parent_edge);
    return tree;
}

std::vector<VertexId> MultiSourceShortestPaths::path_to_root(VertexId v) const {
    std::vector<VertexId> path{v};
    while (parent[static_cast<std::size_t>(v)]) {
        v = *parent[static_cast<std::size_t>(v)];
        path.push_back(v);
    }
    return path;
}

std::vector<EdgeId> MultiSourceShortestPaths::path_edges_to_root(VertexId v) const {
    std::vector<EdgeId> edges;
    while (parent_edge[static_cast<std::size_t>(v)]) {
        edges.push_back(*parent_edge[static_cast<std::size_t>(v)]);
        v = *parent[static_cast<std::size_t>(v)];
    }
    return edges;
}

MultiSourceShortestPaths multi_source_shortest_paths(const Instance& instance,
                                                     const std::vector<VertexId>& roots,
                                                     const std::vector<bool>& edge_mask) {
    if (roots.empty()) throw ValidationError("need at least one shortest path root");
    for (VertexId r : roots)
        if (r < 0 || r >= instance.vertex_count())
            throw ValidationError("shortest path root out of range");

    MultiSourceShortestPaths res;
    res.dist = dijkstra(instance, roots, edge_mask);
    std::size_t n = res.dist.size();
    res.parent.resize(n);
    res.parent_edge.resize(n);
    res.nearest_root.resize(n);

    std::vector<bool> is_root(n, false);
    for (VertexId r : roots) is_root[static_cast<std::size_t>(r)] = true;

    // w is a tight predecessor of v when the edge closes a shortest path.
    auto tight = [&](VertexId v, VertexId w, EdgeId e) {
        if (!edge_mask.empty() && !edge_mask[static_cast<std::size_t>(e)]) return false;
        const auto& dw = res.dist[static_cast<std::size_t>(w)];
        return dw.has_value() &&
               *dw + instance.edge(e).cost == *res.dist[static_cast<std::size_t>(v)];
    };

    std::vector<VertexId> reachable;
    bool has_zero_cost_edge = false;
    for (VertexId v = 0; v < instance.vertex_count(); ++v)
        if (res.dist[static_cast<std::size_t>(v)]) reachable.push_back(v);
    for (EdgeId e = 0; e < instance.edge_count(); ++e)
        if (instance.edge(e).cost == 0 &&
            (edge_mask.empty() || edge_mask[static_cast<std::size_t>(e)]))
            has_zero_cost_edge = true;

    std::vector<VertexId> resolution_order;  // parents precede children
    resolution_order.reserve(reachable.size());
    std::sort(reachable.begin(), reachable.end(), [&](VertexId a, VertexId b) {
        const auto& da = *res.dist[static_cast<std::size_t>(a)];
        const auto& db = *res.dist[static_cast<std::size_t>(b)];
        return da < db || (da == db && a < b);
    });

    if (!has_zero_cost_edge) {
        // Every tight predecessor is strictly closer to the roots, so the
        // smallest-id one is always a safe parent.
        for (VertexId v : reachable) {
            resolution_order.push_back(v);
            if (is_root[static_cast<std::size_t>(v)]) continue;
            for (const auto& [w, e] : instance.neighbors(v)) {
                if (tight(v, w, e)) {
                    res.parent[static_cast<std::size_t>(v)] = w;
                    res.parent_edge[static_cast<std::size_t>(v)] = e;
                    break;
                }
            }
        }
    } else {
        // Zero-cost edges allow tight cycles inside equal-distance plateaus.
        // Resolve vertices one at a time: always pick the unresolved vertex
        // with the smallest (dist, id) that has a resolved tight predecessor
        // and hang it below its smallest-id resolved predecessor. Always
        // possible (walk any shortest path from a root) and cycle-free by
        // construction.
        std::vector<bool> resolved(n, false);
        std::size_t done = 0;
        for (VertexId r : roots) {
            if (!resolved[static_cast<std::size_t>(r)]) {
                resolved[static_cast<std::size_t>(r)] = true;
                resolution_order.push_back(r);
                ++done;
            }
        }
        while (done < reachable.size()) {
            bool progress = false;
            for (VertexId v : reachable) {
                auto sv = static_cast<std::size_t>(v);
                if (resolved[sv]) continue;
                for (const auto& [w, e] : instance.neighbors(v)) {
                    if (resolved[static_cast<std::size_t>(w)] && tight(v, w, e)) {
                        res.parent[sv] = w;
                        res.parent_edge[sv] = e;
                        resolved[sv] = true;
                        resolution_order.push_back(v);
                        ++done;
                        progress = true;
                        break;
                    }
                }
                if (progress) break;
            }
            if (!progress) throw Error("internal: shortest path tree resolution stalled");
        }
    }

    for (VertexId v : resolution_order) {
        auto sv = static_cast<std::size_t>(v);
        res.nearest_root[sv] =
            is_root[sv] ? v : res.nearest_root[static_cast<std::size_t>(*res.parent[sv])];
    }
    return res;
}

}  // namespace vpnd
