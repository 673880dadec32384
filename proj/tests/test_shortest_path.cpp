#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>
#include <vector>

#include "vpnd/instance.hpp"
#include "vpnd/shortest_path.hpp"

using namespace vpnd;

namespace {

Instance path3() {
    // 0 -2- 1 -3- 2
    return Instance::make(3, {{0, 1, Rational(2)}, {1, 2, Rational(3)}}, {1, 0, 1});
}

Instance triangle() {
    // direct edge 0-2 costs 3, detour through 1 costs 2
    return Instance::make(
        3, {{0, 1, Rational(1)}, {1, 2, Rational(1)}, {0, 2, Rational(3)}}, {1, 1, 1});
}

/// All-pairs shortest distances by exhaustive simple-path enumeration.
std::vector<std::vector<Rational>> brute_force_dists(const Instance& g) {
    int n = g.vertex_count();
    std::vector<std::vector<Rational>> best(
        static_cast<std::size_t>(n),
        std::vector<Rational>(static_cast<std::size_t>(n), Rational(-1)));
    for (VertexId s = 0; s < n; ++s) {
        std::vector<bool> used(static_cast<std::size_t>(n), false);
        auto dfs = [&](auto&& self, VertexId v, const Rational& acc) -> void {
            auto& slot = best[static_cast<std::size_t>(s)][static_cast<std::size_t>(v)];
            if (slot < Rational(0) || acc < slot) slot = acc;
            used[static_cast<std::size_t>(v)] = true;
            for (const auto& [w, e] : g.neighbors(v)) {
                if (!used[static_cast<std::size_t>(w)]) {
                    self(self, w, Rational(acc + g.edge(e).cost));
                }
            }
            used[static_cast<std::size_t>(v)] = false;
        };
        dfs(dfs, s, Rational(0));
    }
    return best;
}

Instance random_graph(std::mt19937_64& rng, int n) {
    std::vector<Edge> edges;
    std::uniform_int_distribution<int> cost(0, 6);
    // random spanning tree first, then extra edges
    for (VertexId v = 1; v < n; ++v) {
        VertexId p = static_cast<VertexId>(
            std::uniform_int_distribution<int>(0, v - 1)(rng));
        edges.push_back({p, v, Rational(cost(rng))});
    }
    for (VertexId u = 0; u < n; ++u) {
        for (VertexId v = u + 1; v < n; ++v) {
            bool present = std::any_of(edges.begin(), edges.end(), [&](const Edge& e) {
                return (e.u == u && e.v == v) || (e.u == v && e.v == u);
            });
            if (!present && std::uniform_int_distribution<int>(0, 3)(rng) == 0) {
                edges.push_back({u, v, Rational(cost(rng))});
            }
        }
    }
    std::vector<std::int64_t> demands(static_cast<std::size_t>(n), 1);
    return Instance::make(n, std::move(edges), std::move(demands));
}

}  // namespace

TEST_CASE("distances on a path") {
    ShortestPathTree t = shortest_path_tree(path3(), 0);
    CHECK(t.dist == std::vector<Rational>{Rational(0), Rational(2), Rational(5)});
    CHECK(!t.parent[0]);
    CHECK(*t.parent[1] == 0);
    CHECK(*t.parent[2] == 1);
    CHECK(t.path_from_source(2) == std::vector<VertexId>{0, 1, 2});
    CHECK(t.path_from_source(0) == std::vector<VertexId>{0});
}

TEST_CASE("detour beats direct edge") {
    ShortestPathTree t = shortest_path_tree(triangle(), 0);
    CHECK(t.dist[2] == Rational(2));
    CHECK(*t.parent[2] == 1);
    CHECK(*t.parent_edge[2] == *triangle().find_edge(1, 2));
}

TEST_CASE("zero-cost edges are fine") {
    Instance g = Instance::make(
        4,
        {{0, 1, Rational(0)}, {1, 2, Rational(0)}, {2, 3, Rational(1)}, {0, 3, Rational(2)}},
        {1, 0, 0, 1});
    ShortestPathTree t = shortest_path_tree(g, 0);
    CHECK(t.dist[3] == Rational(1));
    CHECK(t.path_from_source(3) == std::vector<VertexId>{0, 1, 2, 3});
}

TEST_CASE("ties go to the smallest parent id") {
    // two equal-cost routes to vertex 3: via 1 and via 2
    Instance g = Instance::make(
        4,
        {{0, 1, Rational(1)}, {0, 2, Rational(1)}, {1, 3, Rational(1)}, {2, 3, Rational(1)}},
        {1, 0, 0, 1});
    ShortestPathTree t = shortest_path_tree(g, 0);
    CHECK(t.dist[3] == Rational(2));
    CHECK(*t.parent[3] == 1);
}

TEST_CASE("matches exhaustive search on random graphs") {
    std::mt19937_64 rng(20240711);
    for (int iter = 0; iter < 60; ++iter) {
        int n = std::uniform_int_distribution<int>(2, 8)(rng);
        Instance g = random_graph(rng, n);
        auto brute = brute_force_dists(g);
        for (VertexId s = 0; s < n; ++s) {
            ShortestPathTree t = shortest_path_tree(g, s);
            for (VertexId v = 0; v < n; ++v) {
                CHECK(t.dist[static_cast<std::size_t>(v)] ==
                      brute[static_cast<std::size_t>(s)][static_cast<std::size_t>(v)]);
            }
            // the tree path realizes the distance
            for (VertexId v = 0; v < n; ++v) {
                auto path = t.path_from_source(v);
                REQUIRE(path.front() == s);
                REQUIRE(path.back() == v);
                Rational total(0);
                for (std::size_t i = 0; i + 1 < path.size(); ++i) {
                    auto e = g.find_edge(path[i], path[i + 1]);
                    REQUIRE(e.has_value());
                    total += g.edge(*e).cost;
                }
                CHECK(total == t.dist[static_cast<std::size_t>(v)]);
            }
        }
    }
}

TEST_CASE("runs are deterministic") {
    std::mt19937_64 rng(7);
    Instance g = random_graph(rng, 8);
    ShortestPathTree a = shortest_path_tree(g, 0);
    ShortestPathTree b = shortest_path_tree(g, 0);
    CHECK(a.dist == b.dist);
    CHECK(a.parent == b.parent);
    CHECK(a.parent_edge == b.parent_edge);
}

TEST_CASE("multi-source assigns nearest root") {
    Instance g = path3();
    MultiSourceShortestPaths m = multi_source_shortest_paths(g, {0, 2});
    CHECK(*m.dist[0] == Rational(0));
    CHECK(*m.dist[1] == Rational(2));
    CHECK(*m.dist[2] == Rational(0));
    CHECK(*m.nearest_root[0] == 0);
    CHECK(*m.nearest_root[1] == 0);
    CHECK(*m.nearest_root[2] == 2);
    CHECK(m.path_to_root(1) == std::vector<VertexId>{1, 0});
    CHECK(m.path_edges_to_root(1) == std::vector<EdgeId>{*g.find_edge(0, 1)});
    CHECK(m.path_edges_to_root(0).empty());
}

TEST_CASE("edge mask restricts the search") {
    Instance g = triangle();
    std::vector<bool> mask(static_cast<std::size_t>(g.edge_count()), true);
    mask[static_cast<std::size_t>(*g.find_edge(1, 2))] = false;
    MultiSourceShortestPaths m = multi_source_shortest_paths(g, {0}, mask);
    CHECK(*m.dist[2] == Rational(3));  // detour closed, direct edge only

    // disconnect vertex 2 entirely
    mask[static_cast<std::size_t>(*g.find_edge(0, 2))] = false;
    MultiSourceShortestPaths m2 = multi_source_shortest_paths(g, {0}, mask);
    CHECK(!m2.dist[2].has_value());
    CHECK(*m2.dist[1] == Rational(1));
}
