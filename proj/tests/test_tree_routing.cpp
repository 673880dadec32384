#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "vpnd/instance.hpp"
#include "vpnd/shortest_path.hpp"
#include "vpnd/tree_routing.hpp"

using namespace vpnd;

namespace {

Instance star4() {
    return Instance::make(
        4, {{0, 1, Rational(1)}, {0, 2, Rational(1)}, {0, 3, Rational(1)}}, {0, 1, 1, 1});
}

std::vector<EdgeId> all_edges(const Instance& g) {
    std::vector<EdgeId> out;
    for (EdgeId e = 0; e < g.edge_count(); ++e) out.push_back(e);
    return out;
}

/// Random tree instance: n vertices, random parents, random costs/demands.
Instance random_tree(std::mt19937_64& rng, int n, int max_demand) {
    std::vector<Edge> edges;
    for (VertexId v = 1; v < n; ++v) {
        VertexId p = static_cast<VertexId>(
            std::uniform_int_distribution<int>(0, v - 1)(rng));
        edges.push_back(
            {p, v, Rational(std::uniform_int_distribution<int>(1, 9)(rng))});
    }
    std::vector<std::int64_t> demands(static_cast<std::size_t>(n));
    for (auto& d : demands) {
        d = std::uniform_int_distribution<int>(0, max_demand)(rng);
    }
    // at least one terminal
    if (std::all_of(demands.begin(), demands.end(), [](auto d) { return d == 0; })) {
        demands[0] = 1;
    }
    return Instance::make(n, std::move(edges), std::move(demands));
}

}  // namespace

TEST_CASE("star capacities are the leaf demands against the rest") {
    Instance g = star4();
    auto caps = tree_capacities(g, all_edges(g));
    // each edge separates one unit terminal from two others: min(1, 2) = 1
    REQUIRE(caps.size() == 3);
    for (const auto& [e, c] : caps) CHECK(c == Rational(1));

    TreeSolution t = TreeSolution::make(g, all_edges(g));
    CHECK(t.edges() == all_edges(g));
    CHECK(t.capacities() == std::vector<Rational>(3, Rational(1)));
    CHECK(t.vertices() == std::vector<VertexId>{0, 1, 2, 3});
    CHECK(tree_cost(t, ConcaveCost::identity()) == Rational(3));
}

TEST_CASE("uneven demands take the smaller side") {
    // path 0 -1- 1 -1- 2 with demands 5, 0, 2
    Instance g = Instance::make(
        3, {{0, 1, Rational(1)}, {1, 2, Rational(1)}}, {5, 0, 2});
    auto caps = tree_capacities(g, all_edges(g));
    CHECK(caps[*g.find_edge(0, 1)] == Rational(2));
    CHECK(caps[*g.find_edge(1, 2)] == Rational(2));
}

TEST_CASE("non-terminal leaves are pruned") {
    // vertex 3 dangles off the path and has no demand
    Instance g = Instance::make(
        4, {{0, 1, Rational(1)}, {1, 2, Rational(1)}, {1, 3, Rational(4)}}, {1, 0, 1, 0});
    TreeSolution t = TreeSolution::make(g, all_edges(g));
    CHECK(t.edges() == std::vector<EdgeId>{*g.find_edge(0, 1), *g.find_edge(1, 2)});
    CHECK(t.vertices() == std::vector<VertexId>{0, 1, 2});
    // tree_capacities keeps the dangling edge at capacity zero instead
    auto caps = tree_capacities(g, all_edges(g));
    CHECK(caps[*g.find_edge(1, 3)] == Rational(0));
}

TEST_CASE("make rejects non-trees and missing terminals") {
    Instance tri = Instance::make(
        3, {{0, 1, Rational(1)}, {0, 2, Rational(1)}, {1, 2, Rational(1)}}, {1, 1, 1});
    CHECK_THROWS_AS(TreeSolution::make(tri, all_edges(tri)), ValidationError);  // cycle
    CHECK_THROWS_AS(TreeSolution::make(tri, {*tri.find_edge(0, 1)}),
                    ValidationError);  // terminal 2 missing
    CHECK_THROWS_AS(TreeSolution::make(tri, {}), ValidationError);
    // single terminal: empty tree is the unique solution
    Instance single = Instance::make(2, {{0, 1, Rational(1)}}, {1, 0});
    TreeSolution t = TreeSolution::make(single, {});
    CHECK(t.edges().empty());
    CHECK(t.vertices() == std::vector<VertexId>{0});
    CHECK(tree_cost(t, ConcaveCost::identity()) == Rational(0));
}

TEST_CASE("median value equals min-side tree cost on random trees") {
    std::mt19937_64 rng(424242);
    for (int iter = 0; iter < 500; ++iter) {
        int n = std::uniform_int_distribution<int>(1, 12)(rng);
        Instance g = random_tree(rng, n, 3);
        TreeMedian med = tree_median_value(g, all_edges(g));

        // independent evaluation: sum of c_e * min-side over tree_capacities
        auto caps = tree_capacities(g, all_edges(g));
        Rational by_caps(0);
        for (const auto& [e, c] : caps) by_caps += g.edge(e).cost * c;
        CHECK(med.value == by_caps);

        // and the median really is the argmin of sum_w b_w * dist(w, r)
        Rational at_median(-1);
        Rational best(-1);
        for (VertexId r = 0; r < n; ++r) {
            Rational total(0);
            auto spt = shortest_path_tree(g, r);
            for (VertexId w = 0; w < n; ++w) {
                total += Rational(g.demand(w)) * spt.dist[static_cast<std::size_t>(w)];
            }
            if (r == med.median) at_median = total;
            if (best < Rational(0) || total < best) best = total;
        }
        CHECK(at_median == med.value);
        CHECK(best == med.value);
    }
}

TEST_CASE("extract_paths routes every pair along the tree") {
    Instance g = star4();
    TreeSolution t = TreeSolution::make(g, all_edges(g));
    Routing r = extract_paths(t);
    REQUIRE(r.paths().size() == 3);  // pairs (1,2), (1,3), (2,3)
    CHECK(r.paths().at({1, 2}) == std::vector<VertexId>{1, 0, 2});
    CHECK(r.paths().at({1, 3}) == std::vector<VertexId>{1, 0, 3});
    CHECK(r.paths().at({2, 3}) == std::vector<VertexId>{2, 0, 3});
    CHECK(r.capacity(*g.find_edge(0, 1)) == Rational(1));
    CHECK(r.path_edges({1, 2}) ==
          std::vector<EdgeId>{*g.find_edge(0, 1), *g.find_edge(0, 2)});
}

TEST_CASE("routing validation") {
    Instance g = star4();
    std::map<EdgeId, Rational> caps;
    std::map<TerminalPair, std::vector<VertexId>> paths = {
        {{1, 2}, {1, 0, 2}}, {{1, 3}, {1, 0, 3}}, {{2, 3}, {2, 0, 3}}};
    CHECK_NOTHROW(Routing::make(g, paths, caps));

    auto missing = paths;
    missing.erase({2, 3});
    CHECK_THROWS_AS(Routing::make(g, missing, caps), ValidationError);

    auto bad_endpoint = paths;
    bad_endpoint[{1, 2}] = {1, 0, 3};
    CHECK_THROWS_AS(Routing::make(g, bad_endpoint, caps), ValidationError);

    auto not_a_walk = paths;
    not_a_walk[{1, 2}] = {1, 2};  // no edge 1-2 in the star
    CHECK_THROWS_AS(Routing::make(g, not_a_walk, caps), ValidationError);

    auto revisits = paths;
    revisits[{1, 2}] = {1, 0, 3, 0, 2};
    CHECK_THROWS_AS(Routing::make(g, revisits, caps), ValidationError);
}

TEST_CASE("serialize and parse a tree solution") {
    Instance g = star4();
    TreeSolution t = TreeSolution::make(g, all_edges(g));
    std::string text = serialize_tree_solution(t, ConcaveCost::identity());
    CHECK(text ==
          "tree-edge 1 2 1\n"
          "tree-edge 1 3 1\n"
          "tree-edge 1 4 1\n"
          "cost 3\n");

    ParsedTree parsed = parse_tree_solution(g, text);
    CHECK(parsed.edges == t.edges());
    CHECK(parsed.stated_cost == Rational(3));
    CHECK(parsed.stated_capacities.at(*g.find_edge(0, 1)) == Rational(1));

    // solver metadata lines are skipped
    ParsedTree with_meta = parse_tree_solution(
        g, "value 3\nroot 1\nsource 2\nseed 99\n" + text);
    CHECK(with_meta.edges == parsed.edges);
    CHECK(with_meta.stated_cost == parsed.stated_cost);

    CHECK_THROWS_AS(parse_tree_solution(g, "tree-edge 1 5 1\ncost 0\n"), ParseError);
    CHECK_THROWS_AS(parse_tree_solution(g, "tree-edge 2 3 1\ncost 1\n"),
                    ParseError);  // no such edge
    CHECK_THROWS_AS(parse_tree_solution(g, "wat 1\n"), ParseError);
}

TEST_CASE("nonlinear cost reprices installed capacities") {
    // path 0 -2- 1 -2- 2, unit demands at the ends
    Instance g = Instance::make(
        3, {{0, 1, Rational(2)}, {1, 2, Rational(2)}}, {1, 0, 1});
    TreeSolution t = TreeSolution::make(g, all_edges(g));
    CHECK(tree_cost(t, ConcaveCost::identity()) == Rational(4));
    // f(x) = min(3x, 2): caps are 1 each, f(1) = 2
    ConcaveCost f = ConcaveCost::rent_or_buy(Rational(3), Rational(2));
    CHECK(tree_cost(t, f) == Rational(8));
}
