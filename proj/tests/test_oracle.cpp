#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "vpnd/exact.hpp"
#include "vpnd/generator.hpp"
#include "vpnd/oracle.hpp"
#include "vpnd/tree_routing.hpp"

using namespace vpnd;

namespace {

Routing tree_routing(const Instance& g, std::vector<EdgeId> edges) {
    return extract_paths(TreeSolution::make(g, std::move(edges)));
}

std::vector<EdgeId> all_edges(const Instance& g) {
    std::vector<EdgeId> out;
    for (EdgeId e = 0; e < g.edge_count(); ++e) out.push_back(e);
    return out;
}

}  // namespace

TEST_CASE("demand matrix validation and serialization") {
    Instance g = Instance::make(
        3, {{0, 1, Rational(1)}, {1, 2, Rational(1)}}, {2, 0, 1});
    DemandMatrix m = DemandMatrix::make(g, {{{0, 2}, Rational(1)}});
    CHECK(m.value(0, 2) == Rational(1));
    CHECK(m.value(2, 0) == Rational(1));
    CHECK(m.value(0, 1) == Rational(0));
    CHECK(m.serialize() == "demand 1 3 1\n");

    // unsorted pair, non-terminal member, negative entry, row overflow
    CHECK_THROWS_AS(DemandMatrix::make(g, {{{2, 0}, Rational(1)}}), ValidationError);
    CHECK_THROWS_AS(DemandMatrix::make(g, {{{0, 1}, Rational(1)}}), ValidationError);
    CHECK_THROWS_AS(DemandMatrix::make(g, {{{0, 2}, Rational(-1)}}), ValidationError);
    CHECK_THROWS_AS(DemandMatrix::make(g, {{{0, 2}, Rational(3, 2)}}), ValidationError);
}

TEST_CASE("two terminals load an edge with the smaller bound") {
    // path 0 -- 1 -- 2, b = (3, 0, 2), both pair paths along the path
    Instance g = Instance::make(
        3, {{0, 1, Rational(1)}, {1, 2, Rational(1)}}, {3, 0, 2});
    Routing r = tree_routing(g, all_edges(g));
    CHECK(capacity_requirement(g, r, 0) == Rational(2));
    CHECK(capacity_requirement(g, r, 1) == Rational(2));

    CapacityWitness w = capacity_requirement_witness(g, r, 0);
    CHECK(w.value == Rational(2));
    CHECK(w.witness.value(0, 2) == Rational(2));
}

TEST_CASE("an edge off every path needs nothing") {
    Instance g = Instance::make(
        3, {{0, 1, Rational(1)}, {1, 2, Rational(1)}, {0, 2, Rational(5)}}, {1, 0, 1});
    // route the lone pair over the two cheap edges; the direct edge is idle
    Routing r = Routing::make(g, {{{0, 2}, {0, 1, 2}}}, {});
    CHECK(capacity_requirement(g, r, *g.find_edge(0, 2)) == Rational(0));
    CHECK(capacity_requirement(g, r, *g.find_edge(0, 1)) == Rational(1));
}

TEST_CASE("two pairs across a bridge share the common row bound") {
    // terminals 0, 1 at hub 3; terminal 2 at hub 4; pairs (0,2) and (1,2)
    // cross the bridge, and both are capped by b_2 = 1 together
    Instance h = Instance::make(
        5,
        {{0, 3, Rational(1)}, {1, 3, Rational(1)}, {2, 4, Rational(1)}, {3, 4, Rational(1)}},
        {1, 1, 1, 0, 0});
    EdgeId hb = *h.find_edge(3, 4);
    Routing hr = Routing::make(h,
                               {{{0, 1}, {0, 3, 1}},
                                {{0, 2}, {0, 3, 4, 2}},
                                {{1, 2}, {1, 3, 4, 2}}},
                               {});
    CHECK(capacity_requirement(h, hr, hb) == Rational(1));
}

TEST_CASE("three unit terminals through one edge need three halves") {
    // two-hub gadget: 0 and 2 at hub 3, 1 at hub 4, plus a private edge
    // 0 -- 4 so every pair can cross the bridge 3 -- 4 on a simple path.
    // Max load = max d01 + d02 + d12 with unit row sums = 3/2, the
    // half-integral optimum no integral matrix attains.
    Instance k = Instance::make(
        5,
        {{0, 3, Rational(1)},
         {1, 4, Rational(1)},
         {2, 3, Rational(1)},
         {0, 4, Rational(3)},
         {3, 4, Rational(1)}},
        {1, 1, 1, 0, 0});
    EdgeId kb = *k.find_edge(3, 4);
    Routing kr = Routing::make(k,
                               {{{0, 1}, {0, 3, 4, 1}},
                                {{0, 2}, {0, 4, 3, 2}},
                                {{1, 2}, {1, 4, 3, 2}}},
                               {});
    CHECK(capacity_requirement(k, kr, kb) == Rational(3, 2));
    CapacityWitness kw = capacity_requirement_witness(k, kr, kb);
    CHECK(kw.value == Rational(3, 2));
    // the LP optimum is unique: the all-halves perfect matching
    CHECK(kw.witness.value(0, 1) == Rational(1, 2));
    CHECK(kw.witness.value(0, 2) == Rational(1, 2));
    CHECK(kw.witness.value(1, 2) == Rational(1, 2));
}

TEST_CASE("quarter grid never beats the half grid") {
    std::mt19937_64 rng(271);
    int done = 0;
    for (int iter = 0; iter < 60 && done < 30; ++iter) {
        GenParams params;
        params.n = std::uniform_int_distribution<int>(2, 5)(rng);
        params.edge_prob = Rational(3, 5);
        params.max_cost = 3;
        params.max_demand = 2;
        Instance g = gen_instance(params, rng());
        if (g.terminals().size() < 2) continue;
        ExactResult exact = solve_exact_linear(g);
        Routing r = extract_paths(exact.solution);
        for (EdgeId e = 0; e < g.edge_count(); ++e) {
            CHECK(capacity_requirement(g, r, e) ==
                  capacity_requirement_quarter_grid(g, r, e));
        }
        ++done;
    }
    CHECK(done == 30);
}

TEST_CASE("size caps are hard errors") {
    // 7 terminals on a star: capacity oracle refuses
    std::vector<Edge> edges;
    std::vector<std::int64_t> demands{0};
    for (VertexId v = 1; v <= 7; ++v) {
        edges.push_back({0, v, Rational(1)});
        demands.push_back(1);
    }
    Instance big = Instance::make(8, edges, demands);
    Routing r = tree_routing(big, all_edges(big));
    CHECK_THROWS_AS(capacity_requirement(big, r, 0), SizeCapError);
    CHECK_THROWS_AS(verify_feasible(big, r), SizeCapError);
    // 9 vertices: tree oracle refuses
    edges.push_back({0, 8, Rational(1)});
    demands.push_back(1);
    Instance nine = Instance::make(9, edges, demands);
    CHECK_THROWS_AS(optimal_tree_oracle(nine, ConcaveCost::identity()), SizeCapError);
    CHECK_THROWS_AS(steiner_tree_optimum(nine, nine.terminals()), SizeCapError);
    // demand above the cap
    Instance heavy = Instance::make(2, {{0, 1, Rational(1)}}, {5, 5});
    Routing hr = tree_routing(heavy, {0});
    CHECK_THROWS_AS(capacity_requirement(heavy, hr, 0), SizeCapError);
    // routing oracle caps: 6 vertices / demand 3 / 5 terminals
    Instance six = Instance::make(
        6,
        {{0, 1, Rational(1)}, {1, 2, Rational(1)}, {2, 3, Rational(1)},
         {3, 4, Rational(1)}, {4, 5, Rational(1)}},
        {1, 0, 0, 0, 0, 1});
    CHECK_THROWS_AS(optimal_routing_oracle(six, ConcaveCost::identity()), SizeCapError);
    Instance three = Instance::make(2, {{0, 1, Rational(1)}}, {3, 1});
    CHECK_THROWS_AS(optimal_routing_oracle(three, ConcaveCost::identity()), SizeCapError);
    // 5 terminals exceed the routing cap even at 5 vertices
    Instance five = Instance::make(
        5,
        {{0, 1, Rational(1)}, {1, 2, Rational(1)}, {2, 3, Rational(1)}, {3, 4, Rational(1)}},
        {1, 1, 1, 1, 1});
    CHECK_THROWS_AS(optimal_routing_oracle(five, ConcaveCost::identity()), SizeCapError);
}

TEST_CASE("tree oracle agrees with hand optima") {
    Instance star = Instance::make(
        4, {{0, 1, Rational(1)}, {0, 2, Rational(1)}, {0, 3, Rational(1)}}, {0, 1, 1, 1});
    TreeOracleResult r = optimal_tree_oracle(star, ConcaveCost::identity());
    CHECK(r.value == Rational(3));
    CHECK(r.tree_edges == all_edges(star));

    // two terminals, expensive direct edge: optimum takes the detour
    Instance tri = Instance::make(
        3, {{0, 1, Rational(5)}, {0, 2, Rational(1)}, {1, 2, Rational(1)}}, {1, 1, 0});
    TreeOracleResult t = optimal_tree_oracle(tri, ConcaveCost::identity());
    CHECK(t.value == Rational(2));
    CHECK(t.tree_edges == std::vector<EdgeId>{*tri.find_edge(0, 2), *tri.find_edge(1, 2)});

    // concave pricing can prefer sharing: f = min(3x, 4)
    ConcaveCost f = ConcaveCost::rent_or_buy(Rational(3), Rational(4));
    TreeOracleResult shared = optimal_tree_oracle(star, f);
    // every edge carries capacity 1: min(3, 4) each
    CHECK(shared.value == Rational(9));
}

TEST_CASE("steiner optimum on hand instances") {
    Instance path = Instance::make(
        4, {{0, 1, Rational(1)}, {1, 2, Rational(1)}, {2, 3, Rational(1)}}, {1, 0, 0, 1});
    SteinerOracleResult r = steiner_tree_optimum(path, {0, 3});
    CHECK(r.value == Rational(3));
    CHECK(r.tree_edges == all_edges(path));
    CHECK(steiner_tree_optimum(path, {2}).value == Rational(0));

    // Steiner point pays off: three terminals around a cheap hub
    Instance hub = Instance::make(
        4,
        {{0, 1, Rational(3)}, {0, 2, Rational(3)}, {1, 2, Rational(3)},
         {0, 3, Rational(2)}, {1, 3, Rational(2)}, {2, 3, Rational(2)}},
        {1, 1, 1, 0});
    SteinerOracleResult h = steiner_tree_optimum(hub, {0, 1, 2});
    CHECK(h.value == Rational(6));  // through the hub, not 3 + 3
}

TEST_CASE("routing oracle equals tree oracle on small instances") {
    std::mt19937_64 rng(11235);
    int done = 0;
    for (int iter = 0; iter < 80 && done < 25; ++iter) {
        GenParams params;
        params.n = std::uniform_int_distribution<int>(2, 5)(rng);
        params.edge_prob = Rational(3, 5);
        params.max_cost = 4;
        params.max_demand = 2;
        Instance g = gen_instance(params, rng());
        if (static_cast<int>(g.terminals().size()) > OracleCaps::kMaxTerminalsRouting) {
            continue;
        }
        for (const ConcaveCost& f :
             {ConcaveCost::identity(), ConcaveCost::rent_or_buy(Rational(1), Rational(2)),
              ConcaveCost::make({{Rational(0), Rational(0)}, {Rational(1), Rational(2)}},
                                Rational(1, 2))}) {
            Rational routing = optimal_routing_oracle(g, f);
            TreeOracleResult tree = optimal_tree_oracle(g, f);
            CHECK(routing <= tree.value);
            CHECK(routing == tree.value);
        }
        ++done;
    }
    CHECK(done == 25);
}

TEST_CASE("verify_feasible accepts exact solutions and rejects undercuts") {
    Instance g = Instance::make(
        4, {{0, 1, Rational(1)}, {0, 2, Rational(1)}, {0, 3, Rational(1)}}, {0, 1, 1, 1});
    TreeSolution t = TreeSolution::make(g, all_edges(g));
    Routing good = extract_paths(t);
    FeasibilityReport ok = verify_feasible(g, good);
    CHECK(ok.feasible);
    CHECK(!ok.violating_edge);
    CHECK(!ok.certificate);

    // same paths, halved capacity on one edge
    std::map<EdgeId, Rational> caps = good.capacities();
    caps[0] = Rational(1, 2);
    Routing bad = Routing::make(g, good.paths(), caps);
    FeasibilityReport rep = verify_feasible(g, bad);
    CHECK(!rep.feasible);
    CHECK(*rep.violating_edge == 0);
    CHECK(*rep.required == Rational(1));
    CHECK(*rep.installed == Rational(1, 2));
    REQUIRE(rep.certificate.has_value());
    // the certificate actually overloads the edge: demand (>= 1) across cap 1/2
    Rational load(0);
    for (const auto& [pair, d] : rep.certificate->values()) {
        for (EdgeId e : bad.path_edges(pair)) {
            if (e == 0) load += d;
        }
    }
    CHECK(load == Rational(1));
    CHECK(load > *rep.installed);
}

TEST_CASE("verify_feasible is vacuous with a single terminal") {
    Instance g = Instance::make(2, {{0, 1, Rational(1)}}, {1, 0});
    Routing r = Routing::make(g, {}, {});
    FeasibilityReport rep = verify_feasible(g, r);
    CHECK(rep.feasible);
}

TEST_CASE("exact solutions verify across a random batch") {
    std::mt19937_64 rng(90210);
    for (int iter = 0; iter < 40; ++iter) {
        GenParams params;
        params.n = std::uniform_int_distribution<int>(2, 6)(rng);
        params.edge_prob = Rational(1, 2);
        params.max_cost = 5;
        params.max_demand = 3;
        Instance g = gen_instance(params, rng());
        std::int64_t max_b = *std::max_element(g.demands().begin(), g.demands().end());
        if (static_cast<int>(g.terminals().size()) > OracleCaps::kMaxTerminalsCapacity ||
            max_b > OracleCaps::kMaxDemandCapacity) {
            continue;
        }
        ExactResult exact = solve_exact_linear(g);
        FeasibilityReport rep = verify_feasible(g, extract_paths(exact.solution));
        CHECK(rep.feasible);
    }
}
