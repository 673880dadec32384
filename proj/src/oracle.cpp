#include "vpnd/oracle.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>

#include "vpnd/errors.hpp"

namespace vpnd {

namespace {

void check_capacity_caps(const Instance& instance) {
    if (static_cast<int>(instance.terminals().size()) > OracleCaps::kMaxTerminalsCapacity)
        throw SizeCapError("capacity oracle cap exceeded: more than " +
                           std::to_string(OracleCaps::kMaxTerminalsCapacity) + " terminals");
    for (VertexId w : instance.terminals())
        if (instance.demand(w) > OracleCaps::kMaxDemandCapacity)
            throw SizeCapError("capacity oracle cap exceeded: demand above " +
                               std::to_string(OracleCaps::kMaxDemandCapacity));
}

struct MatchingResult {
    Rational value;
    std::map<TerminalPair, Rational> witness;
};

// Maximum of sum d_uv over the given pairs subject to the per-terminal
// bounds sum_u d_uv <= b_v, with entries restricted to multiples of 1/step.
// Plain depth-first search in 1/step units, largest values first, pruned by
// the remaining-capacity bound: whatever is left can add at most
// sum_v rem_v / 2.
MatchingResult max_restricted_matching(const Instance& instance,
                                       const std::vector<TerminalPair>& pairs, int step) {
    std::vector<std::int64_t> rem(static_cast<std::size_t>(instance.vertex_count()), 0);
    std::int64_t rem_total = 0;
    for (VertexId w : instance.terminals()) {
        rem[static_cast<std::size_t>(w)] = instance.demand(w) * step;
        rem_total += instance.demand(w) * step;
    }

    std::int64_t best = -1;
    std::vector<std::int64_t> current(pairs.size(), 0), best_assign(pairs.size(), 0);

    auto recurse = [&](auto&& self, std::size_t idx, std::int64_t value,
                       std::int64_t rem_sum) -> void {
        if (value + rem_sum / 2 <= best) return;
        if (idx == pairs.size()) {
            if (value > best) {
                best = value;
                best_assign = current;
            }
            return;
        }
        auto [u, v] = pairs[idx];
        std::int64_t cap = std::min(rem[static_cast<std::size_t>(u)],
                                    rem[static_cast<std::size_t>(v)]);
        for (std::int64_t d = cap; d >= 0; --d) {
            current[idx] = d;
            rem[static_cast<std::size_t>(u)] -= d;
            rem[static_cast<std::size_t>(v)] -= d;
            self(self, idx + 1, value + d, rem_sum - 2 * d);
            rem[static_cast<std::size_t>(u)] += d;
            rem[static_cast<std::size_t>(v)] += d;
        }
        current[idx] = 0;
    };
    recurse(recurse, 0, 0, rem_total);

    MatchingResult result;
    result.value = Rational(best, step);
    for (std::size_t i = 0; i < pairs.size(); ++i)
        if (best_assign[i] > 0) result.witness[pairs[i]] = Rational(best_assign[i], step);
    return result;
}

std::vector<TerminalPair> pairs_through_edge(const Routing& routing, EdgeId e) {
    // Pairs not routed through e never help the maximum (they only consume
    // demand bounds), so the search is restricted to these.
    std::vector<TerminalPair> pairs;
    for (const auto& [pair, path] : routing.paths()) {
        auto edges = routing.path_edges(pair);
        if (std::find(edges.begin(), edges.end(), e) != edges.end()) pairs.push_back(pair);
    }
    return pairs;
}

CapacityWitness capacity_witness_on_grid(const Instance& instance, const Routing& routing,
                                         EdgeId e, int step) {
    check_capacity_caps(instance);
    if (e < 0 || e >= instance.edge_count())
        throw ValidationError("edge id out of range");
    auto result = max_restricted_matching(instance, pairs_through_edge(routing, e), step);
    return CapacityWitness{result.value,
                           DemandMatrix::make(instance, std::move(result.witness))};
}

// Cost of a tree given as an edge list: min-side capacities priced by f.
// Also reports the canonical pruned edge list (edges with positive
// capacity); zero-capacity edges hang toward terminal-free branches and
// contribute f(0) = 0.
struct TreeEval {
    Rational value;
    std::vector<EdgeId> pruned_edges;
};

TreeEval eval_tree_edges(const Instance& instance, const std::vector<EdgeId>& edges,
                         const ConcaveCost& f) {
    TreeEval eval;
    eval.value = 0;
    if (edges.empty()) return eval;

    std::vector<std::vector<std::pair<VertexId, EdgeId>>> adj(
        static_cast<std::size_t>(instance.vertex_count()));
    for (EdgeId e : edges) {
        adj[static_cast<std::size_t>(instance.edge(e).u)].emplace_back(instance.edge(e).v, e);
        adj[static_cast<std::size_t>(instance.edge(e).v)].emplace_back(instance.edge(e).u, e);
    }
    VertexId root = instance.edge(edges.front()).u;
    std::vector<std::int64_t> below(static_cast<std::size_t>(instance.vertex_count()), 0);
    std::vector<std::tuple<VertexId, VertexId, EdgeId>> post;  // (v, parent, edge up)
    std::vector<std::tuple<VertexId, VertexId, EdgeId>> stack{{root, -1, -1}};
    while (!stack.empty()) {
        auto [v, p, pe] = stack.back();
        stack.pop_back();
        post.emplace_back(v, p, pe);
        for (const auto& [w, e] : adj[static_cast<std::size_t>(v)])
            if (w != p) stack.emplace_back(w, v, e);
    }
    for (auto it = post.rbegin(); it != post.rend(); ++it) {
        auto [v, p, pe] = *it;
        below[static_cast<std::size_t>(v)] += instance.demand(v);
        if (p >= 0) below[static_cast<std::size_t>(p)] += below[static_cast<std::size_t>(v)];
    }
    const std::int64_t total = instance.total_demand();
    for (auto [v, p, pe] : post) {
        if (p < 0) continue;
        std::int64_t side = std::min(below[static_cast<std::size_t>(v)],
                                     total - below[static_cast<std::size_t>(v)]);
        if (side > 0) {
            eval.pruned_edges.push_back(pe);
            eval.value += instance.edge(pe).cost * f(Rational(side));
        }
    }
    std::sort(eval.pruned_edges.begin(), eval.pruned_edges.end());
    return eval;
}

// Enumerates every spanning tree of every vertex subset containing
// `required_mask` and feeds it to `visit`. k-1 acyclic edges inside a
// k-subset always form a spanning tree of it, so a subset/combination scan
// with a union-find suffices.
template <typename Visit>
void for_each_subtree(const Instance& instance, unsigned required_mask, Visit&& visit) {
    const int n = instance.vertex_count();
    for (unsigned mask = required_mask; mask < (1u << n); mask = (mask + 1) | required_mask) {
        int k = std::popcount(mask);
        std::vector<EdgeId> edges_in;
        for (EdgeId e = 0; e < instance.edge_count(); ++e) {
            const Edge& ed = instance.edge(e);
            if ((mask >> ed.u & 1u) && (mask >> ed.v & 1u)) edges_in.push_back(e);
        }
        if (static_cast<int>(edges_in.size()) < k - 1) continue;

        std::vector<int> dsu(static_cast<std::size_t>(n));
        std::iota(dsu.begin(), dsu.end(), 0);
        auto find = [&](int x) {
            while (dsu[static_cast<std::size_t>(x)] != x) x = dsu[static_cast<std::size_t>(x)];
            return x;
        };
        std::vector<EdgeId> chosen;
        auto choose = [&](auto&& self, std::size_t from, int need) -> void {
            if (need == 0) {
                visit(chosen);
                return;
            }
            for (std::size_t i = from; i + static_cast<std::size_t>(need) <= edges_in.size();
                 ++i) {
                const Edge& ed = instance.edge(edges_in[i]);
                int ru = find(ed.u), rv = find(ed.v);
                if (ru == rv) continue;
                dsu[static_cast<std::size_t>(ru)] = rv;
                chosen.push_back(edges_in[i]);
                self(self, i + 1, need - 1);
                chosen.pop_back();
                dsu[static_cast<std::size_t>(ru)] = ru;
            }
        };
        choose(choose, 0, k - 1);
        if (mask == (1u << n) - 1) break;
    }
}

}  // namespace

DemandMatrix DemandMatrix::make(const Instance& instance,
                                std::map<TerminalPair, Rational> values) {
    std::map<VertexId, Rational> row_sum;
    for (const auto& [pair, d] : values) {
        auto [u, v] = pair;
        if (u >= v || !instance.is_terminal(u) || !instance.is_terminal(v))
            throw ValidationError("demand matrix key is not an ordered terminal pair");
        if (d < 0) throw ValidationError("negative demand matrix entry");
        row_sum[u] += d;
        row_sum[v] += d;
    }
    for (const auto& [v, sum] : row_sum)
        if (sum > instance.demand(v))
            throw ValidationError("demand matrix infeasible at terminal " +
                                  std::to_string(v + 1));
    DemandMatrix m;
    m.values_ = std::move(values);
    return m;
}

Rational DemandMatrix::value(VertexId u, VertexId v) const {
    auto it = values_.find(make_pair_sorted(u, v));
    return it == values_.end() ? Rational(0) : it->second;
}

std::string DemandMatrix::serialize() const {
    std::ostringstream out;
    for (const auto& [pair, d] : values_)
        if (d != 0)
            out << "demand " << pair.first + 1 << " " << pair.second + 1 << " " << to_string(d)
                << "\n";
    return out.str();
}

Rational capacity_requirement(const Instance& instance, const Routing& routing, EdgeId e) {
    check_capacity_caps(instance);
    if (e < 0 || e >= instance.edge_count()) throw ValidationError("edge id out of range");
    return max_restricted_matching(instance, pairs_through_edge(routing, e), 2).value;
}

CapacityWitness capacity_requirement_witness(const Instance& instance, const Routing& routing,
                                             EdgeId e) {
    return capacity_witness_on_grid(instance, routing, e, 2);
}

Rational capacity_requirement_quarter_grid(const Instance& instance, const Routing& routing,
                                           EdgeId e) {
    return capacity_witness_on_grid(instance, routing, e, 4).value;
}

TreeOracleResult optimal_tree_oracle(const Instance& instance, const ConcaveCost& f) {
    if (instance.vertex_count() > OracleCaps::kMaxVerticesTree)
        throw SizeCapError("tree oracle cap exceeded: more than " +
                           std::to_string(OracleCaps::kMaxVerticesTree) + " vertices");

    unsigned required_mask = 0;
    for (VertexId w : instance.terminals()) required_mask |= 1u << w;

    std::optional<TreeOracleResult> best;
    for_each_subtree(instance, required_mask, [&](const std::vector<EdgeId>& tree) {
        TreeEval eval = eval_tree_edges(instance, tree, f);
        if (!best || eval.value < best->value ||
            (eval.value == best->value && eval.pruned_edges < best->tree_edges))
            best = TreeOracleResult{std::move(eval.value), std::move(eval.pruned_edges)};
    });
    return *best;  // the terminal-spanning subsets always contain one tree
}

SteinerOracleResult steiner_tree_optimum(const Instance& instance,
                                         const std::vector<VertexId>& required) {
    if (instance.vertex_count() > OracleCaps::kMaxVerticesTree)
        throw SizeCapError("steiner oracle cap exceeded: more than " +
                           std::to_string(OracleCaps::kMaxVerticesTree) + " vertices");
    std::vector<VertexId> req(required);
    std::sort(req.begin(), req.end());
    req.erase(std::unique(req.begin(), req.end()), req.end());
    for (VertexId v : req)
        if (v < 0 || v >= instance.vertex_count())
            throw ValidationError("required vertex out of range");
    if (req.size() <= 1) return SteinerOracleResult{0, {}};

    unsigned required_mask = 0;
    for (VertexId v : req) required_mask |= 1u << v;

    std::optional<SteinerOracleResult> best;
    for_each_subtree(instance, required_mask, [&](const std::vector<EdgeId>& tree) {
        // Prune branches without required vertices; they only add cost.
        std::vector<std::vector<std::pair<VertexId, EdgeId>>> adj(
            static_cast<std::size_t>(instance.vertex_count()));
        for (EdgeId e : tree) {
            adj[static_cast<std::size_t>(instance.edge(e).u)].emplace_back(instance.edge(e).v, e);
            adj[static_cast<std::size_t>(instance.edge(e).v)].emplace_back(instance.edge(e).u, e);
        }
        std::vector<int> below(static_cast<std::size_t>(instance.vertex_count()), 0);
        std::vector<std::tuple<VertexId, VertexId, EdgeId>> post;
        std::vector<std::tuple<VertexId, VertexId, EdgeId>> stack{{req.front(), -1, -1}};
        while (!stack.empty()) {
            auto [v, p, pe] = stack.back();
            stack.pop_back();
            post.emplace_back(v, p, pe);
            for (const auto& [w, e] : adj[static_cast<std::size_t>(v)])
                if (w != p) stack.emplace_back(w, v, e);
        }
        int total = static_cast<int>(req.size());
        for (auto it = post.rbegin(); it != post.rend(); ++it) {
            auto [v, p, pe] = *it;
            below[static_cast<std::size_t>(v)] += required_mask >> v & 1u;
            if (p >= 0) below[static_cast<std::size_t>(p)] += below[static_cast<std::size_t>(v)];
        }
        Rational value = 0;
        std::vector<EdgeId> pruned;
        for (auto [v, p, pe] : post) {
            if (p < 0) continue;
            int side = std::min(below[static_cast<std::size_t>(v)],
                                total - below[static_cast<std::size_t>(v)]);
            if (side > 0) {
                pruned.push_back(pe);
                value += instance.edge(pe).cost;
            }
        }
        std::sort(pruned.begin(), pruned.end());
        if (!best || value < best->value ||
            (value == best->value && pruned < best->tree_edges))
            best = SteinerOracleResult{std::move(value), std::move(pruned)};
    });
    return *best;
}

Rational optimal_routing_oracle(const Instance& instance, const ConcaveCost& f) {
    if (instance.vertex_count() > OracleCaps::kMaxVerticesRouting)
        throw SizeCapError("routing oracle cap exceeded: more than " +
                           std::to_string(OracleCaps::kMaxVerticesRouting) + " vertices");
    if (static_cast<int>(instance.terminals().size()) > OracleCaps::kMaxTerminalsRouting)
        throw SizeCapError("routing oracle cap exceeded: more than " +
                           std::to_string(OracleCaps::kMaxTerminalsRouting) + " terminals");
    for (VertexId w : instance.terminals())
        if (instance.demand(w) > OracleCaps::kMaxDemandRouting)
            throw SizeCapError("routing oracle cap exceeded: demand above " +
                               std::to_string(OracleCaps::kMaxDemandRouting));

    const auto& terminals = instance.terminals();
    if (terminals.size() == 1) return 0;

    std::vector<TerminalPair> pairs;
    for (std::size_t i = 0; i < terminals.size(); ++i)
        for (std::size_t j = i + 1; j < terminals.size(); ++j)
            pairs.push_back({terminals[i], terminals[j]});
    const std::size_t npairs = pairs.size();

    // All simple paths per pair, as edge bitmasks (|E| <= 10 within the cap).
    std::vector<std::vector<unsigned>> paths(npairs);
    for (std::size_t p = 0; p < npairs; ++p) {
        auto [u, v] = pairs[p];
        std::vector<bool> visited(static_cast<std::size_t>(instance.vertex_count()), false);
        unsigned path_mask = 0;
        auto dfs = [&](auto&& self, VertexId at) -> void {
            if (at == v) {
                paths[p].push_back(path_mask);
                return;
            }
            visited[static_cast<std::size_t>(at)] = true;
            for (const auto& [w, e] : instance.neighbors(at)) {
                if (visited[static_cast<std::size_t>(w)]) continue;
                path_mask |= 1u << e;
                self(self, w);
                path_mask &= ~(1u << e);
            }
            visited[static_cast<std::size_t>(at)] = false;
        };
        dfs(dfs, u);
    }

    // Worst-case load depends only on WHICH pairs cross an edge, so the
    // demand enumeration runs once per pair subset, not once per edge.
    std::vector<Rational> fval(1u << npairs);
    for (unsigned m = 1; m < (1u << npairs); ++m) {
        std::vector<TerminalPair> subset;
        for (std::size_t p = 0; p < npairs; ++p)
            if (m >> p & 1u) subset.push_back(pairs[p]);
        fval[m] = f(max_restricted_matching(instance, subset, 2).value);
    }
    fval[0] = f(0);

    // Scaled int64 cost table w[e][m] = c_e * f(maxload[m]) * scale; falls
    // back to exact rationals when the common denominator would overflow.
    BigInt scale = 1;
    for (EdgeId e = 0; e < instance.edge_count(); ++e)
        scale = lcm(scale, denominator_of(instance.edge(e).cost));
    for (const auto& y : fval) scale = lcm(scale, denominator_of(y));

    const int m_edges = instance.edge_count();
    const unsigned nmasks = 1u << npairs;
    std::vector<Rational> wtab_q(static_cast<std::size_t>(m_edges) * nmasks);
    for (EdgeId e = 0; e < m_edges; ++e)
        for (unsigned m = 0; m < nmasks; ++m)
            wtab_q[static_cast<std::size_t>(e) * nmasks + m] = instance.edge(e).cost * fval[m];

    bool use_int = scale <= BigInt(1) << 40;
    std::vector<std::int64_t> wtab;
    if (use_int) {
        wtab.resize(wtab_q.size());
        for (std::size_t i = 0; i < wtab_q.size() && use_int; ++i) {
            BigInt scaled = numerator_of(wtab_q[i]) * (scale / denominator_of(wtab_q[i]));
            if (scaled > BigInt(1) << 55)
                use_int = false;
            else
                wtab[i] = static_cast<std::int64_t>(scaled);
        }
    }

    std::vector<unsigned> edge_mask(static_cast<std::size_t>(m_edges), 0);

    // Depth-first assignment of one path per pair. The per-edge cost
    // c_e * f(maxload) only grows as pairs are added, so a partial cost at
    // or above the incumbent can be cut.
    auto solve = [&](auto zero, auto add_path) {
        using Cost = decltype(zero);
        std::optional<Cost> best;
        auto rec = [&](auto&& self, std::size_t p, const Cost& cur) -> void {
            if (p == npairs) {
                best = cur;
                return;
            }
            for (unsigned pm : paths[p]) {
                Cost next = add_path(cur, pm, p);
                if (!best || next < *best) self(self, p + 1, next);
                for (EdgeId e = 0; e < m_edges; ++e)
                    if (pm >> e & 1u) edge_mask[static_cast<std::size_t>(e)] &= ~(1u << p);
            }
        };
        rec(rec, 0, zero);
        return *best;
    };

    if (use_int) {
        auto add_path = [&](std::int64_t cur, unsigned pm, std::size_t p) {
            for (EdgeId e = 0; e < m_edges; ++e)
                if (pm >> e & 1u) {
                    unsigned& em = edge_mask[static_cast<std::size_t>(e)];
                    cur -= wtab[static_cast<std::size_t>(e) * nmasks + em];
                    em |= 1u << p;
                    cur += wtab[static_cast<std::size_t>(e) * nmasks + em];
                }
            return cur;
        };
        return Rational(BigInt(solve(std::int64_t(0), add_path)), scale);
    }
    auto add_path = [&](Rational cur, unsigned pm, std::size_t p) {
        for (EdgeId e = 0; e < m_edges; ++e)
            if (pm >> e & 1u) {
                unsigned& em = edge_mask[static_cast<std::size_t>(e)];
                cur -= wtab_q[static_cast<std::size_t>(e) * nmasks + em];
                em |= 1u << p;
                cur += wtab_q[static_cast<std::size_t>(e) * nmasks + em];
            }
        return cur;
    };
    return solve(Rational(0), add_path);
}

FeasibilityReport verify_feasible(const Instance& instance, const Routing& routing) {
    FeasibilityReport report;
    for (EdgeId e = 0; e < instance.edge_count(); ++e) {
        CapacityWitness witness = capacity_requirement_witness(instance, routing, e);
        if (routing.capacity(e) < witness.value) {
            report.feasible = false;
            report.violating_edge = e;
            report.required = std::move(witness.value);
            report.installed = routing.capacity(e);
            report.certificate = std::move(witness.witness);
            return report;
        }
    }
    report.feasible = true;
    return report;
}

}  // namespace vpnd
