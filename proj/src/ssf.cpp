#include "vpnd/ssf.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <set>
#include <utility>

#include "vpnd/errors.hpp"
#include "vpnd/rng.hpp"
#include "vpnd/shortest_path.hpp"

namespace vpnd {

namespace {

using PriceFn = std::function<Rational(const Rational&)>;

PriceFn make_price(const std::variant<ConcaveCost, CableList>& model) {
    if (const auto* f = std::get_if<ConcaveCost>(&model))
        return [f](const Rational& x) { return (*f)(x); };
    const auto* cables = std::get_if<CableList>(&model);
    return [cables](const Rational& x) { return cables->envelope(x); };
}

Rational rabs(const Rational& x) { return x < 0 ? Rational(-x) : x; }

std::vector<VertexId> touched_vertices(const Instance& g, const std::vector<EdgeId>& edges) {
    std::vector<VertexId> out;
    out.reserve(edges.size() * 2);
    for (EdgeId e : edges) {
        out.push_back(g.edge(e).u);
        out.push_back(g.edge(e).v);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// Adds d units along a vertex path to a signed flow; the sign of an edge's
// entry is positive when the net flow runs from the smaller to the larger
// endpoint.
void add_path_flow(const Instance& g, std::map<EdgeId, Rational>& s,
                   const std::vector<VertexId>& path, const Rational& d) {
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        EdgeId e = *g.find_edge(path[i], path[i + 1]);
        s[e] += path[i] == g.edge(e).u ? d : -d;
    }
}

// First cycle of the support under a deterministic depth-first search
// (components by ascending root, neighbors by ascending id). Each entry is
// (edge, +1/-1) where +1 means the cycle traverses the edge from its smaller
// to its larger endpoint.
std::optional<std::vector<std::pair<EdgeId, int>>> find_support_cycle(
    const Instance& g, const std::map<EdgeId, Rational>& flow) {
    const int n = g.vertex_count();
    std::vector<std::vector<std::pair<VertexId, EdgeId>>> adj(static_cast<std::size_t>(n));
    for (const auto& [e, sv] : flow) {
        const Edge& ed = g.edge(e);
        adj[static_cast<std::size_t>(ed.u)].push_back({ed.v, e});
        adj[static_cast<std::size_t>(ed.v)].push_back({ed.u, e});
    }
    for (auto& a : adj) std::sort(a.begin(), a.end());

    std::vector<int> state(static_cast<std::size_t>(n), 0);  // 0 new, 1 open, 2 done
    std::vector<VertexId> par(static_cast<std::size_t>(n), -1);
    std::vector<EdgeId> par_edge(static_cast<std::size_t>(n), -1);
    struct Frame {
        VertexId v;
        std::size_t idx;
    };
    for (VertexId root = 0; root < n; ++root) {
        if (state[static_cast<std::size_t>(root)] != 0 ||
            adj[static_cast<std::size_t>(root)].empty())
            continue;
        std::vector<Frame> stack{{root, 0}};
        state[static_cast<std::size_t>(root)] = 1;
        while (!stack.empty()) {
            Frame& f = stack.back();
            const auto& nb = adj[static_cast<std::size_t>(f.v)];
            if (f.idx == nb.size()) {
                state[static_cast<std::size_t>(f.v)] = 2;
                stack.pop_back();
                continue;
            }
            const VertexId v = f.v;
            const auto [w, e] = nb[f.idx++];
            if (e == par_edge[static_cast<std::size_t>(v)]) continue;
            if (state[static_cast<std::size_t>(w)] == 0) {
                par[static_cast<std::size_t>(w)] = v;
                par_edge[static_cast<std::size_t>(w)] = e;
                state[static_cast<std::size_t>(w)] = 1;
                stack.push_back({w, 0});
            } else if (state[static_cast<std::size_t>(w)] == 1) {
                // back edge to an ancestor: v -> par(v) -> ... -> w -> v
                std::vector<std::pair<EdgeId, int>> cyc;
                for (VertexId x = v; x != w; x = par[static_cast<std::size_t>(x)]) {
                    EdgeId pe = par_edge[static_cast<std::size_t>(x)];
                    cyc.push_back({pe, x == g.edge(pe).u ? 1 : -1});
                }
                cyc.push_back({e, w == g.edge(e).u ? 1 : -1});
                return cyc;
            }
        }
    }
    return std::nullopt;
}

// Cancels cycles in a signed flow. Pushing t around a cycle changes the cost
// by a function of t that is concave between the flow's zero crossings, so
// pushing to the nearest crossing on the cheaper side never increases the
// cost and zeroes at least one edge. Terminates with a forest support.
void cancel_cycles(const Instance& g, std::map<EdgeId, Rational>& flow, const PriceFn& price) {
    std::erase_if(flow, [](const auto& kv) { return kv.second == 0; });
    while (auto cyc = find_support_cycle(g, flow)) {
        std::optional<Rational> tneg, tpos;
        for (const auto& [e, dir] : *cyc) {
            Rational z = -flow.at(e) * dir;
            if (z > 0) {
                if (!tpos || z < *tpos) tpos = z;
            } else {
                if (!tneg || z > *tneg) tneg = z;
            }
        }
        auto cost_delta = [&](const Rational& t) {
            Rational d(0);
            for (const auto& [e, dir] : *cyc) {
                const Rational& s = flow.at(e);
                d += g.edge(e).cost * (price(rabs(s + t * dir)) - price(rabs(s)));
            }
            return d;
        };
        Rational t;
        if (!tpos)
            t = *tneg;
        else if (!tneg)
            t = *tpos;
        else
            t = cost_delta(*tneg) <= cost_delta(*tpos) ? *tneg : *tpos;
        for (const auto& [e, dir] : *cyc) flow.at(e) += t * dir;
        std::erase_if(flow, [](const auto& kv) { return kv.second == 0; });
    }
}

FlowSolution build_solution(const SsfInstance& ssf, std::map<EdgeId, Rational> signed_flow) {
    const Instance& g = *ssf.instance;
    const PriceFn price = make_price(ssf.cost_model);
    cancel_cycles(g, signed_flow, price);

    FlowSolution out;
    const CableList* cables = std::get_if<CableList>(&ssf.cost_model);
    out.total_cost = 0;
    for (const auto& [e, s] : signed_flow) {
        Rational x = rabs(s);
        out.support_edges.push_back(e);
        out.flow.push_back(x);
        if (cables != nullptr) out.cable_assignment.push_back(cables->best_cable(x));
        out.total_cost += g.edge(e).cost * price(x);
    }
    return out;
}

}  // namespace

void SsfInstance::validate() const {
    if (instance == nullptr) throw ValidationError("ssf instance: no graph attached");
    if (source < 0 || source >= instance->vertex_count())
        throw ValidationError("ssf instance: source out of range");
    for (const auto& [w, d] : demands) {
        if (w < 0 || w >= instance->vertex_count() || !instance->is_terminal(w))
            throw ValidationError("ssf instance: demand key is not a terminal");
        if (d <= 0) throw ValidationError("ssf instance: demands must be positive");
    }
}

Rational FlowSolution::flow_on(EdgeId e) const {
    auto it = std::lower_bound(support_edges.begin(), support_edges.end(), e);
    if (it == support_edges.end() || *it != e) return Rational(0);
    return flow[static_cast<std::size_t>(it - support_edges.begin())];
}

Rational flow_cost(const Instance& instance, const FlowSolution& flow, const ConcaveCost& f) {
    Rational total(0);
    for (std::size_t i = 0; i < flow.support_edges.size(); ++i)
        total += instance.edge(flow.support_edges[i]).cost * f(flow.flow[i]);
    return total;
}

std::vector<EdgeId> steiner_2approx(const Instance& instance,
                                    const std::vector<VertexId>& required) {
    std::vector<VertexId> req = required;
    std::sort(req.begin(), req.end());
    req.erase(std::unique(req.begin(), req.end()), req.end());
    for (VertexId r : req)
        if (r < 0 || r >= instance.vertex_count())
            throw ValidationError("steiner_2approx: required vertex out of range");
    if (req.size() <= 1) return {};

    std::map<VertexId, ShortestPathTree> spt;
    for (VertexId r : req) spt.emplace(r, shortest_path_tree(instance, r));

    // Minimum spanning tree of the metric closure over the required set.
    struct MetricEdge {
        Rational w;
        VertexId a, b;
    };
    std::vector<MetricEdge> closure;
    for (std::size_t i = 0; i < req.size(); ++i)
        for (std::size_t j = i + 1; j < req.size(); ++j)
            closure.push_back({spt.at(req[i]).dist[static_cast<std::size_t>(req[j])],
                               req[i], req[j]});
    std::sort(closure.begin(), closure.end(), [](const MetricEdge& x, const MetricEdge& y) {
        if (x.w != y.w) return x.w < y.w;
        if (x.a != y.a) return x.a < y.a;
        return x.b < y.b;
    });

    std::vector<VertexId> dsu(static_cast<std::size_t>(instance.vertex_count()));
    for (std::size_t i = 0; i < dsu.size(); ++i) dsu[i] = static_cast<VertexId>(i);
    auto find = [&](VertexId x) {
        while (dsu[static_cast<std::size_t>(x)] != x) {
            dsu[static_cast<std::size_t>(x)] =
                dsu[static_cast<std::size_t>(dsu[static_cast<std::size_t>(x)])];
            x = dsu[static_cast<std::size_t>(x)];
        }
        return x;
    };

    // Each MST edge is shortcut back to the real shortest path it measures.
    std::set<EdgeId> bought;
    std::size_t joined = 0;
    for (const MetricEdge& me : closure) {
        VertexId ra = find(me.a), rb = find(me.b);
        if (ra == rb) continue;
        dsu[static_cast<std::size_t>(ra)] = rb;
        std::vector<VertexId> path = spt.at(me.a).path_from_source(me.b);
        for (std::size_t i = 0; i + 1 < path.size(); ++i)
            bought.insert(*instance.find_edge(path[i], path[i + 1]));
        if (++joined == req.size() - 1) break;
    }

    // The union of shortcuts can contain cycles; keep the shortest-path tree
    // inside it and drop non-required leaves.
    std::vector<bool> mask(static_cast<std::size_t>(instance.edge_count()), false);
    for (EdgeId e : bought) mask[static_cast<std::size_t>(e)] = true;
    auto msp = multi_source_shortest_paths(instance, {req.front()}, mask);
    std::vector<EdgeId> tree;
    for (VertexId v = 0; v < instance.vertex_count(); ++v)
        if (msp.parent_edge[static_cast<std::size_t>(v)])
            tree.push_back(*msp.parent_edge[static_cast<std::size_t>(v)]);

    std::vector<int> deg(static_cast<std::size_t>(instance.vertex_count()), 0);
    std::vector<std::vector<std::pair<VertexId, std::size_t>>> adj(
        static_cast<std::size_t>(instance.vertex_count()));
    for (std::size_t i = 0; i < tree.size(); ++i) {
        const Edge& ed = instance.edge(tree[i]);
        adj[static_cast<std::size_t>(ed.u)].push_back({ed.v, i});
        adj[static_cast<std::size_t>(ed.v)].push_back({ed.u, i});
        ++deg[static_cast<std::size_t>(ed.u)];
        ++deg[static_cast<std::size_t>(ed.v)];
    }
    std::vector<char> is_req(static_cast<std::size_t>(instance.vertex_count()), 0);
    for (VertexId r : req) is_req[static_cast<std::size_t>(r)] = 1;
    std::vector<char> removed(tree.size(), 0);
    bool changed = true;
    while (changed) {
        changed = false;
        for (VertexId v = 0; v < instance.vertex_count(); ++v) {
            if (deg[static_cast<std::size_t>(v)] != 1 || is_req[static_cast<std::size_t>(v)])
                continue;
            for (const auto& [other, idx] : adj[static_cast<std::size_t>(v)]) {
                if (removed[idx]) continue;
                removed[idx] = 1;
                --deg[static_cast<std::size_t>(v)];
                --deg[static_cast<std::size_t>(other)];
                changed = true;
                break;
            }
        }
    }
    std::vector<EdgeId> out;
    for (std::size_t i = 0; i < tree.size(); ++i)
        if (!removed[i]) out.push_back(tree[i]);
    std::sort(out.begin(), out.end());
    return out;
}

FlowSolution solve_ssrob(const SsfInstance& ssf, std::uint64_t rng_seed) {
    ssf.validate();
    const auto* f = std::get_if<ConcaveCost>(&ssf.cost_model);
    if (f == nullptr || !f->is_rent_or_buy())
        throw ValidationError("solve_ssrob: cost model must be min(mu*x, M)");
    const Instance& g = *ssf.instance;
    const auto& bp = f->breakpoints();
    const Rational M = bp[1].second;
    const Rational mu = bp[1].second / bp[1].first;

    Rng rng(rng_seed);
    std::vector<VertexId> marked;
    for (const auto& [w, d] : ssf.demands) {
        if (w == ssf.source) continue;  // already home, no draw
        Rational p = mu * Rational(d) / M;
        if (p > 1) p = 1;
        if (rng.bernoulli(p)) marked.push_back(w);
    }

    std::vector<VertexId> req = marked;
    req.push_back(ssf.source);
    std::vector<EdgeId> bought = steiner_2approx(g, req);
    std::vector<VertexId> tree_vertices =
        bought.empty() ? std::vector<VertexId>{ssf.source} : touched_vertices(g, bought);

    auto rent = multi_source_shortest_paths(g, tree_vertices);
    std::vector<bool> mask(static_cast<std::size_t>(g.edge_count()), false);
    for (EdgeId e : bought) mask[static_cast<std::size_t>(e)] = true;
    auto home = multi_source_shortest_paths(g, {ssf.source}, mask);

    std::map<EdgeId, Rational> s;
    for (const auto& [w, d] : ssf.demands) {
        if (w == ssf.source) continue;
        const Rational D(d);
        std::vector<VertexId> rent_path = rent.path_to_root(w);
        add_path_flow(g, s, rent_path, D);
        add_path_flow(g, s, home.path_to_root(rent_path.back()), D);
    }
    return build_solution(ssf, std::move(s));
}

FlowSolution solve_ssbab(const SsfInstance& ssf, std::uint64_t rng_seed) {
    ssf.validate();
    const auto* model = std::get_if<CableList>(&ssf.cost_model);
    if (model == nullptr) throw ValidationError("solve_ssbab: cost model must be a cable list");
    const Instance& g = *ssf.instance;
    const int K = model->size();

    Rng rng(rng_seed);
    std::map<VertexId, Rational> points;  // aggregation point -> carried demand
    for (const auto& [w, d] : ssf.demands)
        if (w != ssf.source) points.emplace(w, Rational(d));

    std::map<EdgeId, Rational> s;

    auto sample_stage = [&](int stage) {
        const Rational& del_i = model->cable(stage).delta;
        const Rational& sig_i = model->cable(stage).sigma;
        const Rational& sig_j = model->cable(stage + 1).sigma;
        const Rational& del_j = model->cable(stage + 1).delta;
        std::vector<VertexId> marked;
        for (const auto& [w, D] : points) {
            Rational p = D * del_i / (sig_j - sig_i + D * del_j);
            if (p > 1) p = 1;
            if (rng.bernoulli(p)) marked.push_back(w);
        }
        return marked;
    };

    // Relay stages: demand hops to the nearest sampled point (or all the way
    // home to the source, which anchors every stage).
    for (int stage = 0; stage + 2 < K; ++stage) {
        std::vector<VertexId> marked = sample_stage(stage);
        std::vector<VertexId> targets = marked;
        targets.push_back(ssf.source);
        auto msp = multi_source_shortest_paths(g, targets);
        std::map<VertexId, Rational> next_points;
        for (const auto& [w, D] : points) {
            if (std::binary_search(marked.begin(), marked.end(), w)) {
                next_points[w] += D;
                continue;
            }
            std::vector<VertexId> path = msp.path_to_root(w);
            add_path_flow(g, s, path, D);
            if (path.back() != ssf.source) next_points[path.back()] += D;
        }
        points = std::move(next_points);
    }

    // Tree stage: buy a steiner tree over the survivors, rent the rest onto
    // it, drain everything home along tree paths.
    std::vector<EdgeId> bought;
    std::map<VertexId, Rational> at_tree;
    if (K >= 2) {
        std::vector<VertexId> marked = sample_stage(K - 2);
        std::vector<VertexId> req = marked;
        req.push_back(ssf.source);
        bought = steiner_2approx(g, req);
        std::vector<VertexId> tree_vertices =
            bought.empty() ? std::vector<VertexId>{ssf.source} : touched_vertices(g, bought);
        auto rent = multi_source_shortest_paths(g, tree_vertices);
        for (const auto& [w, D] : points) {
            if (std::binary_search(marked.begin(), marked.end(), w)) {
                at_tree[w] += D;
                continue;
            }
            std::vector<VertexId> path = rent.path_to_root(w);
            add_path_flow(g, s, path, D);
            at_tree[path.back()] += D;
        }
    } else if (model->cable(0).sigma == 0) {
        // One cable with no fixed cost: buying is free, shortest paths home.
        auto msp = multi_source_shortest_paths(g, {ssf.source});
        for (const auto& [w, D] : points) add_path_flow(g, s, msp.path_to_root(w), D);
        return build_solution(ssf, std::move(s));
    } else {
        std::vector<VertexId> req;
        for (const auto& [w, D] : points) req.push_back(w);
        req.push_back(ssf.source);
        bought = steiner_2approx(g, req);
        at_tree = points;
    }

    std::vector<bool> mask(static_cast<std::size_t>(g.edge_count()), false);
    for (EdgeId e : bought) mask[static_cast<std::size_t>(e)] = true;
    auto home = multi_source_shortest_paths(g, {ssf.source}, mask);
    for (const auto& [x, D] : at_tree) {
        if (x == ssf.source) continue;
        add_path_flow(g, s, home.path_to_root(x), D);
    }
    return build_solution(ssf, std::move(s));
}

TreeSolution flow_to_tree(const SsfInstance& ssf, const FlowSolution& flow) {
    ssf.validate();
    const Instance& g = *ssf.instance;
    std::vector<bool> mask(static_cast<std::size_t>(g.edge_count()), false);
    for (EdgeId e : flow.support_edges) mask[static_cast<std::size_t>(e)] = true;
    auto msp = multi_source_shortest_paths(g, {ssf.source}, mask);
    std::set<EdgeId> edges;
    for (const auto& [w, d] : ssf.demands) {
        if (w == ssf.source) continue;
        if (!msp.dist[static_cast<std::size_t>(w)])
            throw ValidationError("flow_to_tree: support does not connect a terminal to the source");
        for (EdgeId e : msp.path_edges_to_root(w)) edges.insert(e);
    }
    return TreeSolution::make(g, std::vector<EdgeId>(edges.begin(), edges.end()));
}

CvpndResult solve_cvpnd(const Instance& instance, const ConcaveCost& f,
                        std::uint64_t rng_seed, int repetitions) {
    if (repetitions < 1) throw ValidationError("solve_cvpnd: repetitions must be >= 1");
    const CableList cables = prune_cables(segments_to_cables(f), Rational(2));

    std::optional<CvpndResult> best;
    for (VertexId r : instance.terminals()) {
        SsfInstance ssf;
        ssf.instance = &instance;
        ssf.source = r;
        for (VertexId w : instance.terminals())
            if (w != r) ssf.demands.emplace(w, instance.demand(w));
        ssf.cost_model = cables;
        for (int rep = 0; rep < repetitions; ++rep) {
            const std::uint64_t sub = mix_seed(rng_seed, static_cast<std::uint64_t>(r),
                                               static_cast<std::uint64_t>(rep));
            FlowSolution flow = solve_ssbab(ssf, sub);
            TreeSolution tree = flow_to_tree(ssf, flow);
            Rational value = tree_cost(tree, f);
            // Deterministic (value, source id, seed) tie-break.
            bool better;
            if (!best)
                better = true;
            else if (value != best->value)
                better = value < best->value;
            else if (r != best->source)
                better = r < best->source;
            else
                better = sub < best->seed;
            if (better) best = CvpndResult{std::move(value), std::move(tree), r, sub};
        }
    }
    return *best;
}

}  // namespace vpnd
