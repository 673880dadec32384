#include "vpnd/tree_routing.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "vpnd/errors.hpp"
#include "line_parser.hpp"

namespace vpnd {

namespace {

struct TreeView {
    std::vector<VertexId> vertices;  // touched, ascending
    // adjacency restricted to the tree: vertex -> (neighbor, edge id)
    std::vector<std::vector<std::pair<VertexId, EdgeId>>> adj;
};

// Checks that `edges` forms one tree whose vertex set contains every
// terminal, and returns its adjacency. Empty edge set is a tree exactly when
// there is a single terminal.
TreeView validate_tree(const Instance& instance, const std::vector<EdgeId>& edges) {
    TreeView view;
    view.adj.resize(static_cast<std::size_t>(instance.vertex_count()));

    std::vector<int> dsu(static_cast<std::size_t>(instance.vertex_count()));
    std::iota(dsu.begin(), dsu.end(), 0);
    auto find = [&](int x) {
        while (dsu[static_cast<std::size_t>(x)] != x) {
            dsu[static_cast<std::size_t>(x)] =
                dsu[static_cast<std::size_t>(dsu[static_cast<std::size_t>(x)])];
            x = dsu[static_cast<std::size_t>(x)];
        }
        return x;
    };

    std::vector<bool> touched(static_cast<std::size_t>(instance.vertex_count()), false);
    for (EdgeId e : edges) {
        if (e < 0 || e >= instance.edge_count())
            throw ValidationError("tree edge id out of range");
        const Edge& ed = instance.edge(e);
        int ru = find(ed.u), rv = find(ed.v);
        if (ru == rv) throw ValidationError("tree edges contain a cycle");
        dsu[static_cast<std::size_t>(ru)] = rv;
        touched[static_cast<std::size_t>(ed.u)] = true;
        touched[static_cast<std::size_t>(ed.v)] = true;
        view.adj[static_cast<std::size_t>(ed.u)].emplace_back(ed.v, e);
        view.adj[static_cast<std::size_t>(ed.v)].emplace_back(ed.u, e);
    }
    for (VertexId v = 0; v < instance.vertex_count(); ++v)
        if (touched[static_cast<std::size_t>(v)]) view.vertices.push_back(v);
    for (auto& nbrs : view.adj) std::sort(nbrs.begin(), nbrs.end());

    // Acyclic with |edges| = |vertices| - 1 forces a single component.
    if (!view.vertices.empty() &&
        edges.size() != view.vertices.size() - 1)
        throw ValidationError("tree edges do not form a single tree");

    for (VertexId w : instance.terminals()) {
        bool in_tree = touched[static_cast<std::size_t>(w)] ||
                       (view.vertices.empty() && instance.terminals().size() == 1);
        if (!in_tree)
            throw ValidationError("tree misses terminal " + std::to_string(w + 1));
    }
    return view;
}

// Demand on the subtree hanging below each edge, by iterative DFS from root.
std::map<EdgeId, Rational> min_side_capacities(const Instance& instance,
                                               const TreeView& view) {
    std::map<EdgeId, Rational> caps;
    if (view.vertices.empty()) return caps;

    const Rational total(instance.total_demand());
    VertexId root = view.vertices.front();
    std::vector<Rational> below(static_cast<std::size_t>(instance.vertex_count()), 0);
    std::vector<std::pair<VertexId, VertexId>> stack{{root, -1}};  // (vertex, parent)
    std::vector<std::pair<VertexId, VertexId>> post;
    while (!stack.empty()) {
        auto [v, p] = stack.back();
        stack.pop_back();
        post.emplace_back(v, p);
        for (const auto& [w, e] : view.adj[static_cast<std::size_t>(v)])
            if (w != p) stack.emplace_back(w, v);
    }
    for (auto it = post.rbegin(); it != post.rend(); ++it) {
        auto [v, p] = *it;
        below[static_cast<std::size_t>(v)] += instance.demand(v);
        if (p >= 0) below[static_cast<std::size_t>(p)] += below[static_cast<std::size_t>(v)];
    }
    for (auto [v, p] : post) {
        if (p < 0) continue;
        auto e = instance.find_edge(v, p);
        const Rational& sub = below[static_cast<std::size_t>(v)];
        caps[*e] = std::min(sub, Rational(total - sub));
    }
    return caps;
}

}  // namespace

std::map<EdgeId, Rational> tree_capacities(const Instance& instance,
                                           const std::vector<EdgeId>& tree_edges) {
    return min_side_capacities(instance, validate_tree(instance, tree_edges));
}

TreeSolution TreeSolution::make(const Instance& instance, std::vector<EdgeId> tree_edges) {
    std::sort(tree_edges.begin(), tree_edges.end());
    tree_edges.erase(std::unique(tree_edges.begin(), tree_edges.end()), tree_edges.end());

    // Prune non-terminal leaves until none remain.
    std::vector<int> degree(static_cast<std::size_t>(instance.vertex_count()), 0);
    std::vector<bool> alive(tree_edges.size(), true);
    for (EdgeId e : tree_edges) {
        if (e < 0 || e >= instance.edge_count())
            throw ValidationError("tree edge id out of range");
        ++degree[static_cast<std::size_t>(instance.edge(e).u)];
        ++degree[static_cast<std::size_t>(instance.edge(e).v)];
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < tree_edges.size(); ++i) {
            if (!alive[i]) continue;
            const Edge& ed = instance.edge(tree_edges[i]);
            bool u_leaf = degree[static_cast<std::size_t>(ed.u)] == 1 && !instance.is_terminal(ed.u);
            bool v_leaf = degree[static_cast<std::size_t>(ed.v)] == 1 && !instance.is_terminal(ed.v);
            if (u_leaf || v_leaf) {
                alive[i] = false;
                --degree[static_cast<std::size_t>(ed.u)];
                --degree[static_cast<std::size_t>(ed.v)];
                changed = true;
            }
        }
    }
    std::vector<EdgeId> pruned;
    for (std::size_t i = 0; i < tree_edges.size(); ++i)
        if (alive[i]) pruned.push_back(tree_edges[i]);

    TreeView view = validate_tree(instance, pruned);
    auto caps = min_side_capacities(instance, view);

    TreeSolution tree;
    tree.instance_ = &instance;
    tree.edges_ = std::move(pruned);
    tree.capacities_.reserve(tree.edges_.size());
    for (EdgeId e : tree.edges_) tree.capacities_.push_back(caps.at(e));
    tree.vertices_ = std::move(view.vertices);
    if (tree.vertices_.empty()) tree.vertices_.push_back(instance.terminals().front());
    return tree;
}

Rational TreeSolution::capacity(EdgeId e) const {
    auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
    if (it == edges_.end() || *it != e) return 0;
    return capacities_[static_cast<std::size_t>(it - edges_.begin())];
}

Routing Routing::make(const Instance& instance,
                      std::map<TerminalPair, std::vector<VertexId>> paths,
                      std::map<EdgeId, Rational> capacities) {
    const auto& terminals = instance.terminals();
    std::size_t expected = terminals.size() * (terminals.size() - 1) / 2;
    if (paths.size() != expected)
        throw ValidationError("routing must contain exactly one path per terminal pair");
    for (std::size_t i = 0; i < terminals.size(); ++i)
        for (std::size_t j = i + 1; j < terminals.size(); ++j)
            if (!paths.count({terminals[i], terminals[j]}))
                throw ValidationError("routing misses pair " + std::to_string(terminals[i] + 1) +
                                      "-" + std::to_string(terminals[j] + 1));

    for (const auto& [pair, path] : paths) {
        if (path.size() < 2 || path.front() != pair.first || path.back() != pair.second)
            throw ValidationError("path endpoints do not match their pair");
        std::vector<VertexId> sorted(path);
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw ValidationError("path is not simple");
        for (std::size_t i = 1; i < path.size(); ++i)
            if (!instance.find_edge(path[i - 1], path[i]))
                throw ValidationError("path uses a non-edge " + std::to_string(path[i - 1] + 1) +
                                      "-" + std::to_string(path[i] + 1));
    }
    for (const auto& [e, cap] : capacities) {
        if (e < 0 || e >= instance.edge_count())
            throw ValidationError("capacity edge id out of range");
        if (cap < 0) throw ValidationError("negative capacity");
    }

    Routing routing;
    routing.instance_ = &instance;
    routing.paths_ = std::move(paths);
    routing.capacities_ = std::move(capacities);
    return routing;
}

Rational Routing::capacity(EdgeId e) const {
    auto it = capacities_.find(e);
    return it == capacities_.end() ? Rational(0) : it->second;
}

std::vector<EdgeId> Routing::path_edges(const TerminalPair& pair) const {
    auto it = paths_.find(pair);
    if (it == paths_.end()) throw ValidationError("no path for the requested pair");
    std::vector<EdgeId> edges;
    for (std::size_t i = 1; i < it->second.size(); ++i)
        edges.push_back(*instance_->find_edge(it->second[i - 1], it->second[i]));
    return edges;
}

Rational tree_cost(const TreeSolution& tree, const ConcaveCost& f) {
    Rational total = 0;
    const auto& edges = tree.edges();
    const auto& caps = tree.capacities();
    for (std::size_t i = 0; i < edges.size(); ++i)
        total += tree.instance().edge(edges[i]).cost * f(caps[i]);
    return total;
}

TreeMedian tree_median_value(const Instance& instance,
                             const std::vector<EdgeId>& tree_edges) {
    TreeView view = validate_tree(instance, tree_edges);
    if (view.vertices.empty())  // single terminal
        return {0, instance.terminals().front()};

    // Direct evaluation of the 1-median objective at every tree vertex; kept
    // independent of the min-side capacity formula on purpose, the two are
    // compared in tests.
    TreeMedian best;
    bool have = false;
    for (VertexId r : view.vertices) {
        Rational value = 0;
        std::vector<std::pair<VertexId, VertexId>> stack{{r, -1}};
        std::vector<Rational> dist(static_cast<std::size_t>(instance.vertex_count()), 0);
        while (!stack.empty()) {
            auto [v, p] = stack.back();
            stack.pop_back();
            value += dist[static_cast<std::size_t>(v)] * instance.demand(v);
            for (const auto& [w, e] : view.adj[static_cast<std::size_t>(v)]) {
                if (w == p) continue;
                dist[static_cast<std::size_t>(w)] =
                    dist[static_cast<std::size_t>(v)] + instance.edge(e).cost;
                stack.emplace_back(w, v);
            }
        }
        if (!have || value < best.value) {
            best.value = std::move(value);
            best.median = r;
            have = true;
        }
    }
    return best;
}

Routing extract_paths(const TreeSolution& tree) {
    const Instance& instance = tree.instance();
    const auto& terminals = instance.terminals();
    TreeView view = validate_tree(instance, tree.edges());

    std::map<TerminalPair, std::vector<VertexId>> paths;
    for (std::size_t i = 0; i < terminals.size(); ++i) {
        // One DFS rooted at terminal i serves all pairs starting there.
        VertexId u = terminals[i];
        std::vector<std::optional<VertexId>> parent(
            static_cast<std::size_t>(instance.vertex_count()));
        std::vector<VertexId> stack{u};
        std::vector<bool> seen(static_cast<std::size_t>(instance.vertex_count()), false);
        seen[static_cast<std::size_t>(u)] = true;
        while (!stack.empty()) {
            VertexId v = stack.back();
            stack.pop_back();
            for (const auto& [w, e] : view.adj[static_cast<std::size_t>(v)]) {
                if (!seen[static_cast<std::size_t>(w)]) {
                    seen[static_cast<std::size_t>(w)] = true;
                    parent[static_cast<std::size_t>(w)] = v;
                    stack.push_back(w);
                }
            }
        }
        for (std::size_t j = i + 1; j < terminals.size(); ++j) {
            VertexId v = terminals[j];
            std::vector<VertexId> path;
            for (VertexId x = v;; x = *parent[static_cast<std::size_t>(x)]) {
                path.push_back(x);
                if (x == u) break;
            }
            std::reverse(path.begin(), path.end());
            paths[{u, v}] = std::move(path);
        }
    }

    std::map<EdgeId, Rational> caps;
    for (std::size_t i = 0; i < tree.edges().size(); ++i)
        caps[tree.edges()[i]] = tree.capacities()[i];
    return Routing::make(instance, std::move(paths), std::move(caps));
}

std::string serialize_tree_solution(const TreeSolution& tree, const ConcaveCost& f) {
    std::ostringstream out;
    for (std::size_t i = 0; i < tree.edges().size(); ++i) {
        const Edge& e = tree.instance().edge(tree.edges()[i]);
        out << "tree-edge " << e.u + 1 << " " << e.v + 1 << " "
            << to_string(tree.capacities()[i]) << "\n";
    }
    out << "cost " << to_string(tree_cost(tree, f)) << "\n";
    return out.str();
}

ParsedTree parse_tree_solution(const Instance& instance, const std::string& text) {
    auto lines = detail::significant_lines(text);
    ParsedTree parsed;
    bool have_cost = false;
    for (const auto& line : lines) {
        if (line.tokens[0] == "tree-edge") {
            detail::expect_tokens(line, 4);
            std::int64_t u = detail::parse_int_tok(line, 1, "vertex id");
            std::int64_t v = detail::parse_int_tok(line, 2, "vertex id");
            if (u < 1 || u > instance.vertex_count() || v < 1 || v > instance.vertex_count())
                throw ParseError(line.no, "vertex id out of range");
            auto e = instance.find_edge(static_cast<VertexId>(u - 1),
                                        static_cast<VertexId>(v - 1));
            if (!e)
                throw ParseError(line.no, "no such edge " + line.tokens[1] + "-" + line.tokens[2]);
            if (parsed.stated_capacities.count(*e))
                throw ParseError(line.no, "duplicate tree edge");
            parsed.edges.push_back(*e);
            parsed.stated_capacities[*e] = detail::parse_rational_tok(line, 3, "capacity");
        } else if (line.tokens[0] == "cost") {
            detail::expect_tokens(line, 2);
            if (have_cost) throw ParseError(line.no, "duplicate cost line");
            parsed.stated_cost = detail::parse_rational_tok(line, 1, "cost");
            have_cost = true;
        } else if (line.tokens[0] == "value" || line.tokens[0] == "root" ||
                   line.tokens[0] == "source" || line.tokens[0] == "seed") {
            // metadata lines emitted by the solver front end; not part of the
            // tree itself
            detail::expect_tokens(line, 2);
        } else {
            throw ParseError(line.no, "unknown keyword '" + line.tokens[0] + "'");
        }
    }
    if (!have_cost) throw ParseError("missing cost line in tree solution");
    return parsed;
}

}  // namespace vpnd
