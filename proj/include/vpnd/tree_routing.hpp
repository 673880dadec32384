#ifndef VPND_TREE_ROUTING_HPP
#define VPND_TREE_ROUTING_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "vpnd/cost_fn.hpp"
#include "vpnd/instance.hpp"

namespace vpnd {

/// Unordered terminal pair with u < v.
using TerminalPair = std::pair<VertexId, VertexId>;

inline TerminalPair make_pair_sorted(VertexId a, VertexId b) {
    return a < b ? TerminalPair{a, b} : TerminalPair{b, a};
}

/// A tree in G whose vertex set contains every terminal, together with the
/// capacities induced by worst-case tree routing: on each tree edge,
/// min(b(A), b(B)) over the two terminal sides. Non-terminal leaves are
/// pruned on construction, so every stored capacity is positive. Edges
/// outside the tree implicitly carry capacity zero. With a single terminal
/// the tree is empty.
class TreeSolution {
public:
    /// Prunes non-terminal leaves from the given edge set, verifies the
    /// result is a tree containing all terminals, and installs min-side
    /// capacities. Throws ValidationError otherwise.
    static TreeSolution make(const Instance& instance, std::vector<EdgeId> tree_edges);

    const Instance& instance() const { return *instance_; }
    /// Sorted ascending.
    const std::vector<EdgeId>& edges() const { return edges_; }
    /// capacities()[i] belongs to edges()[i].
    const std::vector<Rational>& capacities() const { return capacities_; }
    Rational capacity(EdgeId e) const;

    /// Vertices touched by the tree; the terminal itself when the tree is
    /// empty. Ascending.
    const std::vector<VertexId>& vertices() const { return vertices_; }

private:
    TreeSolution() = default;

    const Instance* instance_ = nullptr;
    std::vector<EdgeId> edges_;
    std::vector<Rational> capacities_;
    std::vector<VertexId> vertices_;
};

/// A general virtual private network: one simple path per unordered terminal
/// pair plus an installed capacity per edge. Edges absent from the capacity
/// map carry zero. Whether the capacities cover the worst-case loads is the
/// oracle module's job, not an invariant here.
class Routing {
public:
    /// Validates that there is exactly one path per unordered terminal pair,
    /// each simple, connecting its pair, and walking actual edges of G.
    static Routing make(const Instance& instance,
                        std::map<TerminalPair, std::vector<VertexId>> paths,
                        std::map<EdgeId, Rational> capacities);

    const Instance& instance() const { return *instance_; }
    const std::map<TerminalPair, std::vector<VertexId>>& paths() const { return paths_; }
    const std::map<EdgeId, Rational>& capacities() const { return capacities_; }
    Rational capacity(EdgeId e) const;

    /// Edge ids along the path of one pair.
    std::vector<EdgeId> path_edges(const TerminalPair& pair) const;

private:
    Routing() = default;

    const Instance* instance_ = nullptr;
    std::map<TerminalPair, std::vector<VertexId>> paths_;
    std::map<EdgeId, Rational> capacities_;
};

/// Min-side capacity of every edge of a tree: removing e splits the tree
/// into sides A and B; the worst-case load of tree routing on e is
/// min(b(A), b(B)). Input must be a tree containing all terminals
/// (non-terminal leaves are allowed here and get capacity zero).
std::map<EdgeId, Rational> tree_capacities(const Instance& instance,
                                           const std::vector<EdgeId>& tree_edges);

/// Sum over tree edges of c_e * f(capacity_e). f = identity gives the
/// linear VPND cost.
Rational tree_cost(const TreeSolution& tree, const ConcaveCost& f);

/// Weighted 1-median of a tree: minimizes sum_w b_w * dist_T(w, r) over tree
/// vertices r, smallest id on ties. The minimum value equals the linear tree
/// cost sum_e c_e * min(b(A_e), b(B_e)); both sides are computed by
/// independent routes and tested against each other.
struct TreeMedian {
    Rational value;
    VertexId median = 0;
};
TreeMedian tree_median_value(const Instance& instance,
                             const std::vector<EdgeId>& tree_edges);

/// The routing induced by a tree: each terminal pair takes its unique tree
/// path, capacities are the tree's.
Routing extract_paths(const TreeSolution& tree);

/// Lines "tree-edge U V CAP" sorted by (U,V) plus "cost VALUE" under f.
std::string serialize_tree_solution(const TreeSolution& tree, const ConcaveCost& f);

/// Reads edge ids and stated capacities back from the line format.
/// The stated capacities are returned as-is so verifiers can check them.
/// Solver metadata lines (value, root, source, seed) are accepted and
/// skipped, so solver output files parse directly.
struct ParsedTree {
    std::vector<EdgeId> edges;
    std::map<EdgeId, Rational> stated_capacities;
    Rational stated_cost;
};
ParsedTree parse_tree_solution(const Instance& instance, const std::string& text);

}  // namespace vpnd

#endif  // VPND_TREE_ROUTING_HPP
