#ifndef VPND_INSTANCE_HPP
#define VPND_INSTANCE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vpnd/cost_fn.hpp"
#include "vpnd/errors.hpp"
#include "vpnd/rational.hpp"

namespace vpnd {

using VertexId = int;  // 0-based internally; text formats use 1..N
using EdgeId = int;    // index into Instance::edges()

struct Edge {
    VertexId u = 0;  // u < v always
    VertexId v = 0;
    Rational cost;
};

/// A problem instance: a simple undirected connected graph with nonnegative
/// edge costs and a vector of nonnegative integer demand bounds. Vertices
/// with positive demand are the terminals. Immutable after construction.
class Instance {
public:
    /// Validates and canonicalizes: edges are normalized to u < v and sorted
    /// lexicographically, so EdgeId order equals serialization order.
    /// Throws ValidationError on loop edges, parallel edges, negative costs,
    /// negative demands, a disconnected graph, or an empty terminal set.
    static Instance make(int vertex_count, std::vector<Edge> edges,
                         std::vector<std::int64_t> demands);

    int vertex_count() const { return n_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(EdgeId e) const { return edges_[static_cast<std::size_t>(e)]; }
    int edge_count() const { return static_cast<int>(edges_.size()); }

    std::int64_t demand(VertexId v) const { return demands_[static_cast<std::size_t>(v)]; }
    const std::vector<std::int64_t>& demands() const { return demands_; }
    std::int64_t total_demand() const { return total_demand_; }

    /// Terminals in ascending id order.
    const std::vector<VertexId>& terminals() const { return terminals_; }
    bool is_terminal(VertexId v) const { return demands_[static_cast<std::size_t>(v)] > 0; }

    /// Neighbors of v as (other endpoint, edge id), ascending by endpoint.
    const std::vector<std::pair<VertexId, EdgeId>>& neighbors(VertexId v) const {
        return adj_[static_cast<std::size_t>(v)];
    }

    /// Edge id for an endpoint pair, in either order.
    std::optional<EdgeId> find_edge(VertexId a, VertexId b) const;

private:
    Instance() = default;

    int n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::int64_t> demands_;
    std::int64_t total_demand_ = 0;
    std::vector<VertexId> terminals_;
    std::vector<std::vector<std::pair<VertexId, EdgeId>>> adj_;
    std::map<std::pair<VertexId, VertexId>, EdgeId> edge_index_;
};

/// Instance file contents: the instance plus an optional embedded cost
/// function block.
struct ParsedFile {
    Instance instance;
    std::optional<ConcaveCost> cost_fn;
};

/// Parses the line-oriented instance format (see README). Throws ParseError
/// with a line number on syntax errors and ValidationError on invariant
/// violations.
ParsedFile parse_vpnd_file(const std::string& text);

/// Convenience wrapper returning only the instance.
Instance parse_instance(const std::string& text);

/// Canonical serialization; parse_vpnd_file(serialize_instance(x)) round-trips
/// byte-identically for canonical-form input.
std::string serialize_instance(const Instance& instance,
                               const std::optional<ConcaveCost>& cost_fn = std::nullopt);

}  // namespace vpnd

#endif  // VPND_INSTANCE_HPP
