#include "vpnd/instance.hpp"

#include <algorithm>
#include <sstream>

#include "cost_fn_detail.hpp"
#include "line_parser.hpp"

namespace vpnd {

Instance Instance::make(int vertex_count, std::vector<Edge> edges,
                        std::vector<std::int64_t> demands) {
    if (vertex_count < 1) throw ValidationError("vertex count must be positive");
    if (static_cast<int>(demands.size()) != vertex_count)
        throw ValidationError("demand vector size does not match vertex count");

    for (auto& e : edges) {
        if (e.u < 0 || e.u >= vertex_count || e.v < 0 || e.v >= vertex_count)
            throw ValidationError("edge endpoint out of range");
        if (e.u == e.v)
            throw ValidationError("loop edge at vertex " + std::to_string(e.u + 1));
        if (e.cost < 0) throw ValidationError("negative edge cost");
        if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return std::pair{a.u, a.v} < std::pair{b.u, b.v};
    });
    for (std::size_t i = 1; i < edges.size(); ++i)
        if (edges[i - 1].u == edges[i].u && edges[i - 1].v == edges[i].v)
            throw ValidationError("parallel edge " + std::to_string(edges[i].u + 1) + "-" +
                                  std::to_string(edges[i].v + 1));

    Instance inst;
    inst.n_ = vertex_count;
    inst.edges_ = std::move(edges);
    inst.demands_ = std::move(demands);
    inst.adj_.resize(static_cast<std::size_t>(vertex_count));
    for (EdgeId e = 0; e < inst.edge_count(); ++e) {
        const Edge& ed = inst.edges_[static_cast<std::size_t>(e)];
        inst.adj_[static_cast<std::size_t>(ed.u)].emplace_back(ed.v, e);
        inst.adj_[static_cast<std::size_t>(ed.v)].emplace_back(ed.u, e);
        inst.edge_index_[{ed.u, ed.v}] = e;
    }
    for (auto& nbrs : inst.adj_) std::sort(nbrs.begin(), nbrs.end());

    for (VertexId v = 0; v < vertex_count; ++v) {
        std::int64_t b = inst.demands_[static_cast<std::size_t>(v)];
        if (b < 0) throw ValidationError("negative demand at vertex " + std::to_string(v + 1));
        if (b > 0) {
            inst.terminals_.push_back(v);
            inst.total_demand_ += b;
        }
    }
    if (inst.terminals_.empty()) throw ValidationError("no terminal (all demands zero)");

    // Connectivity by traversal.
    std::vector<bool> seen(static_cast<std::size_t>(vertex_count), false);
    std::vector<VertexId> stack{0};
    seen[0] = true;
    int reached = 1;
    while (!stack.empty()) {
        VertexId v = stack.back();
        stack.pop_back();
        for (const auto& [w, e] : inst.neighbors(v)) {
            if (!seen[static_cast<std::size_t>(w)]) {
                seen[static_cast<std::size_t>(w)] = true;
                ++reached;
                stack.push_back(w);
            }
        }
    }
    if (reached != vertex_count) throw ValidationError("graph not connected");

    return inst;
}

std::optional<EdgeId> Instance::find_edge(VertexId a, VertexId b) const {
    if (a > b) std::swap(a, b);
    auto it = edge_index_.find({a, b});
    if (it == edge_index_.end()) return std::nullopt;
    return it->second;
}

ParsedFile parse_vpnd_file(const std::string& text) {
    auto lines = detail::significant_lines(text);
    if (lines.empty()) throw ParseError("empty instance input");

    std::size_t i = 0;
    if (lines[i].tokens != std::vector<std::string>{"vpnd", "1"})
        throw ParseError(lines[i].no, "expected 'vpnd 1' header");
    ++i;
    if (i >= lines.size() || lines[i].tokens[0] != "vertices")
        throw ParseError(i < lines.size() ? lines[i].no : lines.back().no,
                         "expected 'vertices N' line");
    detail::expect_tokens(lines[i], 2);
    std::int64_t n = detail::parse_int_tok(lines[i], 1, "vertex count");
    if (n < 1 || n > 1000000) throw ParseError(lines[i].no, "vertex count out of range");
    ++i;

    auto vertex_tok = [n](const detail::Line& line, std::size_t idx) {
        std::int64_t v = detail::parse_int_tok(line, idx, "vertex id");
        if (v < 1 || v > n) throw ParseError(line.no, "vertex id out of range");
        return static_cast<VertexId>(v - 1);
    };

    std::vector<Edge> edges;
    std::vector<std::int64_t> demands(static_cast<std::size_t>(n), 0);
    std::vector<bool> demand_set(static_cast<std::size_t>(n), false);
    std::optional<ConcaveCost> cost_fn;

    for (; i < lines.size(); ++i) {
        const detail::Line& line = lines[i];
        const std::string& kw = line.tokens[0];
        if (kw == "edge") {
            detail::expect_tokens(line, 4);
            Edge e;
            e.u = vertex_tok(line, 1);
            e.v = vertex_tok(line, 2);
            e.cost = detail::parse_rational_tok(line, 3, "edge cost");
            edges.push_back(std::move(e));
        } else if (kw == "demand") {
            detail::expect_tokens(line, 3);
            VertexId v = vertex_tok(line, 1);
            if (demand_set[static_cast<std::size_t>(v)])
                throw ParseError(line.no, "duplicate demand for vertex " + line.tokens[1]);
            demand_set[static_cast<std::size_t>(v)] = true;
            demands[static_cast<std::size_t>(v)] = detail::parse_int_tok(line, 2, "demand");
        } else if (kw == "costfn") {
            if (cost_fn) throw ParseError(line.no, "duplicate costfn block");
            auto [f, next] = detail::parse_cost_fn_block(lines, i);
            cost_fn = std::move(f);
            i = next - 1;
        } else {
            throw ParseError(line.no, "unknown keyword '" + kw + "'");
        }
    }

    return ParsedFile{Instance::make(static_cast<int>(n), std::move(edges), std::move(demands)),
                      std::move(cost_fn)};
}

Instance parse_instance(const std::string& text) { return parse_vpnd_file(text).instance; }

std::string serialize_instance(const Instance& instance,
                               const std::optional<ConcaveCost>& cost_fn) {
    std::ostringstream out;
    out << "vpnd 1\n";
    out << "vertices " << instance.vertex_count() << "\n";
    for (const Edge& e : instance.edges())
        out << "edge " << e.u + 1 << " " << e.v + 1 << " " << to_string(e.cost) << "\n";
    for (VertexId v : instance.terminals())
        out << "demand " << v + 1 << " " << instance.demand(v) << "\n";
    if (cost_fn) out << serialize_cost_fn(*cost_fn);
    return out.str();
}

}  // namespace vpnd
