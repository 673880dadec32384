#include "vpnd/generator.hpp"

#include <vector>

#include "vpnd/errors.hpp"
#include "vpnd/rng.hpp"

namespace vpnd {

namespace {

// Draws one demand per vertex, then forces vertex 0 to demand 1 when no
// vertex drew a positive one, so Instance::make always sees a terminal.
std::vector<std::int64_t> draw_demands(Rng& rng, int n, std::int64_t max_demand) {
    std::vector<std::int64_t> demands(static_cast<std::size_t>(n), 0);
    bool any = false;
    for (int v = 0; v < n; ++v) {
        demands[static_cast<std::size_t>(v)] = rng.uniform_int(0, max_demand);
        if (demands[static_cast<std::size_t>(v)] > 0) any = true;
    }
    if (!any) demands[0] = 1;
    return demands;
}

Instance gen_star(const GenParams& p) {
    if (p.k < 1) throw ValidationError("gen_instance: star needs k >= 1 leaves");
    std::vector<Edge> edges;
    std::vector<std::int64_t> demands(static_cast<std::size_t>(p.k) + 1, 0);
    for (int leaf = 1; leaf <= p.k; ++leaf) {
        edges.push_back({0, leaf, Rational(1)});
        demands[static_cast<std::size_t>(leaf)] = 1;
    }
    return Instance::make(p.k + 1, std::move(edges), std::move(demands));
}

Instance gen_path(const GenParams& p, Rng& rng) {
    if (p.n < 1) throw ValidationError("gen_instance: path needs n >= 1");
    std::vector<Edge> edges;
    for (int v = 0; v + 1 < p.n; ++v)
        edges.push_back({v, v + 1, Rational(rng.uniform_int(1, p.max_cost))});
    return Instance::make(p.n, std::move(edges), draw_demands(rng, p.n, p.max_demand));
}

Instance gen_grid(const GenParams& p, Rng& rng) {
    if (p.rows < 1 || p.cols < 1)
        throw ValidationError("gen_instance: grid needs rows >= 1 and cols >= 1");
    const int n = p.rows * p.cols;
    auto id = [&](int r, int c) { return r * p.cols + c; };
    std::vector<Edge> edges;
    for (int r = 0; r < p.rows; ++r)
        for (int c = 0; c < p.cols; ++c) {
            if (c + 1 < p.cols)
                edges.push_back({id(r, c), id(r, c + 1), Rational(rng.uniform_int(1, p.max_cost))});
            if (r + 1 < p.rows)
                edges.push_back({id(r, c), id(r + 1, c), Rational(rng.uniform_int(1, p.max_cost))});
        }
    return Instance::make(n, std::move(edges), draw_demands(rng, n, p.max_demand));
}

Instance gen_random_connected(const GenParams& p, Rng& rng) {
    if (p.n < 1) throw ValidationError("gen_instance: random-connected needs n >= 1");
    if (p.edge_prob < 0 || p.edge_prob > 1)
        throw ValidationError("gen_instance: edge_prob must lie in [0, 1]");
    constexpr int kRetryBudget = 1000;
    for (int attempt = 0; attempt < kRetryBudget; ++attempt) {
        std::vector<Edge> edges;
        std::vector<VertexId> dsu(static_cast<std::size_t>(p.n));
        for (std::size_t i = 0; i < dsu.size(); ++i) dsu[i] = static_cast<VertexId>(i);
        auto find = [&](VertexId x) {
            while (dsu[static_cast<std::size_t>(x)] != x) {
                dsu[static_cast<std::size_t>(x)] =
                    dsu[static_cast<std::size_t>(dsu[static_cast<std::size_t>(x)])];
                x = dsu[static_cast<std::size_t>(x)];
            }
            return x;
        };
        int components = p.n;
        for (int u = 0; u < p.n; ++u)
            for (int v = u + 1; v < p.n; ++v) {
                if (!rng.bernoulli(p.edge_prob)) continue;
                edges.push_back({u, v, Rational(rng.uniform_int(1, p.max_cost))});
                VertexId ru = find(u), rv = find(v);
                if (ru != rv) {
                    dsu[static_cast<std::size_t>(ru)] = rv;
                    --components;
                }
            }
        if (components != 1) continue;
        return Instance::make(p.n, std::move(edges), draw_demands(rng, p.n, p.max_demand));
    }
    throw ValidationError("gen_instance: no connected graph within the retry budget");
}

}  // namespace

Instance gen_instance(const GenParams& params, std::uint64_t rng_seed) {
    if (params.max_cost < 1) throw ValidationError("gen_instance: max_cost must be >= 1");
    if (params.max_demand < 0) throw ValidationError("gen_instance: max_demand must be >= 0");
    Rng rng(rng_seed);
    switch (params.kind) {
        case InstanceKind::Star:
            return gen_star(params);
        case InstanceKind::Path:
            return gen_path(params, rng);
        case InstanceKind::Grid:
            return gen_grid(params, rng);
        case InstanceKind::RandomConnected:
            return gen_random_connected(params, rng);
    }
    throw ValidationError("gen_instance: unknown instance kind");
}

}  // namespace vpnd
