#include "linkmirage/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_set>
#include <vector>

namespace linkmirage {

namespace {

std::vector<VertexId> all_vertices(std::size_t n) {
    std::vector<VertexId> vs(n);
    std::iota(vs.begin(), vs.end(), VertexId{0});
    return vs;
}

}  // namespace

std::size_t planted_group(const PlantedPartitionSpec& spec, VertexId v) {
    return static_cast<std::size_t>(v) * spec.groups / spec.vertices;
}

Graph planted_partition(const PlantedPartitionSpec& spec, Rng& rng) {
    if (spec.groups == 0 || spec.groups > spec.vertices) {
        throw std::invalid_argument("planted partition needs 1 <= groups <= vertices");
    }
    std::vector<Edge> edges;
    for (VertexId u = 0; u < spec.vertices; ++u) {
        for (VertexId v = u + 1; v < spec.vertices; ++v) {
            const double p = planted_group(spec, u) == planted_group(spec, v) ? spec.p_in : spec.p_out;
            if (bernoulli(rng, p)) {
                edges.emplace_back(u, v);
            }
        }
    }
    return Graph::from_edges(all_vertices(spec.vertices), std::move(edges));
}

Graph erdos_renyi(std::size_t n, double p, Rng& rng) {
    std::vector<Edge> edges;
    for (VertexId u = 0; u < n; ++u) {
        for (VertexId v = u + 1; v < n; ++v) {
            if (bernoulli(rng, p)) {
                edges.emplace_back(u, v);
            }
        }
    }
    return Graph::from_edges(all_vertices(n), std::move(edges));
}

Graph random_connected(std::size_t n, std::size_t extra, Rng& rng) {
    std::vector<Edge> edges;
    std::unordered_set<std::uint64_t> seen;
    for (VertexId v = 1; v < n; ++v) {
        const Edge e(v, static_cast<VertexId>(uniform_index(rng, v)));
        edges.push_back(e);
        seen.insert(edge_key(e));
    }
    const std::size_t max_edges = n * (n - 1) / 2;
    extra = std::min(extra, max_edges - edges.size());
    while (extra > 0) {
        const auto a = static_cast<VertexId>(uniform_index(rng, n));
        const auto b = static_cast<VertexId>(uniform_index(rng, n));
        if (a == b) {
            continue;
        }
        const Edge e(a, b);
        if (seen.insert(edge_key(e)).second) {
            edges.push_back(e);
            --extra;
        }
    }
    return Graph::from_edges(all_vertices(n), std::move(edges));
}

TemporalGraphSequence overlapping_sequence(const PlantedPartitionSpec& spec, std::size_t snapshots,
                                           double overlap, Rng& rng) {
    if (snapshots == 0) {
        throw std::invalid_argument("sequence needs at least one snapshot");
    }
    std::vector<Graph> graphs;
    graphs.push_back(planted_partition(spec, rng));
    while (graphs.size() < snapshots) {
        auto edges = graphs.back().edges();
        const std::size_t target = edges.size();
        const auto keep = static_cast<std::size_t>(std::llround(overlap * static_cast<double>(target)));
        for (std::size_t i = 0; i < keep; ++i) {
            std::swap(edges[i], edges[i + uniform_index(rng, edges.size() - i)]);
        }
        edges.resize(keep);
        std::unordered_set<std::uint64_t> seen;
        for (const Edge& e : graphs.back().edges()) {
            seen.insert(edge_key(e));
        }
        auto fresh = planted_partition(spec, rng).edges();
        for (std::size_t i = 0; i < fresh.size() && edges.size() < target; ++i) {
            std::swap(fresh[i], fresh[i + uniform_index(rng, fresh.size() - i)]);
            if (seen.insert(edge_key(fresh[i])).second) {
                edges.push_back(fresh[i]);
            }
        }
        graphs.push_back(Graph::from_edges(all_vertices(spec.vertices), std::move(edges)));
    }
    return TemporalGraphSequence::from_graphs(std::move(graphs));
}

}  // namespace linkmirage
