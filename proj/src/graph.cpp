#include "linkmirage/graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace linkmirage {

ParseError::ParseError(const std::string& path, std::size_t line, const std::string& what)
    : GraphError(path + ":" + std::to_string(line) + ": " + what), line_(line) {}

Graph Graph::from_edges(std::vector<VertexId> vertices, std::vector<Edge> edges) {
    for (const Edge& e : edges) {
        if (e.u == e.v) {
            throw GraphError("self-loop on vertex " + std::to_string(e.u));
        }
        vertices.push_back(e.u);
        vertices.push_back(e.v);
    }
    std::sort(vertices.begin(), vertices.end());
    vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    Graph g;
    g.vertices_ = std::move(vertices);
    const std::size_t bound = g.vertices_.empty() ? 0 : std::size_t{g.vertices_.back()} + 1;
    g.local_.assign(bound, -1);
    for (std::size_t i = 0; i < g.vertices_.size(); ++i) {
        g.local_[g.vertices_[i]] = static_cast<std::int32_t>(i);
    }

    std::vector<std::size_t> degree(g.vertices_.size(), 0);
    for (const Edge& e : edges) {
        ++degree[g.local_[e.u]];
        ++degree[g.local_[e.v]];
    }
    g.offsets_.assign(g.vertices_.size() + 1, 0);
    for (std::size_t i = 0; i < degree.size(); ++i) {
        g.offsets_[i + 1] = g.offsets_[i] + degree[i];
    }
    g.adj_.resize(g.offsets_.back());
    std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
    // Edges are sorted, so pushing both directions in order leaves every
    // neighbor list sorted except for the "v -> u" half; sort afterwards.
    for (const Edge& e : edges) {
        g.adj_[fill[g.local_[e.u]]++] = e.v;
        g.adj_[fill[g.local_[e.v]]++] = e.u;
    }
    for (std::size_t i = 0; i < g.vertices_.size(); ++i) {
        std::sort(g.adj_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i]),
                  g.adj_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i + 1]));
    }
    return g;
}

std::span<const VertexId> Graph::neighbors(VertexId v) const {
    if (!contains(v)) {
        return {};
    }
    const auto i = static_cast<std::size_t>(local_[v]);
    return {adj_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
}

bool Graph::has_edge(VertexId u, VertexId v) const {
    auto nu = neighbors(u);
    return std::binary_search(nu.begin(), nu.end(), v);
}

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> out;
    out.reserve(num_edges());
    for (VertexId u : vertices_) {
        for (VertexId v : neighbors(u)) {
            if (u < v) {
                out.emplace_back(u, v);
            }
        }
    }
    return out;
}

Graph induced_subgraph(const Graph& g, std::span<const VertexId> keep) {
    std::vector<VertexId> vs;
    vs.reserve(keep.size());
    for (VertexId v : keep) {
        if (g.contains(v)) {
            vs.push_back(v);
        }
    }
    std::sort(vs.begin(), vs.end());
    std::vector<Edge> es;
    for (VertexId u : vs) {
        for (VertexId v : g.neighbors(u)) {
            if (u < v && std::binary_search(vs.begin(), vs.end(), v)) {
                es.emplace_back(u, v);
            }
        }
    }
    return Graph::from_edges(std::move(vs), std::move(es));
}

Graph union_graph(std::span<const Graph> graphs) {
    std::vector<VertexId> vs;
    std::vector<Edge> es;
    for (const Graph& g : graphs) {
        vs.insert(vs.end(), g.vertices().begin(), g.vertices().end());
        auto ge = g.edges();
        es.insert(es.end(), ge.begin(), ge.end());
    }
    return Graph::from_edges(std::move(vs), std::move(es));
}

TemporalGraphSequence TemporalGraphSequence::from_graphs(std::vector<Graph> graphs) {
    TemporalGraphSequence seq;
    std::size_t bound = 0;
    for (std::size_t t = 0; t < graphs.size(); ++t) {
        bound = std::max(bound, graphs[t].id_bound());
        seq.labels.push_back(std::to_string(t));
    }
    seq.snapshots = std::move(graphs);
    seq.raw_ids.resize(bound);
    for (std::size_t i = 0; i < bound; ++i) {
        seq.raw_ids[i] = i;
    }
    return seq;
}

namespace {

struct RawGraph {
    std::vector<std::uint64_t> isolated;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> edges;
};

RawGraph parse_raw(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw GraphError("cannot open edge list " + path.string());
    }
    RawGraph raw;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.resize(hash);
        }
        std::uint64_t ids[2];
        int count = 0;
        const char* p = line.data();
        const char* end = line.data() + line.size();
        while (true) {
            while (p < end && std::isspace(static_cast<unsigned char>(*p))) {
                ++p;
            }
            if (p == end) {
                break;
            }
            if (count == 2) {
                throw ParseError(path.string(), lineno, "expected at most two vertex ids");
            }
            auto [next, ec] = std::from_chars(p, end, ids[count]);
            if (ec != std::errc() || (next < end && !std::isspace(static_cast<unsigned char>(*next)))) {
                throw ParseError(path.string(), lineno, "invalid vertex id");
            }
            ++count;
            p = next;
        }
        if (count == 1) {
            raw.isolated.push_back(ids[0]);
        } else if (count == 2) {
            if (ids[0] == ids[1]) {
                throw ParseError(path.string(), lineno,
                                 "self-loop on vertex " + std::to_string(ids[0]));
            }
            raw.edges.emplace_back(ids[0], ids[1]);
        }
    }
    return raw;
}

std::vector<std::uint64_t> collect_ids(std::span<const RawGraph> raws) {
    std::vector<std::uint64_t> ids;
    for (const RawGraph& r : raws) {
        ids.insert(ids.end(), r.isolated.begin(), r.isolated.end());
        for (auto [a, b] : r.edges) {
            ids.push_back(a);
            ids.push_back(b);
        }
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

Graph remap(const RawGraph& raw, const std::vector<std::uint64_t>& ids) {
    auto dense = [&](std::uint64_t r) {
        return static_cast<VertexId>(std::lower_bound(ids.begin(), ids.end(), r) - ids.begin());
    };
    std::vector<VertexId> vs;
    vs.reserve(raw.isolated.size());
    for (auto r : raw.isolated) {
        vs.push_back(dense(r));
    }
    std::vector<Edge> es;
    es.reserve(raw.edges.size());
    for (auto [a, b] : raw.edges) {
        es.emplace_back(dense(a), dense(b));
    }
    return Graph::from_edges(std::move(vs), std::move(es));
}

}  // namespace

Graph load_edge_list(const std::filesystem::path& path, std::vector<std::uint64_t>& raw_ids) {
    RawGraph raw = parse_raw(path);
    raw_ids = collect_ids({&raw, 1});
    return remap(raw, raw_ids);
}

Graph load_edge_list_mapped(const std::filesystem::path& path, std::span<const std::uint64_t> raw_ids) {
    const RawGraph raw = parse_raw(path);
    auto known = [&](std::uint64_t r) { return std::binary_search(raw_ids.begin(), raw_ids.end(), r); };
    for (auto r : raw.isolated) {
        if (!known(r)) {
            throw ParseError(path.string(), 0, "vertex " + std::to_string(r) + " not in the vertex map");
        }
    }
    for (auto [a, b] : raw.edges) {
        if (!known(a) || !known(b)) {
            throw ParseError(path.string(), 0, "edge endpoint not in the vertex map");
        }
    }
    return remap(raw, {raw_ids.begin(), raw_ids.end()});
}

Graph load_edge_list(const std::filesystem::path& path) {
    std::vector<std::uint64_t> ids;
    return load_edge_list(path, ids);
}

std::vector<std::filesystem::path> read_manifest(const std::filesystem::path& manifest) {
    std::ifstream in(manifest);
    if (!in) {
        throw GraphError("cannot open manifest " + manifest.string());
    }
    const auto base = manifest.parent_path();
    std::vector<std::filesystem::path> paths;
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.resize(hash);
        }
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) {
            continue;
        }
        auto last = line.find_last_not_of(" \t\r");
        std::filesystem::path p = line.substr(first, last - first + 1);
        paths.push_back(p.is_absolute() ? p : base / p);
    }
    if (paths.empty()) {
        throw GraphError("manifest " + manifest.string() + " lists no snapshots");
    }
    return paths;
}

TemporalGraphSequence load_sequence(const std::filesystem::path& manifest) {
    const auto paths = read_manifest(manifest);
    std::vector<RawGraph> raws;
    raws.reserve(paths.size());
    for (const auto& p : paths) {
        raws.push_back(parse_raw(p));
    }
    TemporalGraphSequence seq;
    seq.raw_ids = collect_ids(raws);
    for (std::size_t t = 0; t < raws.size(); ++t) {
        seq.snapshots.push_back(remap(raws[t], seq.raw_ids));
        seq.labels.push_back(paths[t].filename().string());
    }
    return seq;
}

void write_edge_list(const std::filesystem::path& path, const Graph& g,
                     std::span<const std::uint64_t> raw_ids, const std::string& header) {
    std::ofstream out(path);
    if (!out) {
        throw GraphError("cannot write " + path.string());
    }
    auto raw = [&](VertexId v) -> std::uint64_t { return raw_ids.empty() ? v : raw_ids[v]; };
    if (!header.empty()) {
        std::istringstream lines(header);
        std::string l;
        while (std::getline(lines, l)) {
            out << "# " << l << '\n';
        }
    }
    for (VertexId v : g.vertices()) {
        if (g.degree(v) == 0) {
            out << raw(v) << '\n';
        }
    }
    for (const Edge& e : g.edges()) {
        out << raw(e.u) << ' ' << raw(e.v) << '\n';
    }
    if (!out) {
        throw GraphError("write failed for " + path.string());
    }
}

}  // namespace linkmirage
