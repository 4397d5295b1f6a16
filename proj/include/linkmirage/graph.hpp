#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace linkmirage {

using VertexId = std::uint32_t;

/// Undirected edge stored with u < v.
struct Edge {
    VertexId u = 0;
    VertexId v = 0;

    Edge() = default;
    Edge(VertexId a, VertexId b) : u(a < b ? a : b), v(a < b ? b : a) {}

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

inline std::uint64_t edge_key(const Edge& e) {
    return (static_cast<std::uint64_t>(e.u) << 32) | e.v;
}

class GraphError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public GraphError {
public:
    ParseError(const std::string& path, std::size_t line, const std::string& what);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/**
 * Simple undirected graph over globally stable vertex ids.
 *
 * Adjacency is stored in CSR form with neighbor lists sorted by id. A vertex
 * may be present with degree zero. Immutable after construction.
 */
class Graph {
public:
    Graph() = default;

    /// Builds a graph from an edge list. Duplicate and reversed edges collapse;
    /// a self-loop throws GraphError. Endpoints are added to the vertex set.
    static Graph from_edges(std::vector<VertexId> vertices, std::vector<Edge> edges);
    static Graph from_edges(std::vector<Edge> edges) { return from_edges({}, std::move(edges)); }

    std::size_t num_vertices() const { return vertices_.size(); }
    std::size_t num_edges() const { return adj_.size() / 2; }
    bool empty() const { return vertices_.empty(); }

    std::span<const VertexId> vertices() const { return vertices_; }
    bool contains(VertexId v) const {
        return v < local_.size() && local_[v] >= 0;
    }
    /// Position of v in vertices(); v must be present.
    std::size_t index_of(VertexId v) const { return static_cast<std::size_t>(local_[v]); }

    std::span<const VertexId> neighbors(VertexId v) const;
    std::size_t degree(VertexId v) const { return neighbors(v).size(); }
    bool has_edge(VertexId u, VertexId v) const;

    /// All edges with u < v, in lexicographic order.
    std::vector<Edge> edges() const;

    /// One past the largest vertex id the graph can address.
    std::size_t id_bound() const { return local_.size(); }

    friend bool operator==(const Graph& a, const Graph& b) {
        return a.vertices_ == b.vertices_ && a.offsets_ == b.offsets_ && a.adj_ == b.adj_;
    }

private:
    std::vector<VertexId> vertices_;
    std::vector<std::int32_t> local_;
    std::vector<std::size_t> offsets_{0};
    std::vector<VertexId> adj_;
};

/// Subgraph induced by `keep` (sorted or not); vertices of `keep` absent from g are ignored.
Graph induced_subgraph(const Graph& g, std::span<const VertexId> keep);

/// Vertex set and edge set unions.
Graph union_graph(std::span<const Graph> graphs);

/**
 * Ordered snapshots G_0..G_T sharing one dense vertex namespace.
 *
 * raw_ids maps a dense id back to the identifier used in the input files.
 */
struct TemporalGraphSequence {
    std::vector<Graph> snapshots;
    std::vector<std::string> labels;
    std::vector<std::uint64_t> raw_ids;

    std::size_t size() const { return snapshots.size(); }
    const Graph& operator[](std::size_t t) const { return snapshots[t]; }

    /// Wraps graphs that already use dense ids; raw ids are the identity.
    static TemporalGraphSequence from_graphs(std::vector<Graph> graphs);
};

/// Parses one SNAP-style edge list ("u v" per line, '#' comments). A line
/// holding a single id declares an isolated vertex. Raw ids are remapped to
/// dense ids in ascending raw order.
Graph load_edge_list(const std::filesystem::path& path);
Graph load_edge_list(const std::filesystem::path& path, std::vector<std::uint64_t>& raw_ids);

/// Loads an edge list whose raw ids must all appear in the sorted `raw_ids`
/// (e.g. a perturbed snapshot of a loaded sequence). Unknown ids throw ParseError.
Graph load_edge_list_mapped(const std::filesystem::path& path, std::span<const std::uint64_t> raw_ids);

/// Reads a manifest of newline-separated edge-list paths (relative to the
/// manifest's directory). All snapshots share one id remap.
/// Snapshot paths listed by a manifest, resolved against its directory.
/// Throws GraphError if the manifest is unreadable or lists nothing.
std::vector<std::filesystem::path> read_manifest(const std::filesystem::path& manifest);

TemporalGraphSequence load_sequence(const std::filesystem::path& manifest);

/// Writes edges as "u v" lines using raw ids when supplied. Isolated vertices
/// are emitted as single-id lines so the vertex set round-trips.
void write_edge_list(const std::filesystem::path& path, const Graph& g,
                     std::span<const std::uint64_t> raw_ids = {},
                     const std::string& header = {});

}  // namespace linkmirage
