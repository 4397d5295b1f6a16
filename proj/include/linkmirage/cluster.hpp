#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "linkmirage/graph.hpp"

namespace linkmirage {

using CommunityId = std::uint32_t;

/**
 * A partition of a vertex set into non-empty communities.
 *
 * Community ids are canonical: communities are numbered 0..K-1 in order of
 * their smallest member, so two equal partitions compare equal.
 */
class Clustering {
public:
    Clustering() = default;

    /// Builds a canonical clustering from groups. Empty groups are dropped; a
    /// vertex listed twice throws std::invalid_argument.
    static Clustering from_groups(std::vector<std::vector<VertexId>> groups);

    std::size_t num_communities() const { return communities_.size(); }
    std::size_t num_vertices() const { return vertices_.size(); }
    std::span<const VertexId> vertices() const { return vertices_; }
    std::span<const VertexId> members(CommunityId c) const { return communities_[c]; }
    const std::vector<std::vector<VertexId>>& communities() const { return communities_; }

    bool contains(VertexId v) const { return v < assignment_.size() && assignment_[v] != kNone; }
    CommunityId community_of(VertexId v) const { return assignment_[v]; }

    friend bool operator==(const Clustering& a, const Clustering& b) {
        return a.communities_ == b.communities_;
    }

    static constexpr CommunityId kNone = static_cast<CommunityId>(-1);

private:
    std::vector<VertexId> vertices_;
    std::vector<CommunityId> assignment_;
    std::vector<std::vector<VertexId>> communities_;
};

/// One agglomeration step. Nodes are named by their smallest vertex, so the
/// merged node always takes the name min(a, b).
struct MergeEvent {
    VertexId a = 0;
    VertexId b = 0;
    VertexId parent = 0;
    double delta = 0.0;
    /// True for the bookkeeping merges that rebuild a frozen (virtual) node
    /// during re-clustering; those carry delta 0.
    bool frozen = false;

    friend bool operator==(const MergeEvent&, const MergeEvent&) = default;
};

struct MergeHistory {
    std::vector<MergeEvent> events;

    /// Applies the events to singletons over `vertices`.
    Clustering replay(std::span<const VertexId> vertices) const;
};

struct ClusterResult {
    Clustering clustering;
    MergeHistory history;
};

/// Greedy agglomerative maximum-modularity clustering. Ties between equal
/// gains go to the pair with the smallest (min id, max id).
ClusterResult cluster_static(const Graph& g);

/// Newman modularity; 0 for a graph without edges.
double modularity(const Graph& g, const Clustering& c);

/// Modularity of the greedy clustering of g.
double best_modularity(const Graph& g);

/// Symmetric difference of the edge sets, plus every edge incident to a
/// vertex present in only one of the graphs.
std::vector<Edge> changed_links(const Graph& prev, const Graph& cur);

/// Vertices within `hops` hops (in g) of any endpoint of `links` present in g.
std::vector<VertexId> hop_ball(const Graph& g, std::span<const Edge> links, unsigned hops);

/**
 * Incremental re-clustering of g_t from the clustering of G_{t-1}.
 *
 * Vertices within m hops of a changed link, and vertices new at t, are freed
 * as singletons. What is left of every previous community collapses into one
 * virtual node, which is never split. The greedy agglomeration then runs over
 * virtual nodes and singletons on g_t. If the frozen partition (previous
 * communities restricted to g_t, new vertices alone) scores higher, it wins.
 */
ClusterResult recluster_dynamic(const Graph& g_t, const ClusterResult& prev,
                                std::span<const Edge> changed, unsigned m);

struct MatchedPair {
    CommunityId prev = 0;
    CommunityId cur = 0;
    double overlap = 0.0;

    friend bool operator==(const MatchedPair&, const MatchedPair&) = default;
};

struct CommunityDiff {
    std::vector<MatchedPair> unchanged;
    std::vector<CommunityId> changed;
    double threshold = 0.8;

    /// Previous community matched to `cur`, or Clustering::kNone.
    CommunityId match_of(CommunityId cur) const;
    bool is_unchanged(CommunityId cur) const { return match_of(cur) != Clustering::kNone; }
};

/// Greedy maximum-Jaccard matching of current to previous communities; a
/// pair with overlap >= theta is unchanged. An empty `prev` marks every
/// community as changed.
CommunityDiff classify_communities(const Clustering& prev, const Clustering& cur, double theta);

/// |a ∩ b| / |a ∪ b| for sorted vertex lists.
double jaccard(std::span<const VertexId> a, std::span<const VertexId> b);

}  // namespace linkmirage
