#include "linkmirage/cluster.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>

namespace linkmirage {

Clustering Clustering::from_groups(std::vector<std::vector<VertexId>> groups) {
    Clustering c;
    std::erase_if(groups, [](const auto& grp) { return grp.empty(); });
    for (auto& grp : groups) {
        std::sort(grp.begin(), grp.end());
    }
    std::sort(groups.begin(), groups.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    VertexId bound = 0;
    for (const auto& grp : groups) {
        bound = std::max(bound, grp.back() + 1);
        c.vertices_.insert(c.vertices_.end(), grp.begin(), grp.end());
    }
    c.assignment_.assign(bound, kNone);
    for (std::size_t i = 0; i < groups.size(); ++i) {
        for (VertexId v : groups[i]) {
            if (c.assignment_[v] != kNone) {
                throw std::invalid_argument("vertex " + std::to_string(v) + " in two communities");
            }
            c.assignment_[v] = static_cast<CommunityId>(i);
        }
    }
    std::sort(c.vertices_.begin(), c.vertices_.end());
    c.communities_ = std::move(groups);
    return c;
}

namespace {

// Union-find over vertex ids, keyed by a node's name (its smallest vertex).
class NodeSets {
public:
    explicit NodeSets(std::span<const VertexId> vertices) {
        for (VertexId v : vertices) {
            parent_[v] = v;
        }
    }
    VertexId find(VertexId v) {
        auto it = parent_.find(v);
        if (it == parent_.end()) {
            throw std::invalid_argument("merge history names unknown vertex " + std::to_string(v));
        }
        while (it->second != v) {
            v = it->second;
            it = parent_.find(v);
        }
        return v;
    }
    void merge(VertexId a, VertexId b) {
        VertexId ra = find(a);
        VertexId rb = find(b);
        if (ra != rb) {
            parent_[std::max(ra, rb)] = std::min(ra, rb);
        }
    }

private:
    std::unordered_map<VertexId, VertexId> parent_;
};

struct HeapEntry {
    std::int64_t gain;
    VertexId lo;
    VertexId hi;
    std::uint32_t i;
    std::uint32_t j;
};

struct HeapOrder {
    bool operator()(const HeapEntry& x, const HeapEntry& y) const {
        // Max-heap on gain, then min-heap on (lo, hi).
        return std::tie(x.gain, y.lo, y.hi) < std::tie(y.gain, x.lo, x.hi);
    }
};

/// Greedy modularity agglomeration over an initial set of nodes. Each node is
/// a sorted, non-empty vertex group; its name is its smallest vertex.
std::vector<MergeEvent> agglomerate(const Graph& g, const std::vector<std::vector<VertexId>>& nodes,
                                    std::vector<std::vector<VertexId>>& out_groups) {
    const std::size_t n = nodes.size();
    std::vector<VertexId> name(n);
    std::unordered_map<VertexId, std::uint32_t> node_of;
    node_of.reserve(g.num_vertices());
    for (std::size_t i = 0; i < n; ++i) {
        name[i] = nodes[i].front();
        for (VertexId v : nodes[i]) {
            node_of[v] = static_cast<std::uint32_t>(i);
        }
    }

    std::vector<std::int64_t> degree(n, 0);
    std::vector<std::unordered_map<std::uint32_t, std::int64_t>> links(n);
    for (VertexId u : g.vertices()) {
        const std::uint32_t nu = node_of.at(u);
        degree[nu] += static_cast<std::int64_t>(g.degree(u));
        for (VertexId v : g.neighbors(u)) {
            const std::uint32_t nv = node_of.at(v);
            if (u < v && nu != nv) {
                ++links[nu][nv];
                ++links[nv][nu];
            }
        }
    }
    const std::int64_t two_m = static_cast<std::int64_t>(2 * g.num_edges());
    const double norm = two_m > 0 ? 2.0 * (static_cast<double>(two_m) / 2.0) * (static_cast<double>(two_m) / 2.0) : 1.0;

    auto gain_of = [&](std::uint32_t i, std::uint32_t j, std::int64_t w) {
        return two_m * w - degree[i] * degree[j];
    };

    std::priority_queue<HeapEntry, std::vector<HeapEntry>, HeapOrder> heap;
    auto push = [&](std::uint32_t i, std::uint32_t j, std::int64_t w) {
        const std::int64_t gain = gain_of(i, j, w);
        if (gain > 0) {
            heap.push({gain, std::min(name[i], name[j]), std::max(name[i], name[j]), i, j});
        }
    };
    for (std::uint32_t i = 0; i < n; ++i) {
        for (auto [j, w] : links[i]) {
            if (i < j) {
                push(i, j, w);
            }
        }
    }

    std::vector<char> alive(n, 1);
    std::vector<std::uint32_t> absorbed_into(n);
    std::iota(absorbed_into.begin(), absorbed_into.end(), 0u);
    std::vector<MergeEvent> events;
    while (!heap.empty()) {
        const HeapEntry top = heap.top();
        heap.pop();
        if (!alive[top.i] || !alive[top.j]) {
            continue;
        }
        auto it = links[top.i].find(top.j);
        if (it == links[top.i].end() || gain_of(top.i, top.j, it->second) != top.gain) {
            continue;
        }
        // The node with more links survives internally; it inherits the smaller name.
        std::uint32_t keep = links[top.i].size() >= links[top.j].size() ? top.i : top.j;
        std::uint32_t gone = keep == top.i ? top.j : top.i;
        events.push_back({top.lo, top.hi, top.lo, static_cast<double>(top.gain) / norm, false});
        name[keep] = top.lo;

        links[keep].erase(gone);
        links[gone].erase(keep);
        for (auto [x, w] : links[gone]) {
            links[keep][x] += w;
            auto& lx = links[x];
            lx.erase(gone);
            lx[keep] += w;
        }
        links[gone].clear();
        degree[keep] += degree[gone];
        alive[gone] = 0;
        absorbed_into[gone] = keep;
        for (auto [x, w] : links[keep]) {
            push(keep, x, w);
        }
    }

    std::vector<std::uint32_t> root(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        std::uint32_t r = i;
        while (absorbed_into[r] != r) {
            r = absorbed_into[r];
        }
        root[i] = r;
    }
    std::vector<std::vector<VertexId>> groups(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        auto& grp = groups[root[i]];
        grp.insert(grp.end(), nodes[i].begin(), nodes[i].end());
    }
    out_groups = std::move(groups);
    return events;
}

void append_frozen_events(const std::vector<VertexId>& sorted_group, std::vector<MergeEvent>& events) {
    for (std::size_t k = 1; k < sorted_group.size(); ++k) {
        events.push_back({sorted_group[0], sorted_group[k], sorted_group[0], 0.0, true});
    }
}

}  // namespace

Clustering MergeHistory::replay(std::span<const VertexId> vertices) const {
    NodeSets sets(vertices);
    for (const MergeEvent& e : events) {
        sets.merge(e.a, e.b);
    }
    std::unordered_map<VertexId, std::vector<VertexId>> by_root;
    for (VertexId v : vertices) {
        by_root[sets.find(v)].push_back(v);
    }
    std::vector<std::vector<VertexId>> groups;
    groups.reserve(by_root.size());
    for (auto& [r, members] : by_root) {
        groups.push_back(std::move(members));
    }
    return Clustering::from_groups(std::move(groups));
}

ClusterResult cluster_static(const Graph& g) {
    std::vector<std::vector<VertexId>> nodes;
    nodes.reserve(g.num_vertices());
    for (VertexId v : g.vertices()) {
        nodes.push_back({v});
    }
    std::vector<std::vector<VertexId>> groups;
    ClusterResult out;
    out.history.events = agglomerate(g, nodes, groups);
    out.clustering = Clustering::from_groups(std::move(groups));
    return out;
}

double modularity(const Graph& g, const Clustering& c) {
    const std::size_t m = g.num_edges();
    if (m == 0) {
        return 0.0;
    }
    std::vector<double> internal(c.num_communities(), 0.0);
    std::vector<double> degree(c.num_communities(), 0.0);
    for (VertexId u : g.vertices()) {
        if (!c.contains(u)) {
            throw std::invalid_argument("clustering does not cover vertex " + std::to_string(u));
        }
        const CommunityId cu = c.community_of(u);
        degree[cu] += static_cast<double>(g.degree(u));
        for (VertexId v : g.neighbors(u)) {
            if (u < v && c.contains(v) && c.community_of(v) == cu) {
                internal[cu] += 1.0;
            }
        }
    }
    const double md = static_cast<double>(m);
    double q = 0.0;
    for (std::size_t k = 0; k < internal.size(); ++k) {
        const double a = degree[k] / (2.0 * md);
        q += internal[k] / md - a * a;
    }
    return q;
}

double best_modularity(const Graph& g) {
    return modularity(g, cluster_static(g).clustering);
}

std::vector<Edge> changed_links(const Graph& prev, const Graph& cur) {
    auto a = prev.edges();
    auto b = cur.edges();
    std::vector<Edge> out;
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

std::vector<VertexId> hop_ball(const Graph& g, std::span<const Edge> links, unsigned hops) {
    std::vector<unsigned> depth(g.id_bound(), ~0u);
    std::deque<VertexId> queue;
    auto seed = [&](VertexId v) {
        if (g.contains(v) && depth[v] == ~0u) {
            depth[v] = 0;
            queue.push_back(v);
        }
    };
    for (const Edge& e : links) {
        seed(e.u);
        seed(e.v);
    }
    std::vector<VertexId> out;
    while (!queue.empty()) {
        VertexId v = queue.front();
        queue.pop_front();
        out.push_back(v);
        if (depth[v] == hops) {
            continue;
        }
        for (VertexId w : g.neighbors(v)) {
            if (depth[w] == ~0u) {
                depth[w] = depth[v] + 1;
                queue.push_back(w);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

ClusterResult recluster_dynamic(const Graph& g_t, const ClusterResult& prev,
                                std::span<const Edge> changed, unsigned m) {
    const Clustering& pc = prev.clustering;
    std::vector<VertexId> fresh;
    for (VertexId v : g_t.vertices()) {
        if (!pc.contains(v)) {
            fresh.push_back(v);
        }
    }
    bool deleted = false;
    for (VertexId v : pc.vertices()) {
        if (!g_t.contains(v)) {
            deleted = true;
            break;
        }
    }
    if (changed.empty() && fresh.empty() && !deleted) {
        return prev;
    }

    std::vector<char> freed(g_t.id_bound(), 0);
    for (VertexId v : hop_ball(g_t, changed, m)) {
        freed[v] = 1;
    }
    for (VertexId v : fresh) {
        freed[v] = 1;
    }

    std::vector<std::vector<VertexId>> frozen;  // previous communities restricted to g_t
    std::vector<std::vector<VertexId>> nodes;
    for (const auto& members : pc.communities()) {
        std::vector<VertexId> kept;
        std::vector<VertexId> virt;
        for (VertexId v : members) {
            if (!g_t.contains(v)) {
                continue;
            }
            kept.push_back(v);
            if (!freed[v]) {
                virt.push_back(v);
            }
        }
        if (!kept.empty()) {
            frozen.push_back(std::move(kept));
        }
        if (!virt.empty()) {
            nodes.push_back(std::move(virt));
        }
    }
    for (VertexId v : g_t.vertices()) {
        if (freed[v]) {
            nodes.push_back({v});
        }
    }
    for (VertexId v : fresh) {
        frozen.push_back({v});
    }

    ClusterResult out;
    std::vector<std::vector<VertexId>> groups;
    std::vector<MergeEvent> merges = agglomerate(g_t, nodes, groups);
    out.clustering = Clustering::from_groups(std::move(groups));
    for (const auto& node : nodes) {
        append_frozen_events(node, out.history.events);
    }
    out.history.events.insert(out.history.events.end(), merges.begin(), merges.end());

    Clustering frozen_clustering = Clustering::from_groups(frozen);
    if (modularity(g_t, frozen_clustering) > modularity(g_t, out.clustering)) {
        out.clustering = std::move(frozen_clustering);
        out.history.events.clear();
        for (const auto& members : out.clustering.communities()) {
            append_frozen_events(members, out.history.events);
        }
    }
    return out;
}

double jaccard(std::span<const VertexId> a, std::span<const VertexId> b) {
    std::size_t inter = 0;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) {
            ++i;
        } else if (b[j] < a[i]) {
            ++j;
        } else {
            ++inter;
            ++i;
            ++j;
        }
    }
    const std::size_t uni = a.size() + b.size() - inter;
    return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

CommunityId CommunityDiff::match_of(CommunityId cur) const {
    auto it = std::lower_bound(unchanged.begin(), unchanged.end(), cur,
                               [](const MatchedPair& p, CommunityId c) { return p.cur < c; });
    return it != unchanged.end() && it->cur == cur ? it->prev : Clustering::kNone;
}

CommunityDiff classify_communities(const Clustering& prev, const Clustering& cur, double theta) {
    if (!(theta > 0.0 && theta <= 1.0)) {
        throw std::invalid_argument("overlap threshold must lie in (0, 1]");
    }
    CommunityDiff diff;
    diff.threshold = theta;

    struct Candidate {
        double overlap;
        CommunityId cur;
        CommunityId prev;
    };
    std::vector<Candidate> candidates;
    for (CommunityId c = 0; c < cur.num_communities(); ++c) {
        std::unordered_map<CommunityId, std::size_t> hits;
        for (VertexId v : cur.members(c)) {
            if (prev.contains(v)) {
                ++hits[prev.community_of(v)];
            }
        }
        for (auto [p, inter] : hits) {
            const std::size_t uni = cur.members(c).size() + prev.members(p).size() - inter;
            candidates.push_back({static_cast<double>(inter) / static_cast<double>(uni), c, p});
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& x, const Candidate& y) {
        return std::tie(y.overlap, x.cur, x.prev) < std::tie(x.overlap, y.cur, y.prev);
    });
    std::vector<char> cur_used(cur.num_communities(), 0);
    std::vector<char> prev_used(prev.num_communities(), 0);
    for (const Candidate& cand : candidates) {
        if (cur_used[cand.cur] || prev_used[cand.prev]) {
            continue;
        }
        cur_used[cand.cur] = 1;
        prev_used[cand.prev] = 1;
        if (cand.overlap >= theta) {
            diff.unchanged.push_back({cand.prev, cand.cur, cand.overlap});
        }
    }
    std::sort(diff.unchanged.begin(), diff.unchanged.end(),
              [](const MatchedPair& a, const MatchedPair& b) { return a.cur < b.cur; });
    for (CommunityId c = 0; c < cur.num_communities(); ++c) {
        if (!diff.is_unchanged(c)) {
            diff.changed.push_back(c);
        }
    }
    return diff;
}

}  // namespace linkmirage
