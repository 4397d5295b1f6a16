#include "linkmirage/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "linkmirage/parallel.hpp"
#include "linkmirage/transition.hpp"

namespace linkmirage {

namespace {

// Stream tags; each keeps its own family of derived seeds.
constexpr std::uint64_t kIntraTag = 1;
constexpr std::uint64_t kInterTag = 2;
constexpr std::uint64_t kStepTag = 3;
constexpr std::uint64_t kStaticTag = 4;
constexpr std::uint64_t kHayTag = 5;

bool sorted_contains(std::span<const VertexId> xs, VertexId v) {
    return std::binary_search(xs.begin(), xs.end(), v);
}

}  // namespace

std::string to_string(InterClusterForm form) {
    return form == InterClusterForm::kDegreePreserving ? "appendixC" : "algorithm1";
}

InterClusterForm parse_inter_cluster_form(const std::string& text) {
    if (text == "appendixC") {
        return InterClusterForm::kDegreePreserving;
    }
    if (text == "algorithm1") {
        return InterClusterForm::kAsymmetric;
    }
    throw std::invalid_argument("unknown inter-cluster form '" + text + "' (expected appendixC or algorithm1)");
}

void PerturbParams::validate() const {
    if (k < 1) {
        throw std::invalid_argument("perturbation walk length k must be >= 1");
    }
    if (!(theta > 0.0 && theta <= 1.0)) {
        throw std::invalid_argument("overlap threshold theta must lie in (0, 1]");
    }
    for (auto [c, kc] : k_override) {
        if (kc < 1) {
            throw std::invalid_argument("per-community k must be >= 1");
        }
    }
}

unsigned PerturbParams::k_for(CommunityId c) const {
    auto it = k_override.find(c);
    return it == k_override.end() ? k : it->second;
}

namespace {

/// Mutable simple graph used while rewiring: edge set plus adjacency lists.
class WorkingGraph {
public:
    explicit WorkingGraph(std::span<const Edge> edges) {
        present_.reserve(edges.size() * 2);
        for (const Edge& e : edges) {
            add(e);
        }
    }
    bool has(const Edge& e) const { return present_.contains(edge_key(e)); }
    bool add(const Edge& e) {
        if (!present_.insert(edge_key(e)).second) {
            return false;
        }
        adj_[e.u].push_back(e.v);
        adj_[e.v].push_back(e.u);
        return true;
    }
    void remove(const Edge& e) {
        present_.erase(edge_key(e));
        drop(e.u, e.v);
        drop(e.v, e.u);
    }
    std::span<const VertexId> neighbors(VertexId v) const {
        auto it = adj_.find(v);
        return it == adj_.end() ? std::span<const VertexId>{} : std::span<const VertexId>{it->second};
    }
    std::vector<Edge> edges() const {
        std::vector<Edge> out;
        out.reserve(present_.size());
        for (const auto& [v, nb] : adj_) {
            for (VertexId w : nb) {
                if (v < w) {
                    out.emplace_back(v, w);
                }
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    void drop(VertexId v, VertexId w) {
        auto& nb = adj_[v];
        auto it = std::find(nb.begin(), nb.end(), w);
        *it = nb.back();
        nb.pop_back();
    }

    std::unordered_set<std::uint64_t> present_;
    std::unordered_map<VertexId, std::vector<VertexId>> adj_;
};

}  // namespace

void replace_edges(const Graph& g, std::span<const Edge> originals, unsigned k, Rng& rng,
                   std::vector<Edge>& out) {
    WorkingGraph work(out);
    for (const Edge& e : originals) {
        work.add(e);
    }
    for (const Edge& e : originals) {
        if (!work.has(e)) {
            continue;  // already swapped out as a partner edge
        }
        const bool flip = uniform_index(rng, 2) == 1;
        const VertexId origin = flip ? e.v : e.u;
        const VertexId other = flip ? e.u : e.v;
        for (unsigned attempt = 0; attempt <= kFakeEdgeRetries; ++attempt) {
            const VertexId w = random_walk(g, origin, k, rng);
            if (w == origin || w == other || work.has(Edge(origin, w))) {
                continue;
            }
            auto partners = work.neighbors(w);
            if (partners.empty()) {
                continue;
            }
            const VertexId x = partners[uniform_index(rng, partners.size())];
            if (x == other || work.has(Edge(other, x))) {
                continue;
            }
            // (origin, other) + (w, x) -> (origin, w) + (other, x): every degree is kept.
            work.remove(Edge(origin, other));
            work.remove(Edge(w, x));
            work.add(Edge(origin, w));
            work.add(Edge(other, x));
            break;
        }
    }
    out = work.edges();
}

Graph perturb_static(const Graph& g, unsigned k, Rng& rng) {
    if (k < 1) {
        throw std::invalid_argument("perturbation walk length k must be >= 1");
    }
    std::vector<Edge> fake;
    fake.reserve(g.num_edges());
    const auto originals = g.edges();
    replace_edges(g, originals, k, rng, fake);
    auto vs = g.vertices();
    return Graph::from_edges({vs.begin(), vs.end()}, std::move(fake));
}

std::map<CommunityPair, MarginalPair> marginal_pairs(const Graph& g, const Clustering& c) {
    std::map<CommunityPair, std::pair<std::map<VertexId, std::size_t>, std::map<VertexId, std::size_t>>> acc;
    std::map<CommunityPair, std::size_t> counts;
    for (const Edge& e : g.edges()) {
        const CommunityId cu = c.community_of(e.u);
        const CommunityId cv = c.community_of(e.v);
        if (cu == cv) {
            continue;
        }
        const bool u_first = cu < cv;
        const CommunityPair key{std::min(cu, cv), std::max(cu, cv)};
        auto& sides = acc[key];
        ++sides.first[u_first ? e.u : e.v];
        ++sides.second[u_first ? e.v : e.u];
        ++counts[key];
    }
    std::map<CommunityPair, MarginalPair> out;
    for (auto& [key, sides] : acc) {
        MarginalPair mp;
        for (auto [v, d] : sides.first) {
            mp.a.nodes.push_back(v);
            mp.a.inter_degree.push_back(d);
        }
        for (auto [v, d] : sides.second) {
            mp.b.nodes.push_back(v);
            mp.b.inter_degree.push_back(d);
        }
        mp.inter_edges = counts[key];
        out.emplace(key, std::move(mp));
    }
    return out;
}

double inter_cluster_probability(InterClusterForm form, std::size_t da, std::size_t db,
                                 const MarginalPair& pair) {
    const double base = static_cast<double>(da) * static_cast<double>(db) /
                        static_cast<double>(pair.inter_edges);
    if (form == InterClusterForm::kDegreePreserving) {
        return std::min(1.0, base);
    }
    const double va = static_cast<double>(pair.a.nodes.size());
    const double vb = static_cast<double>(pair.b.nodes.size());
    return std::min(1.0, base * va / (va + vb));
}

std::vector<Edge> rewire_pair(const MarginalPair& pair, InterClusterForm form, Rng& rng) {
    std::vector<Edge> out;
    if (pair.inter_edges == 0 || pair.a.nodes.empty() || pair.b.nodes.empty()) {
        return out;
    }
    // Probabilities factor as w_i * w_j, so side b is visited in decreasing
    // weight order and skipped geometrically; cost is linear in the nodes plus
    // the edges produced rather than |v_a| * |v_b|.
    std::vector<std::size_t> order(pair.b.nodes.size());
    for (std::size_t j = 0; j < order.size(); ++j) {
        order[j] = j;
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return pair.b.inter_degree[x] > pair.b.inter_degree[y];
    });
    const std::size_t nb = order.size();
    for (std::size_t i = 0; i < pair.a.nodes.size(); ++i) {
        const std::size_t da = pair.a.inter_degree[i];
        auto prob = [&](std::size_t j) {
            return inter_cluster_probability(form, da, pair.b.inter_degree[order[j]], pair);
        };
        std::size_t j = 0;
        double bound = prob(0);
        while (j < nb && bound > 0.0) {
            if (bound < 1.0) {
                const double r = uniform01(rng);
                j += static_cast<std::size_t>(std::floor(std::log1p(-r) / std::log1p(-bound)));
                if (j >= nb) {
                    break;
                }
            }
            const double q = prob(j);
            if (uniform01(rng) < q / bound) {
                out.emplace_back(pair.a.nodes[i], pair.b.nodes[order[j]]);
            }
            bound = q;
            ++j;
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

InterEdges perturb_intercluster(const Graph& g, const Clustering& c, InterClusterForm form,
                                std::uint64_t seed) {
    InterEdges out;
    for (const auto& [key, pair] : marginal_pairs(g, c)) {
        Rng rng = make_stream(seed, {kInterTag, key.first, key.second});
        out[key] = rewire_pair(pair, form, rng);
    }
    return out;
}

Graph PerturbationRecord::assemble(std::span<const VertexId> vertices) const {
    std::vector<Edge> edges;
    for (const auto& [c, es] : intra) {
        edges.insert(edges.end(), es.begin(), es.end());
    }
    for (const auto& [key, es] : inter) {
        edges.insert(edges.end(), es.begin(), es.end());
    }
    return Graph::from_edges({vertices.begin(), vertices.end()}, std::move(edges));
}

StepPlan plan_step(const Graph& g_t, const Graph* prev_graph, const ClusterResult* prev_cluster,
                   const PerturbParams& params) {
    params.validate();
    StepPlan plan;
    if (prev_graph == nullptr || prev_cluster == nullptr) {
        plan.cluster = cluster_static(g_t);
        plan.diff = classify_communities(Clustering{}, plan.cluster.clustering, params.theta);
    } else {
        const auto changed = changed_links(*prev_graph, g_t);
        plan.cluster = recluster_dynamic(g_t, *prev_cluster, changed, params.m);
        plan.diff = classify_communities(prev_cluster->clustering, plan.cluster.clustering, params.theta);
    }
    plan.marginals = marginal_pairs(g_t, plan.cluster.clustering);
    return plan;
}

PerturbationRecord realize_step(const Graph& g_t, const StepPlan& plan, const PerturbationRecord* prev,
                                const PerturbParams& params, std::size_t t, std::uint64_t seed) {
    const Clustering& clustering = plan.cluster.clustering;
    PerturbationRecord record;
    record.t = t;
    record.clustering = clustering;

    const std::size_t K = clustering.num_communities();
    std::vector<std::vector<Edge>> intra(K);
    parallel_for(K, params.threads, [&](std::size_t ci) {
        const auto c = static_cast<CommunityId>(ci);
        const auto members = clustering.members(c);
        const Graph sub = induced_subgraph(g_t, members);
        Rng rng = make_stream(seed, {kIntraTag, c});
        const CommunityId matched = prev ? plan.diff.match_of(c) : Clustering::kNone;
        auto& out = intra[ci];
        if (matched == Clustering::kNone) {
            replace_edges(sub, sub.edges(), params.k_for(c), rng, out);
            return;
        }
        // Unchanged: keep last step's fake edges on the surviving members and
        // perturb only the original edges touching members that joined since.
        const auto old_members = prev->clustering.members(matched);
        if (auto it = prev->intra.find(matched); it != prev->intra.end()) {
            for (const Edge& e : it->second) {
                if (sorted_contains(members, e.u) && sorted_contains(members, e.v)) {
                    out.push_back(e);
                }
            }
        }
        std::vector<Edge> joined;
        for (const Edge& e : sub.edges()) {
            if (!sorted_contains(old_members, e.u) || !sorted_contains(old_members, e.v)) {
                joined.push_back(e);
            }
        }
        replace_edges(sub, joined, params.k_for(c), rng, out);
    });
    for (std::size_t ci = 0; ci < K; ++ci) {
        record.intra.emplace(static_cast<CommunityId>(ci), std::move(intra[ci]));
    }

    std::vector<const std::pair<const CommunityPair, MarginalPair>*> pairs;
    for (const auto& entry : plan.marginals) {
        pairs.push_back(&entry);
    }
    std::vector<std::vector<Edge>> inter(pairs.size());
    parallel_for(pairs.size(), params.threads, [&](std::size_t pi) {
        const auto& [key, pair] = *pairs[pi];
        const auto [a, b] = key;
        const CommunityId pa = prev ? plan.diff.match_of(a) : Clustering::kNone;
        const CommunityId pb = prev ? plan.diff.match_of(b) : Clustering::kNone;
        if (pa != Clustering::kNone && pb != Clustering::kNone) {
            auto it = prev->inter.find({std::min(pa, pb), std::max(pa, pb)});
            if (it != prev->inter.end()) {
                const auto ma = clustering.members(a);
                const auto mb = clustering.members(b);
                for (const Edge& e : it->second) {
                    if ((sorted_contains(ma, e.u) && sorted_contains(mb, e.v)) ||
                        (sorted_contains(ma, e.v) && sorted_contains(mb, e.u))) {
                        inter[pi].push_back(e);
                    }
                }
                return;
            }
        }
        Rng rng = make_stream(seed, {kInterTag, a, b});
        inter[pi] = rewire_pair(pair, params.form, rng);
    });
    for (std::size_t pi = 0; pi < pairs.size(); ++pi) {
        record.inter.emplace(pairs[pi]->first, std::move(inter[pi]));
    }
    return record;
}

StepResult linkmirage_step(const Graph& g_t, const std::optional<PreviousStep>& prev,
                           const PerturbParams& params, std::size_t t, std::uint64_t seed) {
    if ((t == 0) != !prev.has_value()) {
        throw std::logic_error(t == 0 ? "previous step supplied at t = 0"
                                      : "previous step missing at t = " + std::to_string(t));
    }
    StepPlan plan = prev ? plan_step(g_t, &prev->graph, &prev->cluster, params)
                         : plan_step(g_t, nullptr, nullptr, params);
    StepResult out;
    out.record = realize_step(g_t, plan, prev ? &prev->record : nullptr, params, t, seed);
    out.perturbed = out.record.assemble(g_t.vertices());
    out.cluster = std::move(plan.cluster);
    out.diff = std::move(plan.diff);
    return out;
}

std::uint64_t step_seed(std::uint64_t seed, std::size_t t) {
    return derive_seed(seed, {kStepTag, t});
}

std::vector<StepPlan> plan_sequence(const TemporalGraphSequence& seq, const PerturbParams& params) {
    std::vector<StepPlan> plans;
    plans.reserve(seq.size());
    for (std::size_t t = 0; t < seq.size(); ++t) {
        if (t == 0) {
            plans.push_back(plan_step(seq[0], nullptr, nullptr, params));
        } else {
            plans.push_back(plan_step(seq[t], &seq[t - 1], &plans[t - 1].cluster, params));
        }
    }
    return plans;
}

SequenceRun realize_sequence(const TemporalGraphSequence& seq, const std::vector<StepPlan>& plans,
                             const PerturbParams& params, std::uint64_t seed) {
    SequenceRun run;
    run.records.reserve(seq.size());
    for (std::size_t t = 0; t < seq.size(); ++t) {
        const PerturbationRecord* prev = t == 0 ? nullptr : &run.records[t - 1];
        run.records.push_back(realize_step(seq[t], plans[t], prev, params, t, step_seed(seed, t)));
        run.perturbed.push_back(run.records.back().assemble(seq[t].vertices()));
    }
    return run;
}

SequenceRun linkmirage_run(const TemporalGraphSequence& seq, const PerturbParams& params) {
    if (seq.size() == 0) {
        throw std::invalid_argument("empty graph sequence");
    }
    auto plans = plan_sequence(seq, params);
    SequenceRun run = realize_sequence(seq, plans, params, params.seed);
    run.plans = std::move(plans);
    return run;
}

std::vector<Graph> linkmirage_sequence(const TemporalGraphSequence& seq, const PerturbParams& params) {
    return linkmirage_run(seq, params).perturbed;
}

std::vector<Graph> perturb_static_baseline_sequence(const TemporalGraphSequence& seq, unsigned k,
                                                    std::uint64_t seed) {
    std::vector<Graph> out;
    out.reserve(seq.size());
    for (std::size_t t = 0; t < seq.size(); ++t) {
        Rng rng = make_stream(seed, {kStaticTag, t});
        out.push_back(perturb_static(seq[t], k, rng));
    }
    return out;
}

Graph hay_perturb(const Graph& g, std::size_t r, Rng& rng) {
    auto edges = g.edges();
    const std::size_t n = g.num_vertices();
    const std::size_t pairs = n * (n - (n > 0 ? 1 : 0)) / 2;
    if (r > edges.size() || r > pairs - edges.size()) {
        throw std::invalid_argument("hay perturbation: r exceeds available edges or non-edges");
    }
    for (std::size_t i = 0; i < r; ++i) {
        std::swap(edges[i], edges[i + uniform_index(rng, edges.size() - i)]);
    }
    std::vector<Edge> kept(edges.begin() + static_cast<std::ptrdiff_t>(r), edges.end());
    std::unordered_set<std::uint64_t> taken;
    for (const Edge& e : g.edges()) {
        taken.insert(edge_key(e));
    }
    auto vs = g.vertices();
    std::size_t added = 0;
    while (added < r) {
        const VertexId a = vs[uniform_index(rng, n)];
        const VertexId b = vs[uniform_index(rng, n)];
        if (a == b) {
            continue;
        }
        const Edge e(a, b);
        if (taken.insert(edge_key(e)).second) {
            kept.push_back(e);
            ++added;
        }
    }
    return Graph::from_edges({vs.begin(), vs.end()}, std::move(kept));
}

std::vector<Graph> hay_baseline_sequence(const TemporalGraphSequence& seq, double r_fraction,
                                         std::uint64_t seed) {
    std::vector<Graph> out;
    out.reserve(seq.size());
    for (std::size_t t = 0; t < seq.size(); ++t) {
        Rng rng = make_stream(seed, {kHayTag, t});
        const auto r = static_cast<std::size_t>(std::llround(r_fraction * static_cast<double>(seq[t].num_edges())));
        out.push_back(hay_perturb(seq[t], r, rng));
    }
    return out;
}

}  // namespace linkmirage
