#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "linkmirage/cluster.hpp"
#include "linkmirage/graph.hpp"
#include "linkmirage/random.hpp"

namespace linkmirage {

/// Which inter-cluster rewiring probability to use for marginal pair (i, j).
enum class InterClusterForm {
    /// deg_a(i) deg_b(j) / |E_ab|: preserves each marginal node's expected inter-degree.
    kDegreePreserving,
    /// deg_a(i) deg_b(j) |v_a| / (|E_ab| (|v_a| + |v_b|)), the asymmetric per-pair form.
    kAsymmetric,
};

std::string to_string(InterClusterForm form);
InterClusterForm parse_inter_cluster_form(const std::string& text);

struct PerturbParams {
    unsigned k = 2;
    unsigned m = 2;
    double theta = 0.8;
    std::uint64_t seed = 0;
    InterClusterForm form = InterClusterForm::kDegreePreserving;
    /// Optional per-community walk length, keyed by community id at the step
    /// it applies to. Communities not listed use k.
    std::map<CommunityId, unsigned> k_override;
    /// Worker threads for per-community perturbation. Output never depends on it.
    unsigned threads = 1;

    /// Throws std::invalid_argument unless k >= 1 and 0 < theta <= 1.
    void validate() const;
    unsigned k_for(CommunityId c) const;
};

/// Number of extra walks drawn when a proposed fake edge cannot be placed.
inline constexpr unsigned kFakeEdgeRetries = 10;

/**
 * Static k-hop random-walk perturbation of a whole graph (or of one
 * community's induced subgraph).
 *
 * Each original edge (v, u) is visited once. A fair coin picks the walking
 * endpoint v, which walks k steps to w and proposes the fake edge (v, w). To
 * keep the graph simple without biasing degrees, the proposal is realized as
 * a swap: a current neighbor x of w is drawn and (v, u), (w, x) become
 * (v, w), (u, x). Proposals that would create a self-loop or a duplicate are
 * redrawn up to kFakeEdgeRetries times; if none fits, the edge stays. Every
 * vertex keeps its degree, and the vertex set is preserved.
 */
Graph perturb_static(const Graph& g, unsigned k, Rng& rng);

/// Rewires `originals` (edges of g) on top of the edges already in `out`;
/// walks run on g. `out` holds the resulting edge set, sorted.
void replace_edges(const Graph& g, std::span<const Edge> originals, unsigned k, Rng& rng,
                   std::vector<Edge>& out);

using CommunityPair = std::pair<CommunityId, CommunityId>;
using InterEdges = std::map<CommunityPair, std::vector<Edge>>;

/// Marginal-node statistics of one community pair (a, b), a < b, counted over
/// the original edges running between them.
struct MarginalSide {
    std::vector<VertexId> nodes;
    std::vector<std::size_t> inter_degree;
};
struct MarginalPair {
    MarginalSide a;
    MarginalSide b;
    std::size_t inter_edges = 0;
};

/// Original inter-community edges grouped by community pair.
std::map<CommunityPair, MarginalPair> marginal_pairs(const Graph& g, const Clustering& c);

/// Probability of linking marginal nodes with inter-degrees da, db.
double inter_cluster_probability(InterClusterForm form, std::size_t da, std::size_t db,
                                 const MarginalPair& pair);

/// Independent Bernoulli rewiring of one community pair's marginal nodes,
/// with probabilities clamped to 1.
std::vector<Edge> rewire_pair(const MarginalPair& pair, InterClusterForm form, Rng& rng);

/// Rewires every community pair. Pair (a, b) draws from its own stream
/// derived from `seed`.
InterEdges perturb_intercluster(const Graph& g, const Clustering& c, InterClusterForm form,
                                std::uint64_t seed);

/**
 * What one LinkMirage step produced: the fake edges of every community and
 * every community pair, under the clustering of that step. Step t+1 copies
 * from it for communities classified unchanged.
 */
struct PerturbationRecord {
    std::size_t t = 0;
    Clustering clustering;
    std::map<CommunityId, std::vector<Edge>> intra;
    InterEdges inter;

    /// Union of all recorded edges over `vertices`.
    Graph assemble(std::span<const VertexId> vertices) const;
};

/// The deterministic half of a step: clustering, merge history, community diff.
struct StepPlan {
    ClusterResult cluster;
    CommunityDiff diff;
    std::map<CommunityPair, MarginalPair> marginals;
};

StepPlan plan_step(const Graph& g_t, const Graph* prev_graph, const ClusterResult* prev_cluster,
                   const PerturbParams& params);

/// The random half of a step. `prev` must be the record of step t-1 when
/// the plan classified any community unchanged.
PerturbationRecord realize_step(const Graph& g_t, const StepPlan& plan, const PerturbationRecord* prev,
                                const PerturbParams& params, std::size_t t, std::uint64_t step_seed);

struct PreviousStep {
    const Graph& graph;
    const PerturbationRecord& record;
    const ClusterResult& cluster;
};

struct StepResult {
    Graph perturbed;
    PerturbationRecord record;
    ClusterResult cluster;
    CommunityDiff diff;
};

/// One LinkMirage step. `prev` must be empty exactly when t == 0.
StepResult linkmirage_step(const Graph& g_t, const std::optional<PreviousStep>& prev,
                           const PerturbParams& params, std::size_t t, std::uint64_t step_seed);

/// Stream seed of step t of a sequence run.
std::uint64_t step_seed(std::uint64_t seed, std::size_t t);

struct SequenceRun {
    std::vector<Graph> perturbed;
    std::vector<PerturbationRecord> records;
    std::vector<StepPlan> plans;
};

/// Deterministic plans for every snapshot.
std::vector<StepPlan> plan_sequence(const TemporalGraphSequence& seq, const PerturbParams& params);

/// Folds realize_step over precomputed plans.
SequenceRun realize_sequence(const TemporalGraphSequence& seq, const std::vector<StepPlan>& plans,
                             const PerturbParams& params, std::uint64_t seed);

SequenceRun linkmirage_run(const TemporalGraphSequence& seq, const PerturbParams& params);
std::vector<Graph> linkmirage_sequence(const TemporalGraphSequence& seq, const PerturbParams& params);

/// perturb_static applied to each snapshot independently.
std::vector<Graph> perturb_static_baseline_sequence(const TemporalGraphSequence& seq, unsigned k,
                                                    std::uint64_t seed);

/// Random edge deletion/insertion: r real edges removed, r non-edges added.
Graph hay_perturb(const Graph& g, std::size_t r, Rng& rng);
std::vector<Graph> hay_baseline_sequence(const TemporalGraphSequence& seq, double r_fraction,
                                         std::uint64_t seed);

}  // namespace linkmirage
