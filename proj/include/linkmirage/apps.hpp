#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "linkmirage/graph.hpp"

namespace linkmirage {

/// P_t(v attacked) = 1 - (1 - f)^|union of v's perturbed neighbours up to t|,
/// one value per snapshot. v must be present in every snapshot.
std::vector<double> attack_probability(std::span<const Graph> perturbed, VertexId v, double f);

/// Size of the union of v's neighbourhoods over snapshots 0..t, per t.
std::vector<std::size_t> cumulative_neighbors(std::span<const Graph> perturbed, VertexId v);

/// Pairs at distance 1..k in g.
std::vector<Edge> k_hop_edges(const Graph& g, unsigned k);

struct SamplingReport {
    double probability = 0.0;
    std::size_t perturbed_edges = 0;
    std::size_t envelope_edges = 0;
    /// Perturbed edges outside the union of the k-hop graphs.
    std::size_t out_of_envelope = 0;
};

/// |union of E(G'_t)| / |union of E(G_t^k)|. Throws if the envelope is empty.
SamplingReport sampling_probability(std::span<const Graph> perturbed, std::span<const Graph> original, unsigned k);

// ------------------------------------------------------------------ sybil --

/// Route count multiplier r0 in r = r0 * sqrt(|E|). At r0 = 1 two uniform
/// tail sets miss each other with probability about 1/e.
inline constexpr double kRouteFactor = 3.0;

struct SybilScenario {
    Graph honest;
    std::size_t sybil_vertices = 100;
    std::size_t attack_edges = 10;
    std::size_t walk_length = 10;
    /// Routes per node; 0 picks ceil(kRouteFactor * sqrt(|E|)).
    std::size_t routes = 0;
    /// Honest verifiers sampled for the false-positive average.
    std::size_t verifiers = 10;
};

/// Honest region plus an Erdos-Renyi Sybil region of matching mean degree,
/// joined by `attack_edges` random cross edges. Sybil ids follow the honest ids.
struct SybilWorld {
    Graph graph;
    /// Indexed by vertex id.
    std::vector<char> is_sybil;
    std::size_t attack_edges = 0;
};

SybilWorld build_sybil_world(const SybilScenario& scenario, std::uint64_t seed);

/// Edges of g with one endpoint on each side.
std::size_t count_attack_edges(const Graph& g, std::span<const char> is_sybil);

struct SybilResult {
    double false_positive_rate = 0.0;
    std::size_t attack_edges_after = 0;
    std::size_t verifiers = 0;
    /// The honest part of g_prime is not connected.
    bool honest_disconnected = false;
};

/**
 * Simplified SybilLimit on g_prime.
 *
 * Route r of every vertex is routed by instance r: each vertex holds one
 * random permutation table per instance (incoming edge i leaves by edge
 * perm[i]). Each honest vertex sends one route of length walk_length per
 * instance and records its last edge as a tail. A suspect is accepted by a verifier when their tail
 * sets intersect. The false-positive rate is the share of honest suspects a
 * verifier rejects, averaged over verifiers.
 */
SybilResult sybil_eval(const SybilScenario& scenario, const SybilWorld& world, const Graph& g_prime,
                       std::uint64_t seed, unsigned threads = 1);

}  // namespace linkmirage
