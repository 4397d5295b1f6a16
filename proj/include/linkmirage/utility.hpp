#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "linkmirage/cluster.hpp"
#include "linkmirage/graph.hpp"
#include "linkmirage/perturb.hpp"
#include "linkmirage/transition.hpp"

namespace linkmirage {

struct UtilityReport {
    unsigned l = 1;
    /// Mean row TV between P_t^l and (P'_t)^l, one entry per snapshot.
    std::vector<double> per_t;
    double aggregate = 0.0;
    /// Filled by utility_bound_report.
    std::vector<double> deltas;
    double epsilon = 0.0;
    double bound = 0.0;
};

/// Utility distance of a perturbed sequence. Each pair must share its vertex
/// set; throws DimensionError otherwise.
UtilityReport utility_distance(const TemporalGraphSequence& seq, std::span<const Graph> perturbed, unsigned l,
                               unsigned threads = 1);

/// Inter-community edges over vertices.
double ratio_cut(const Graph& g, const Clustering& c);

/// (1 / (T+1)) * sum_t 2 l (epsilon + delta_t).
double ud_upper_bound(double epsilon, std::span<const double> deltas, unsigned l);

/// Per community, the mean over its members of TV(P(v), P'(v)) on full rows:
/// how far the perturbation moved that community's one-step walks.
std::vector<double> community_distances(const Graph& g, const Graph& g_prime, const Clustering& c);

/// utility_distance plus ratio cuts under `clusterings` and
/// epsilon = max community distance over all t.
UtilityReport utility_bound_report(const TemporalGraphSequence& seq, std::span<const Graph> perturbed,
                                   std::span<const Clustering> clusterings, unsigned l);

struct DegreeStat {
    VertexId vertex = 0;
    double original = 0.0;
    double mean = 0.0;
    double stddev = 0.0;
    /// (mean - original) / (stddev / sqrt(trials)); 0 when every trial hit
    /// the original degree exactly, +-infinity when the degree was constant
    /// but different.
    double z = 0.0;
};

/// Monte Carlo check of degree expectation under single-snapshot LinkMirage.
/// Clustering is computed once; each trial redraws the random part.
std::vector<DegreeStat> expected_degree_report(const Graph& g, const PerturbParams& params, std::size_t trials,
                                               std::uint64_t seed);

/// Same statistic for any sampler of perturbed graphs of g.
template <class Draw>
std::vector<DegreeStat> degree_statistics(const Graph& g, std::size_t trials, Draw&& draw);

/// PageRank by power iteration; mass of dangling vertices is spread
/// uniformly. Throws std::runtime_error after 10000 iterations.
std::vector<double> pagerank(const Graph& g, double damping = 0.85, double tol = 1e-12);

struct StructuralMetrics {
    double clustering_coefficient = 0.0;
    double assortativity = 0.0;
    /// Degree correlation undefined (all edge endpoints share one degree, or
    /// fewer than two edges); assortativity is then reported as 0.
    bool assortativity_degenerate = false;
};

StructuralMetrics structural_metrics(const Graph& g);

struct SpectralOptions {
    bool lazy = false;
    std::size_t max_steps = 10000;
};

/// Second largest eigenvalue modulus of the walk matrix (or of (P + I) / 2
/// when lazy). Needs a connected graph with at least one edge.
double slem(const Graph& g, bool lazy = false);

/// Smallest r with max_v TV(P^r(v), pi) < epsilon, pi(v) = deg(v) / 2|E|.
/// Empty if not reached within max_steps, which is immediate for a
/// bipartite graph without the lazy option.
std::optional<std::size_t> mixing_time(const Graph& g, double epsilon, const SpectralOptions& options = {});

struct SpectralMetrics {
    double slem = 0.0;
    std::optional<std::size_t> mixing_time;
};

SpectralMetrics spectral_metrics(const Graph& g, double epsilon, const SpectralOptions& options = {});

bool is_bipartite(const Graph& g);
bool is_connected(const Graph& g);

/**
 * Mixing-time and SLEM relations between a graph and its perturbation.
 *
 * With tau = mixing_time(g, epsilon) and eps' = UD(g, g', tau) - epsilon:
 * the mixing check is mixing_time(g', eps') >= tau; the SLEM check is
 * slem(g') >= 1 - (ln n + ln(1 / eps')) / tau. Both are vacuous when
 * eps' <= 0.
 */
struct MixingBoundCheck {
    bool vacuous = false;
    std::size_t tau = 0;
    double ud_at_tau = 0.0;
    double shifted_epsilon = 0.0;
    std::optional<std::size_t> tau_prime;
    bool mixing_holds = false;
    double slem_prime = 0.0;
    double slem_lower_bound = 0.0;
    bool slem_holds = false;
};

MixingBoundCheck mixing_bound_check(const Graph& g, const Graph& g_prime, double epsilon,
                                    const SpectralOptions& options = {});

// ------------------------------------------------------------------------

template <class Draw>
std::vector<DegreeStat> degree_statistics(const Graph& g, std::size_t trials, Draw&& draw) {
    const auto vs = g.vertices();
    std::vector<double> sum(vs.size(), 0.0), sum2(vs.size(), 0.0);
    for (std::size_t i = 0; i < trials; ++i) {
        const Graph h = draw(i);
        for (std::size_t j = 0; j < vs.size(); ++j) {
            const double d = h.contains(vs[j]) ? static_cast<double>(h.degree(vs[j])) : 0.0;
            sum[j] += d;
            sum2[j] += d * d;
        }
    }
    std::vector<DegreeStat> out(vs.size());
    const double n = static_cast<double>(trials);
    for (std::size_t j = 0; j < vs.size(); ++j) {
        DegreeStat& s = out[j];
        s.vertex = vs[j];
        s.original = static_cast<double>(g.degree(vs[j]));
        s.mean = sum[j] / n;
        const double var = trials > 1 ? std::max(0.0, (sum2[j] - n * s.mean * s.mean) / (n - 1)) : 0.0;
        s.stddev = std::sqrt(var);
        const double diff = s.mean - s.original;
        if (s.stddev > 0) {
            s.z = diff / (s.stddev / std::sqrt(n));
        } else {
            s.z = std::fabs(diff) < 1e-12 ? 0.0 : std::copysign(INFINITY, diff);
        }
    }
    return out;
}

}  // namespace linkmirage
