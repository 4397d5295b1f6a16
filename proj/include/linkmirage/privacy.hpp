#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "linkmirage/graph.hpp"
#include "linkmirage/mechanism.hpp"
#include "linkmirage/transition.hpp"

namespace linkmirage {

/// Does link (u, v) exist at time t?
struct LinkQuery {
    std::size_t t = 0;
    VertexId u = 0;
    VertexId v = 0;
    std::optional<bool> truth;
};

// ---------------------------------------------------------------- prior ----

enum class PriorKind {
    /// Fit on snapshot t itself with the queried pair held out: the adversary
    /// knows every graph except the link in question.
    kWorstCase,
    /// Fit on snapshot t-1 (snapshot 0 at t = 0), a plain link predictor.
    kLinkPrediction,
};

/**
 * Logistic calibration of the common-neighbour count:
 * P(link | cn) = 1 / (1 + exp(-(intercept + slope * cn))), clipped to
 * [kPriorFloor, kPriorCeiling].
 */
struct PriorModel {
    PriorKind kind = PriorKind::kWorstCase;
    double intercept = 0.0;
    double slope = 0.0;
    /// Training data had positive / negative pairs. Without negatives every
    /// score sits at the ceiling; without positives, at the floor.
    bool has_positive = true;
    bool has_negative = true;

    double probability(std::size_t common) const;
};

inline constexpr double kPriorFloor = 0.01;
inline constexpr double kPriorCeiling = 0.99;

std::size_t common_neighbors(const Graph& g, VertexId u, VertexId v);

/// Weighted logistic fit over all vertex pairs of g, grouped by their
/// common-neighbour count. `held_out` is excluded from both classes.
PriorModel calibrate_prior(const Graph& g, PriorKind kind, std::optional<Edge> held_out = std::nullopt);

/// Calibrates `kind` for the query and scores it. Throws std::invalid_argument
/// if t is out of range or an endpoint is absent at t.
PriorModel fit_prior(const LinkQuery& query, PriorKind kind, const TemporalGraphSequence& seq);
double prior_probability(const LinkQuery& query, const PriorModel& model, const TemporalGraphSequence& seq);

// ------------------------------------------------------------ posterior ----

/// Local statistic of the queried pair that the likelihood surrogate matches.
enum class LinkFeature {
    /// Presence of (u, v) in each perturbed snapshot.
    kEdgePresence,
    /// Presence plus the perturbed degrees of u and v in each snapshot.
    kEdgeAndDegrees,
};

/// Feature vector of the query over snapshots 0..query.t of `perturbed`.
std::vector<std::int64_t> link_features(std::span<const Graph> perturbed, const LinkQuery& query,
                                        LinkFeature feature);

/// Snapshots 0..query.t of seq with (u, v) forced present or absent in every
/// snapshot where both endpoints exist.
TemporalGraphSequence hypothesis_world(const TemporalGraphSequence& seq, const LinkQuery& query, bool present);

struct PosteriorOptions {
    std::size_t samples = 1000;
    LinkFeature feature = LinkFeature::kEdgeAndDegrees;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::size_t bootstrap = 200;
};

struct PosteriorEstimate {
    double probability = 0.0;
    double standard_error = 0.0;
    double prior = 0.0;
    /// Add-one smoothed match frequencies under each hypothesis.
    double likelihood_present = 0.0;
    double likelihood_absent = 0.0;
    std::size_t samples = 0;
    /// Neither hypothesis ever reproduced the observation; the estimate falls
    /// back to the prior with standard error 0.5.
    bool degenerate = false;
};

/**
 * Monte Carlo Bayes update of `prior` given the observed perturbed sequence.
 *
 * Both hypothesis worlds are re-perturbed `samples` times with `mechanism`;
 * the likelihood of each is the add-one smoothed frequency with which a
 * re-perturbation reproduces the observed feature vector. The standard error
 * comes from a bootstrap over the re-perturbations.
 */
PosteriorEstimate posterior_probability(const LinkQuery& query, std::span<const Graph> observed,
                                        const TemporalGraphSequence& seq, double prior,
                                        const Mechanism& mechanism, const PosteriorOptions& options);

// ----------------------------------------------------- indistinguishability --

/// Binary entropy in bits, with H(0) = H(1) = 0.
double indistinguishability(double posterior);

struct EntropyPoint {
    std::size_t t = 0;
    double entropy = 0.0;
    double standard_error = 0.0;
};

struct EntropyOptions {
    std::size_t samples = 400;
    LinkFeature feature = LinkFeature::kEdgePresence;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::size_t bootstrap = 100;
};

/**
 * H(L | features of G'_0..G'_t) for every t <= query.t, with L ~ Bernoulli(prior).
 *
 * The joint law of (L, features) is estimated from re-perturbations of the
 * two hypothesis worlds. Every t uses the same draws, so each point
 * conditions on a refinement of the previous one and the series cannot
 * increase.
 */
std::vector<EntropyPoint> indistinguishability_series(const TemporalGraphSequence& seq, const LinkQuery& query,
                                                      double prior, const Mechanism& mechanism,
                                                      const EntropyOptions& options);

// ------------------------------------------------------- anti-aggregation --

/// ||P_t^k - P'_t||_TV. The graphs must have the same vertex set.
double anti_aggregation(const Graph& g_t, const Graph& g_prime_t, unsigned k);

/// Same against the union of perturbed[0..], over the common vertices.
RestrictedTv anti_aggregation_aggregated(std::span<const Graph> perturbed, const Graph& g_t, unsigned k);

struct BoundCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

/// Largest elementwise |a - b| over the union of supports; same vertex set required.
double max_abs_difference(const TransitionMatrix& a, const TransitionMatrix& b);

/**
 * Checks ||P^k - P'||_TV <= k ||P - p_hat||_TV, where P is the walk matrix of
 * g. p_hat must be a consistent estimate: max |p_hat^k - P'| <= tolerance,
 * otherwise std::invalid_argument.
 */
BoundCheck estimation_error_bound_check(const Graph& g, const TransitionMatrix& p_prime,
                                        const TransitionMatrix& p_hat, unsigned k, double tolerance = 1e-6);
BoundCheck estimation_error_bound_check(const Graph& g, const Graph& g_prime, const TransitionMatrix& p_hat,
                                        unsigned k, double tolerance = 1e-6);

}  // namespace linkmirage
