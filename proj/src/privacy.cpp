#include "linkmirage/privacy.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "linkmirage/parallel.hpp"
#include "linkmirage/random.hpp"

namespace linkmirage {

namespace {

double logistic(double x) {
    return x >= 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

void require_query(const LinkQuery& q, const TemporalGraphSequence& seq) {
    if (q.t >= seq.size()) {
        throw std::invalid_argument("query time " + std::to_string(q.t) + " outside the sequence");
    }
    if (q.u == q.v) {
        throw std::invalid_argument("query endpoints must differ");
    }
    const Graph& g = seq[q.t];
    if (!g.contains(q.u) || !g.contains(q.v)) {
        throw std::invalid_argument("query vertex absent at t = " + std::to_string(q.t));
    }
}

Graph without_edge(const Graph& g, const Edge& e) {
    auto edges = g.edges();
    edges.erase(std::remove(edges.begin(), edges.end(), e), edges.end());
    auto vs = g.vertices();
    return Graph::from_edges({vs.begin(), vs.end()}, std::move(edges));
}

const Graph& reference_snapshot(const LinkQuery& q, PriorKind kind, const TemporalGraphSequence& seq) {
    return kind == PriorKind::kLinkPrediction && q.t > 0 ? seq[q.t - 1] : seq[q.t];
}

}  // namespace

double PriorModel::probability(std::size_t common) const {
    if (!has_negative) {
        return kPriorCeiling;
    }
    if (!has_positive) {
        return kPriorFloor;
    }
    const double p = logistic(intercept + slope * static_cast<double>(common));
    return std::clamp(p, kPriorFloor, kPriorCeiling);
}

std::size_t common_neighbors(const Graph& g, VertexId u, VertexId v) {
    auto a = g.neighbors(u);
    auto b = g.neighbors(v);
    std::size_t n = 0;
    for (std::size_t i = 0, j = 0; i < a.size() && j < b.size();) {
        if (a[i] < b[j]) {
            ++i;
        } else if (b[j] < a[i]) {
            ++j;
        } else {
            ++n;
            ++i;
            ++j;
        }
    }
    return n;
}

PriorModel calibrate_prior(const Graph& g, PriorKind kind, std::optional<Edge> held_out) {
    // Count pairs sharing at least one neighbour through wedges; every other
    // pair has score 0.
    std::unordered_map<std::uint64_t, std::uint32_t> shared;
    for (VertexId w : g.vertices()) {
        auto nb = g.neighbors(w);
        for (std::size_t i = 0; i < nb.size(); ++i) {
            for (std::size_t j = i + 1; j < nb.size(); ++j) {
                ++shared[edge_key(Edge(nb[i], nb[j]))];
            }
        }
    }
    std::vector<double> pos(1, 0.0), neg(1, 0.0);
    auto bump = [](std::vector<double>& xs, std::size_t c, double w) {
        if (xs.size() <= c) {
            xs.resize(c + 1, 0.0);
        }
        xs[c] += w;
    };
    const double n = static_cast<double>(g.num_vertices());
    double nonedges_scored = 0.0;
    for (auto [key, c] : shared) {
        const Edge e(static_cast<VertexId>(key >> 32), static_cast<VertexId>(key & 0xffffffffu));
        if (held_out && e == *held_out) {
            continue;
        }
        if (g.has_edge(e.u, e.v)) {
            continue;
        }
        bump(neg, c, 1.0);
        nonedges_scored += 1.0;
    }
    for (const Edge& e : g.edges()) {
        if (held_out && e == *held_out) {
            continue;
        }
        auto it = shared.find(edge_key(e));
        bump(pos, it == shared.end() ? 0 : it->second, 1.0);
    }
    double zero_neg = n * (n - 1) / 2 - static_cast<double>(g.num_edges()) - nonedges_scored;
    if (held_out && !g.has_edge(held_out->u, held_out->v) && !shared.contains(edge_key(*held_out))) {
        zero_neg -= 1.0;
    }
    neg[0] += std::max(0.0, zero_neg);

    PriorModel model;
    model.kind = kind;
    double total_pos = 0.0, total_neg = 0.0;
    for (double x : pos) total_pos += x;
    for (double x : neg) total_neg += x;
    model.has_positive = total_pos > 0;
    model.has_negative = total_neg > 0;
    if (!model.has_positive || !model.has_negative) {
        return model;
    }
    const std::size_t levels = std::max(pos.size(), neg.size());
    pos.resize(levels, 0.0);
    neg.resize(levels, 0.0);

    // Newton-Raphson (IRLS) on the grouped binomial likelihood. A tiny ridge
    // on the slope keeps perfectly separable data finite; the clip does the rest.
    constexpr double kRidge = 1e-6;
    double b0 = std::log(total_pos / total_neg);
    double b1 = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
        double g0 = 0, g1 = -kRidge * b1, h00 = 0, h01 = 0, h11 = kRidge;
        for (std::size_t c = 0; c < levels; ++c) {
            const double w = pos[c] + neg[c];
            if (w == 0) {
                continue;
            }
            const double x = static_cast<double>(c);
            const double p = logistic(b0 + b1 * x);
            const double r = pos[c] - w * p;
            const double s = w * p * (1 - p);
            g0 += r;
            g1 += r * x;
            h00 += s;
            h01 += s * x;
            h11 += s * x * x;
        }
        const double det = h00 * h11 - h01 * h01;
        if (!(std::fabs(det) > 1e-300)) {
            break;
        }
        const double d0 = (h11 * g0 - h01 * g1) / det;
        const double d1 = (h00 * g1 - h01 * g0) / det;
        b0 += d0;
        b1 += d1;
        if (std::fabs(d0) + std::fabs(d1) < 1e-10) {
            break;
        }
    }
    model.intercept = b0;
    model.slope = b1;
    return model;
}

PriorModel fit_prior(const LinkQuery& query, PriorKind kind, const TemporalGraphSequence& seq) {
    require_query(query, seq);
    const Edge pair(query.u, query.v);
    const Graph& ref = reference_snapshot(query, kind, seq);
    if (kind == PriorKind::kWorstCase) {
        return calibrate_prior(ref, kind, pair);
    }
    // The predictor for t trains on t-1, where the pair is ordinary data;
    // at t = 0 there is no history, so the pair is held out as above.
    return calibrate_prior(ref, kind, query.t == 0 ? std::optional<Edge>(pair) : std::nullopt);
}

double prior_probability(const LinkQuery& query, const PriorModel& model, const TemporalGraphSequence& seq) {
    require_query(query, seq);
    const Graph& g = seq[query.t];
    // Removing (u, v) cannot change its own common-neighbour count.
    return model.probability(common_neighbors(g, query.u, query.v));
}

std::vector<std::int64_t> link_features(std::span<const Graph> perturbed, const LinkQuery& query,
                                        LinkFeature feature) {
    if (perturbed.size() <= query.t) {
        throw std::invalid_argument("perturbed sequence shorter than query time");
    }
    std::vector<std::int64_t> out;
    out.reserve((query.t + 1) * (feature == LinkFeature::kEdgePresence ? 1 : 3));
    for (std::size_t i = 0; i <= query.t; ++i) {
        const Graph& g = perturbed[i];
        out.push_back(g.has_edge(query.u, query.v) ? 1 : 0);
        if (feature == LinkFeature::kEdgeAndDegrees) {
            out.push_back(g.contains(query.u) ? static_cast<std::int64_t>(g.degree(query.u)) : -1);
            out.push_back(g.contains(query.v) ? static_cast<std::int64_t>(g.degree(query.v)) : -1);
        }
    }
    return out;
}

TemporalGraphSequence hypothesis_world(const TemporalGraphSequence& seq, const LinkQuery& query, bool present) {
    require_query(query, seq);
    TemporalGraphSequence world;
    world.raw_ids = seq.raw_ids;
    const Edge pair(query.u, query.v);
    for (std::size_t i = 0; i <= query.t; ++i) {
        const Graph& g = seq[i];
        world.labels.push_back(i < seq.labels.size() ? seq.labels[i] : std::to_string(i));
        if (!g.contains(query.u) || !g.contains(query.v) || g.has_edge(query.u, query.v) == present) {
            world.snapshots.push_back(g);
        } else if (present) {
            auto edges = g.edges();
            edges.push_back(pair);
            auto vs = g.vertices();
            world.snapshots.push_back(Graph::from_edges({vs.begin(), vs.end()}, std::move(edges)));
        } else {
            world.snapshots.push_back(without_edge(g, pair));
        }
    }
    return world;
}

namespace {

/// Feature vectors of `samples` draws of `mechanism` on one hypothesis world.
std::vector<std::vector<std::int64_t>> draw_features(const TemporalGraphSequence& world, const LinkQuery& query,
                                                     const Mechanism& mechanism, LinkFeature feature,
                                                     std::size_t samples, std::uint64_t seed,
                                                     std::uint64_t hypothesis, unsigned threads) {
    const Sampler sampler = mechanism.bind(world);
    std::vector<std::vector<std::int64_t>> out(samples);
    parallel_for(samples, threads, [&](std::size_t i) {
        const auto perturbed = sampler(derive_seed(seed, {hypothesis, i}));
        out[i] = link_features(perturbed, query, feature);
    });
    return out;
}

double bayes(double prior, double l1, double l0) {
    if (l1 == l0) {
        return prior;
    }
    const double num = prior * l1;
    return num / (num + (1 - prior) * l0);
}

/// Number of successes in n draws with replacement from a 0/1 population
/// holding c successes.
std::size_t resample_count(std::size_t c, std::size_t n, Rng& rng) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < n; ++i) {
        hits += uniform_index(rng, n) < c ? 1 : 0;
    }
    return hits;
}

}  // namespace

PosteriorEstimate posterior_probability(const LinkQuery& query, std::span<const Graph> observed,
                                        const TemporalGraphSequence& seq, double prior,
                                        const Mechanism& mechanism, const PosteriorOptions& options) {
    require_query(query, seq);
    if (options.samples == 0) {
        throw std::invalid_argument("posterior needs at least one sample per hypothesis");
    }
    if (!(prior >= 0.0 && prior <= 1.0)) {
        throw std::invalid_argument("prior must lie in [0, 1]");
    }
    const auto target = link_features(observed, query, options.feature);
    std::size_t counts[2] = {0, 0};
    for (int h = 0; h < 2; ++h) {
        const auto world = hypothesis_world(seq, query, h == 1);
        const auto feats = draw_features(world, query, mechanism, options.feature, options.samples, options.seed,
                                         static_cast<std::uint64_t>(h), options.threads);
        counts[h] = static_cast<std::size_t>(std::count(feats.begin(), feats.end(), target));
    }
    const std::size_t n = options.samples;
    auto smooth = [n](std::size_t c) { return (static_cast<double>(c) + 1.0) / (static_cast<double>(n) + 2.0); };

    PosteriorEstimate est;
    est.prior = prior;
    est.samples = n;
    est.likelihood_present = smooth(counts[1]);
    est.likelihood_absent = smooth(counts[0]);
    est.probability = bayes(prior, est.likelihood_present, est.likelihood_absent);
    if (counts[0] == 0 && counts[1] == 0) {
        est.degenerate = true;
        est.standard_error = 0.5;
        return est;
    }
    if (options.bootstrap > 1) {
        Rng rng = make_stream(options.seed, {0xb007, query.t, query.u, query.v});
        double sum = 0.0, sum2 = 0.0;
        for (std::size_t b = 0; b < options.bootstrap; ++b) {
            const double p = bayes(prior, smooth(resample_count(counts[1], n, rng)),
                                   smooth(resample_count(counts[0], n, rng)));
            sum += p;
            sum2 += p * p;
        }
        const double B = static_cast<double>(options.bootstrap);
        const double mean = sum / B;
        est.standard_error = std::sqrt(std::max(0.0, (sum2 - B * mean * mean) / (B - 1)));
    }
    return est;
}

double indistinguishability(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("probability outside [0, 1]");
    }
    if (p == 0.0 || p == 1.0) {
        return 0.0;
    }
    return -p * std::log2(p) - (1 - p) * std::log2(1 - p);
}

namespace {

using FeatureSet = std::vector<std::vector<std::int64_t>>;

/// H(L | prefix of length `width`) from the two empirical feature samples,
/// restricted to the sample indices in idx1 / idx0.
double conditional_entropy(const FeatureSet& present, const FeatureSet& absent, std::span<const std::size_t> idx1,
                           std::span<const std::size_t> idx0, std::size_t width, double prior) {
    std::map<std::vector<std::int64_t>, std::pair<double, double>> cells;
    auto prefix = [width](const std::vector<std::int64_t>& f) {
        return std::vector<std::int64_t>(f.begin(), f.begin() + static_cast<std::ptrdiff_t>(width));
    };
    for (std::size_t i : idx1) {
        cells[prefix(present[i])].first += 1.0;
    }
    for (std::size_t i : idx0) {
        cells[prefix(absent[i])].second += 1.0;
    }
    const double n1 = static_cast<double>(idx1.size());
    const double n0 = static_cast<double>(idx0.size());
    double h = 0.0;
    for (const auto& [key, c] : cells) {
        const double a = prior * c.first / n1;
        const double b = (1 - prior) * c.second / n0;
        h += (a + b) * indistinguishability(a / (a + b));
    }
    return h;
}

}  // namespace

std::vector<EntropyPoint> indistinguishability_series(const TemporalGraphSequence& seq, const LinkQuery& query,
                                                      double prior, const Mechanism& mechanism,
                                                      const EntropyOptions& options) {
    require_query(query, seq);
    if (options.samples == 0) {
        throw std::invalid_argument("entropy series needs at least one sample per hypothesis");
    }
    FeatureSet feats[2];
    for (int h = 0; h < 2; ++h) {
        const auto world = hypothesis_world(seq, query, h == 1);
        feats[h] = draw_features(world, query, mechanism, options.feature, options.samples, options.seed,
                                 static_cast<std::uint64_t>(h), options.threads);
    }
    const std::size_t per_step = options.feature == LinkFeature::kEdgePresence ? 1 : 3;
    const std::size_t n = options.samples;
    std::vector<std::size_t> identity(n);
    for (std::size_t i = 0; i < n; ++i) {
        identity[i] = i;
    }
    std::vector<EntropyPoint> out;
    for (std::size_t t = 0; t <= query.t; ++t) {
        const std::size_t width = (t + 1) * per_step;
        EntropyPoint point;
        point.t = t;
        point.entropy = conditional_entropy(feats[1], feats[0], identity, identity, width, prior);
        if (options.bootstrap > 1) {
            Rng rng = make_stream(options.seed, {0xe47, t});
            std::vector<std::size_t> i1(n), i0(n);
            double sum = 0.0, sum2 = 0.0;
            for (std::size_t b = 0; b < options.bootstrap; ++b) {
                for (std::size_t i = 0; i < n; ++i) {
                    i1[i] = uniform_index(rng, n);
                    i0[i] = uniform_index(rng, n);
                }
                const double h = conditional_entropy(feats[1], feats[0], i1, i0, width, prior);
                sum += h;
                sum2 += h * h;
            }
            const double B = static_cast<double>(options.bootstrap);
            const double mean = sum / B;
            point.standard_error = std::sqrt(std::max(0.0, (sum2 - B * mean * mean) / (B - 1)));
        }
        out.push_back(point);
    }
    return out;
}

double anti_aggregation(const Graph& g_t, const Graph& g_prime_t, unsigned k) {
    if (!std::ranges::equal(g_t.vertices(), g_prime_t.vertices())) {
        throw DimensionError("anti-aggregation needs identical vertex sets");
    }
    return tv_distance(matrix_power(transition_matrix(g_t), k), transition_matrix(g_prime_t));
}

RestrictedTv anti_aggregation_aggregated(std::span<const Graph> perturbed, const Graph& g_t, unsigned k) {
    if (perturbed.empty()) {
        throw std::invalid_argument("aggregation needs at least one perturbed graph");
    }
    const Graph merged = union_graph(perturbed);
    return tv_distance_common(matrix_power(transition_matrix(g_t), k), transition_matrix(merged));
}

double max_abs_difference(const TransitionMatrix& a, const TransitionMatrix& b) {
    if (!std::ranges::equal(a.vertices(), b.vertices())) {
        throw DimensionError("matrices have different vertex sets");
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < a.dimension(); ++i) {
        auto ra = a.row_at(i);
        auto rb = b.row_at(i);
        std::size_t x = 0, y = 0;
        while (x < ra.cols.size() || y < rb.cols.size()) {
            if (y == rb.cols.size() || (x < ra.cols.size() && ra.cols[x] < rb.cols[y])) {
                worst = std::max(worst, std::fabs(ra.probs[x++]));
            } else if (x == ra.cols.size() || rb.cols[y] < ra.cols[x]) {
                worst = std::max(worst, std::fabs(rb.probs[y++]));
            } else {
                worst = std::max(worst, std::fabs(ra.probs[x++] - rb.probs[y++]));
            }
        }
    }
    return worst;
}

BoundCheck estimation_error_bound_check(const Graph& g, const TransitionMatrix& p_prime,
                                        const TransitionMatrix& p_hat, unsigned k, double tolerance) {
    if (k == 0) {
        throw std::invalid_argument("k must be >= 1");
    }
    if (max_abs_difference(matrix_power(p_hat, k), p_prime) > tolerance) {
        throw std::invalid_argument("estimate is inconsistent with the perturbed matrix (p_hat^k != P')");
    }
    const TransitionMatrix p = transition_matrix(g);
    BoundCheck out;
    out.lhs = tv_distance(matrix_power(p, k), p_prime);
    out.rhs = static_cast<double>(k) * tv_distance(p, p_hat);
    out.holds = out.lhs <= out.rhs + 1e-9;
    return out;
}

BoundCheck estimation_error_bound_check(const Graph& g, const Graph& g_prime, const TransitionMatrix& p_hat,
                                        unsigned k, double tolerance) {
    return estimation_error_bound_check(g, transition_matrix(g_prime), p_hat, k, tolerance);
}

}  // namespace linkmirage
