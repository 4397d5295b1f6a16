#include "linkmirage/utility.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <stdexcept>

#include "linkmirage/parallel.hpp"
#include "linkmirage/random.hpp"

namespace linkmirage {

namespace {

void require_same_vertices(const Graph& a, const Graph& b) {
    if (!std::ranges::equal(a.vertices(), b.vertices())) {
        throw DimensionError("original and perturbed snapshot have different vertex sets");
    }
}

double l_step_distance(const Graph& g, const Graph& g_prime, unsigned l) {
    require_same_vertices(g, g_prime);
    return tv_distance(matrix_power(transition_matrix(g), l), matrix_power(transition_matrix(g_prime), l));
}

}  // namespace

UtilityReport utility_distance(const TemporalGraphSequence& seq, std::span<const Graph> perturbed, unsigned l,
                               unsigned threads) {
    if (l == 0) {
        throw std::invalid_argument("utility distance needs l >= 1");
    }
    if (seq.size() != perturbed.size() || seq.size() == 0) {
        throw DimensionError("original and perturbed sequences are misaligned");
    }
    UtilityReport report;
    report.l = l;
    report.per_t.assign(seq.size(), 0.0);
    parallel_for(seq.size(), threads, [&](std::size_t t) {
        report.per_t[t] = l_step_distance(seq[t], perturbed[t], l);
    });
    report.aggregate = std::accumulate(report.per_t.begin(), report.per_t.end(), 0.0) /
                       static_cast<double>(report.per_t.size());
    return report;
}

double ratio_cut(const Graph& g, const Clustering& c) {
    if (g.num_vertices() == 0) {
        return 0.0;
    }
    std::size_t cut = 0;
    for (const Edge& e : g.edges()) {
        if (c.community_of(e.u) != c.community_of(e.v)) {
            ++cut;
        }
    }
    return static_cast<double>(cut) / static_cast<double>(g.num_vertices());
}

double ud_upper_bound(double epsilon, std::span<const double> deltas, unsigned l) {
    if (epsilon < 0) {
        throw std::invalid_argument("epsilon must be nonnegative");
    }
    if (deltas.empty()) {
        return 0.0;
    }
    double sum = 0.0;
    for (double d : deltas) {
        if (d < 0) {
            throw std::invalid_argument("ratio cuts must be nonnegative");
        }
        sum += 2.0 * l * (epsilon + d);
    }
    return sum / static_cast<double>(deltas.size());
}

std::vector<double> community_distances(const Graph& g, const Graph& g_prime, const Clustering& c) {
    require_same_vertices(g, g_prime);
    const TransitionMatrix p = transition_matrix(g);
    const TransitionMatrix q = transition_matrix(g_prime);
    std::vector<double> out(c.num_communities(), 0.0);
    for (CommunityId k = 0; k < c.num_communities(); ++k) {
        const auto members = c.members(k);
        double sum = 0.0;
        for (VertexId v : members) {
            sum += row_tv(p.row(v), q.row(v));
        }
        out[k] = sum / static_cast<double>(members.size());
    }
    return out;
}

UtilityReport utility_bound_report(const TemporalGraphSequence& seq, std::span<const Graph> perturbed,
                                   std::span<const Clustering> clusterings, unsigned l) {
    if (clusterings.size() != seq.size()) {
        throw DimensionError("one clustering per snapshot is required");
    }
    UtilityReport report = utility_distance(seq, perturbed, l);
    for (std::size_t t = 0; t < seq.size(); ++t) {
        report.deltas.push_back(ratio_cut(seq[t], clusterings[t]));
        for (double d : community_distances(seq[t], perturbed[t], clusterings[t])) {
            report.epsilon = std::max(report.epsilon, d);
        }
    }
    report.bound = ud_upper_bound(report.epsilon, report.deltas, l);
    return report;
}

std::vector<DegreeStat> expected_degree_report(const Graph& g, const PerturbParams& params, std::size_t trials,
                                               std::uint64_t seed) {
    if (trials < 2) {
        throw std::invalid_argument("degree report needs at least two trials");
    }
    const StepPlan plan = plan_step(g, nullptr, nullptr, params);
    return degree_statistics(g, trials, [&](std::size_t i) {
        return realize_step(g, plan, nullptr, params, 0, derive_seed(seed, {0xde9, i})).assemble(g.vertices());
    });
}

std::vector<double> pagerank(const Graph& g, double damping, double tol) {
    if (!(damping > 0.0 && damping < 1.0)) {
        throw std::invalid_argument("damping must lie in (0, 1)");
    }
    const std::size_t n = g.num_vertices();
    if (n == 0) {
        return {};
    }
    const auto vs = g.vertices();
    const double inv_n = 1.0 / static_cast<double>(n);
    std::vector<double> x(n, inv_n), next(n);
    for (int iter = 0; iter < 10000; ++iter) {
        double dangling = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (g.degree(vs[i]) == 0) {
                dangling += x[i];
            }
        }
        const double base = (1.0 - damping) * inv_n + damping * dangling * inv_n;
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (VertexId w : g.neighbors(vs[i])) {
                const std::size_t j = g.index_of(w);
                s += x[j] / static_cast<double>(g.degree(w));
            }
            next[i] = base + damping * s;
        }
        double diff = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            diff += std::fabs(next[i] - x[i]);
        }
        x.swap(next);
        if (diff < tol) {
            return x;
        }
    }
    throw std::runtime_error("pagerank did not converge in 10000 iterations");
}

StructuralMetrics structural_metrics(const Graph& g) {
    StructuralMetrics out;
    double triangles = 0.0;  // each counted once per vertex of the triangle
    double triples = 0.0;
    for (VertexId v : g.vertices()) {
        auto nb = g.neighbors(v);
        const double d = static_cast<double>(nb.size());
        triples += d * (d - 1) / 2;
        for (std::size_t i = 0; i < nb.size(); ++i) {
            for (std::size_t j = i + 1; j < nb.size(); ++j) {
                if (g.has_edge(nb[i], nb[j])) {
                    triangles += 1.0;
                }
            }
        }
    }
    // triangles already equals 3 * (number of triangles).
    out.clustering_coefficient = triples > 0 ? triangles / triples : 0.0;

    const auto edges = g.edges();
    if (edges.size() < 2) {
        out.assortativity_degenerate = true;
        return out;
    }
    double sxy = 0.0, sx = 0.0, sxx = 0.0;
    for (const Edge& e : edges) {
        const double a = static_cast<double>(g.degree(e.u));
        const double b = static_cast<double>(g.degree(e.v));
        sxy += a * b;
        sx += (a + b) / 2;
        sxx += (a * a + b * b) / 2;
    }
    const double m = static_cast<double>(edges.size());
    const double mean = sx / m;
    const double num = sxy / m - mean * mean;
    const double den = sxx / m - mean * mean;
    if (den <= 1e-12 * std::max(1.0, sxx / m)) {
        out.assortativity_degenerate = true;
        return out;
    }
    out.assortativity = num / den;
    return out;
}

bool is_connected(const Graph& g) {
    const auto vs = g.vertices();
    if (vs.empty()) {
        return true;
    }
    std::vector<char> seen(vs.size(), 0);
    std::queue<VertexId> q;
    q.push(vs[0]);
    seen[0] = 1;
    std::size_t count = 1;
    while (!q.empty()) {
        const VertexId v = q.front();
        q.pop();
        for (VertexId w : g.neighbors(v)) {
            const std::size_t j = g.index_of(w);
            if (!seen[j]) {
                seen[j] = 1;
                ++count;
                q.push(w);
            }
        }
    }
    return count == vs.size();
}

bool is_bipartite(const Graph& g) {
    const auto vs = g.vertices();
    std::vector<int> side(vs.size(), -1);
    for (std::size_t s = 0; s < vs.size(); ++s) {
        if (side[s] >= 0) {
            continue;
        }
        side[s] = 0;
        std::queue<VertexId> q;
        q.push(vs[s]);
        while (!q.empty()) {
            const VertexId v = q.front();
            q.pop();
            const int sv = side[g.index_of(v)];
            for (VertexId w : g.neighbors(v)) {
                int& sw = side[g.index_of(w)];
                if (sw < 0) {
                    sw = 1 - sv;
                    q.push(w);
                } else if (sw == sv) {
                    return false;
                }
            }
        }
    }
    return true;
}

double slem(const Graph& g, bool lazy) {
    if (g.num_edges() == 0) {
        throw std::invalid_argument("SLEM needs a graph with edges");
    }
    if (!is_connected(g)) {
        return 1.0;  // eigenvalue 1 is repeated
    }
    const auto vs = g.vertices();
    const std::size_t n = vs.size();
    const double two_m = 2.0 * static_cast<double>(g.num_edges());
    std::vector<double> phi(n), inv_sqrt_deg(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = static_cast<double>(g.degree(vs[i]));
        phi[i] = std::sqrt(d / two_m);
        inv_sqrt_deg[i] = 1.0 / std::sqrt(d);
    }
    // Power iteration on D^{1/2} P D^{-1/2}, which is symmetric, with the
    // top eigenvector sqrt(pi) projected out after every product.
    auto deflate = [&](std::vector<double>& x) {
        double dot = 0.0;
        for (std::size_t i = 0; i < n; ++i) dot += x[i] * phi[i];
        for (std::size_t i = 0; i < n; ++i) x[i] -= dot * phi[i];
    };
    auto norm = [](const std::vector<double>& x) {
        double s = 0.0;
        for (double v : x) s += v * v;
        return std::sqrt(s);
    };
    Rng rng = make_stream(0x51e3);
    std::vector<double> x(n), y(n);
    for (double& v : x) v = uniform01(rng) - 0.5;
    deflate(x);
    double nx = norm(x);
    if (nx == 0.0) {
        return 0.0;
    }
    for (double& v : x) v /= nx;
    double mu = 0.0;
    for (int iter = 0; iter < 200000; ++iter) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (VertexId w : g.neighbors(vs[i])) {
                const std::size_t j = g.index_of(w);
                s += x[j] * inv_sqrt_deg[j];
            }
            s *= inv_sqrt_deg[i];
            y[i] = lazy ? 0.5 * (x[i] + s) : s;
        }
        deflate(y);
        const double ny = norm(y);
        if (ny == 0.0) {
            return 0.0;
        }
        for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / ny;
        if (std::fabs(ny - mu) < 1e-14 && iter > 10) {
            mu = ny;
            break;
        }
        mu = ny;
    }
    return std::min(mu, 1.0);
}

std::optional<std::size_t> mixing_time(const Graph& g, double epsilon, const SpectralOptions& options) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw std::invalid_argument("mixing time needs epsilon in (0, 1)");
    }
    if (g.num_edges() == 0 || !is_connected(g)) {
        return std::nullopt;
    }
    if (!options.lazy && is_bipartite(g)) {
        return std::nullopt;  // periodic chain, rows never settle
    }
    const auto vs = g.vertices();
    const std::size_t n = vs.size();
    const double two_m = 2.0 * static_cast<double>(g.num_edges());
    std::vector<double> pi(n);
    for (std::size_t i = 0; i < n; ++i) {
        pi[i] = static_cast<double>(g.degree(vs[i])) / two_m;
    }
    std::vector<double> rows(n * n, 0.0), next(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        rows[i * n + i] = 1.0;
    }
    for (std::size_t r = 1; r <= options.max_steps; ++r) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            auto nb = g.neighbors(vs[j]);
            const double share = 1.0 / static_cast<double>(nb.size());
            for (VertexId w : nb) {
                const std::size_t c = g.index_of(w);
                for (std::size_t i = 0; i < n; ++i) {
                    next[i * n + c] += rows[i * n + j] * share;
                }
            }
        }
        if (options.lazy) {
            for (std::size_t k = 0; k < n * n; ++k) {
                next[k] = 0.5 * (next[k] + rows[k]);
            }
        }
        rows.swap(next);
        double worst = 0.0;
        for (std::size_t i = 0; i < n && worst < epsilon; ++i) {
            double tv = 0.0;
            for (std::size_t c = 0; c < n; ++c) {
                tv += std::fabs(rows[i * n + c] - pi[c]);
            }
            worst = std::max(worst, tv / 2);
        }
        if (worst < epsilon) {
            return r;
        }
    }
    return std::nullopt;
}

SpectralMetrics spectral_metrics(const Graph& g, double epsilon, const SpectralOptions& options) {
    return {slem(g, options.lazy), mixing_time(g, epsilon, options)};
}

MixingBoundCheck mixing_bound_check(const Graph& g, const Graph& g_prime, double epsilon,
                                    const SpectralOptions& options) {
    require_same_vertices(g, g_prime);
    MixingBoundCheck out;
    const auto tau = mixing_time(g, epsilon, options);
    if (!tau) {
        throw std::invalid_argument("original graph does not mix within the step cap");
    }
    out.tau = *tau;
    out.ud_at_tau = l_step_distance(g, g_prime, static_cast<unsigned>(out.tau));
    out.shifted_epsilon = out.ud_at_tau - epsilon;
    if (out.shifted_epsilon <= 0.0) {
        out.vacuous = true;
        return out;
    }
    out.tau_prime = mixing_time(g_prime, out.shifted_epsilon, options);
    // A chain that never mixes satisfies the lower bound trivially.
    out.mixing_holds = !out.tau_prime || *out.tau_prime >= out.tau;
    const double n = static_cast<double>(g.num_vertices());
    out.slem_prime = slem(g_prime, options.lazy);
    out.slem_lower_bound = 1.0 - (std::log(n) + std::log(1.0 / out.shifted_epsilon)) / static_cast<double>(out.tau);
    out.slem_holds = out.slem_prime >= out.slem_lower_bound - 1e-12;
    return out;
}

}  // namespace linkmirage
