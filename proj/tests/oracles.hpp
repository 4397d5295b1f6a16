// Independent reference computations used by the unit and acceptance tests.
// Everything here works on small dense representations and shares no code
// with the library beyond the Graph container and the clustering it is given.
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "linkmirage/cluster.hpp"
#include "linkmirage/graph.hpp"
#include "linkmirage/random.hpp"
#include "linkmirage/transition.hpp"

namespace oracle {

using linkmirage::Edge;
using linkmirage::Graph;
using linkmirage::VertexId;
using Dense = std::vector<std::vector<double>>;

inline std::size_t pos(const Graph& g, VertexId v) {
    auto vs = g.vertices();
    return static_cast<std::size_t>(std::lower_bound(vs.begin(), vs.end(), v) - vs.begin());
}

/// Random-walk matrix in vertex-position coordinates; isolated vertices loop.
inline Dense transition(const Graph& g) {
    const std::size_t n = g.num_vertices();
    Dense p(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        const VertexId v = g.vertices()[i];
        if (g.degree(v) == 0) {
            p[i][i] = 1.0;
            continue;
        }
        for (VertexId w : g.neighbors(v)) {
            p[i][pos(g, w)] += 1.0 / static_cast<double>(g.degree(v));
        }
    }
    return p;
}

inline Dense multiply(const Dense& a, const Dense& b) {
    const std::size_t n = a.size();
    Dense c(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t j = 0; j < n; ++j) {
                c[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    return c;
}

inline Dense power(const Dense& p, unsigned l) {
    Dense out = p;
    for (unsigned i = 1; i < l; ++i) {
        out = multiply(out, p);
    }
    return out;
}

inline double tv(const Dense& a, const Dense& b) {
    double total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < a.size(); ++j) {
            row += std::fabs(a[i][j] - b[i][j]);
        }
        total += row / 2.0;
    }
    return a.empty() ? 0.0 : total / static_cast<double>(a.size());
}

inline Dense to_dense(const linkmirage::TransitionMatrix& m) {
    const std::size_t n = m.dimension();
    Dense d(n, std::vector<double>(n, 0.0));
    auto vs = m.vertices();
    for (std::size_t i = 0; i < n; ++i) {
        auto row = m.row_at(i);
        for (std::size_t k = 0; k < row.cols.size(); ++k) {
            const auto j = static_cast<std::size_t>(std::lower_bound(vs.begin(), vs.end(), row.cols[k]) - vs.begin());
            d[i][j] = row.probs[k];
        }
    }
    return d;
}

/// Newman modularity from the adjacency definition, labels by position.
inline double modularity(const Graph& g, const std::vector<int>& label) {
    const double two_m = 2.0 * static_cast<double>(g.num_edges());
    if (two_m == 0) {
        return 0.0;
    }
    double q = 0.0;
    auto vs = g.vertices();
    for (std::size_t i = 0; i < vs.size(); ++i) {
        for (std::size_t j = 0; j < vs.size(); ++j) {
            if (label[i] != label[j]) {
                continue;
            }
            const double a = g.has_edge(vs[i], vs[j]) ? 1.0 : 0.0;
            q += a - static_cast<double>(g.degree(vs[i])) * static_cast<double>(g.degree(vs[j])) / two_m;
        }
    }
    return q / two_m;
}

/// Calls f(labels) for every set partition of n items (restricted growth strings).
inline void for_each_partition(std::size_t n, const std::function<void(const std::vector<int>&)>& f) {
    std::vector<int> a(n, 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int used) {
        if (i == n) {
            f(a);
            return;
        }
        for (int c = 0; c <= used; ++c) {
            a[i] = c;
            rec(i + 1, std::max(used, c + 1));
        }
    };
    if (n == 0) {
        f(a);
        return;
    }
    a[0] = 0;
    rec(1, 1);
}

inline double best_modularity_exhaustive(const Graph& g) {
    double best = -1.0;
    for_each_partition(g.num_vertices(), [&](const std::vector<int>& l) { best = std::max(best, modularity(g, l)); });
    return best;
}

inline Eigen::MatrixXd eigen_transition(const Graph& g, bool lazy) {
    const Dense d = transition(g);
    const auto n = static_cast<Eigen::Index>(d.size());
    Eigen::MatrixXd p(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            p(i, j) = d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
    }
    if (lazy) {
        p = 0.5 * (p + Eigen::MatrixXd::Identity(n, n));
    }
    return p;
}

/// Second largest eigenvalue modulus from a full eigensolve of the
/// symmetrized walk matrix D^{1/2} P D^{-1/2}.
inline double slem(const Graph& g, bool lazy) {
    const Eigen::MatrixXd p = eigen_transition(g, lazy);
    const auto n = p.rows();
    Eigen::VectorXd s(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        s(i) = std::sqrt(static_cast<double>(g.degree(g.vertices()[static_cast<std::size_t>(i)])));
    }
    const Eigen::MatrixXd sym = s.asDiagonal() * p * s.cwiseInverse().asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (sym + sym.transpose()));
    std::vector<double> mods;
    for (Eigen::Index i = 0; i < n; ++i) {
        mods.push_back(std::fabs(es.eigenvalues()(i)));
    }
    std::sort(mods.rbegin(), mods.rend());
    return mods.size() > 1 ? mods[1] : 0.0;
}

/// Smallest r with max_i TV(P^r(i), pi) < eps, by brute-force dense powers.
inline std::size_t mixing_time(const Graph& g, double eps, bool lazy, std::size_t cap = 100000) {
    const Eigen::MatrixXd p = eigen_transition(g, lazy);
    const auto n = p.rows();
    Eigen::VectorXd pi(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        pi(i) = static_cast<double>(g.degree(g.vertices()[static_cast<std::size_t>(i)]));
    }
    pi /= pi.sum();
    Eigen::MatrixXd pr = p;
    for (std::size_t r = 1; r <= cap; ++r) {
        double worst = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            worst = std::max(worst, 0.5 * (pr.row(i).transpose() - pi).cwiseAbs().sum());
        }
        if (worst < eps) {
            return r;
        }
        pr = pr * p;
    }
    return cap + 1;
}

// ---------------------------------------------------------------------------
// Exact output distribution of one LinkMirage step at t = 0 on a tiny graph.
//
// Graph states are bitmasks over vertex pairs. Per community the swap
// rewiring is followed edge by edge in sorted order; an attempt succeeds with
// total probability s, so a given swap happens with probability
// s_swap * (1 + q + ... + q^R) where q = 1 - s and R is the retry budget.
// Inter-community pairs are independent Bernoulli draws.
// ---------------------------------------------------------------------------

class PairIndex {
public:
    explicit PairIndex(const Graph& g) : vs_(g.vertices().begin(), g.vertices().end()) {}
    std::size_t n() const { return vs_.size(); }
    std::uint64_t bit(VertexId a, VertexId b) const {
        std::size_t i = index(a), j = index(b);
        if (i > j) {
            std::swap(i, j);
        }
        return std::uint64_t{1} << (i * n() + j);
    }
    std::size_t index(VertexId v) const {
        return static_cast<std::size_t>(std::lower_bound(vs_.begin(), vs_.end(), v) - vs_.begin());
    }
    const std::vector<VertexId>& vertices() const { return vs_; }

private:
    std::vector<VertexId> vs_;
};

using MaskDist = std::map<std::uint64_t, double>;

inline std::vector<VertexId> state_neighbors(const PairIndex& idx, std::uint64_t mask, VertexId v) {
    std::vector<VertexId> out;
    for (VertexId w : idx.vertices()) {
        if (w != v && (mask & idx.bit(v, w))) {
            out.push_back(w);
        }
    }
    return out;
}

/// Distribution of a k-step walk's endpoint from `start` on g (isolated: stay).
inline std::map<VertexId, double> walk_distribution(const Graph& g, VertexId start, unsigned k) {
    std::map<VertexId, double> cur{{start, 1.0}};
    for (unsigned s = 0; s < k; ++s) {
        std::map<VertexId, double> next;
        for (auto [v, p] : cur) {
            if (g.degree(v) == 0) {
                next[v] += p;
                continue;
            }
            for (VertexId w : g.neighbors(v)) {
                next[w] += p / static_cast<double>(g.degree(v));
            }
        }
        cur = std::move(next);
    }
    return cur;
}

inline MaskDist community_distribution(const PairIndex& idx, const Graph& sub, unsigned k, unsigned retries) {
    std::uint64_t start = 0;
    const auto originals = sub.edges();
    for (const Edge& e : originals) {
        start |= idx.bit(e.u, e.v);
    }
    MaskDist dist{{start, 1.0}};
    for (const Edge& e : originals) {
        MaskDist next;
        for (auto [mask, p] : dist) {
            if (!(mask & idx.bit(e.u, e.v))) {
                next[mask] += p;
                continue;
            }
            for (int flip = 0; flip < 2; ++flip) {
                const VertexId origin = flip ? e.v : e.u;
                const VertexId other = flip ? e.u : e.v;
                std::map<std::uint64_t, double> success;
                double s = 0.0;
                for (auto [w, pw] : walk_distribution(sub, origin, k)) {
                    if (w == origin || w == other || (mask & idx.bit(origin, w))) {
                        continue;
                    }
                    const auto partners = state_neighbors(idx, mask, w);
                    for (VertexId x : partners) {
                        if (x == other || (mask & idx.bit(other, x))) {
                            continue;
                        }
                        const double px = pw / static_cast<double>(partners.size());
                        const std::uint64_t swapped =
                            (mask & ~idx.bit(origin, other) & ~idx.bit(w, x)) | idx.bit(origin, w) | idx.bit(other, x);
                        success[swapped] += px;
                        s += px;
                    }
                }
                const double q = 1.0 - s;
                const double stay = std::pow(q, static_cast<double>(retries + 1));
                const double factor = s > 0 ? (1.0 - stay) / s : 0.0;
                next[mask] += 0.5 * p * stay;
                for (auto [m2, ps] : success) {
                    next[m2] += 0.5 * p * ps * factor;
                }
            }
        }
        dist = std::move(next);
    }
    return dist;
}

inline MaskDist combine(const MaskDist& a, const MaskDist& b) {
    MaskDist out;
    for (auto [ma, pa] : a) {
        for (auto [mb, pb] : b) {
            out[ma | mb] += pa * pb;
        }
    }
    return out;
}

/// Exact distribution of the perturbed edge set of g under one step with walk
/// length k, given the clustering. Inter probabilities use da * db / |E_ab|.
inline MaskDist step_distribution(const Graph& g, const linkmirage::Clustering& c, unsigned k, unsigned retries) {
    const PairIndex idx(g);
    MaskDist dist{{0, 1.0}};
    for (std::size_t ci = 0; ci < c.num_communities(); ++ci) {
        const auto members = c.members(static_cast<linkmirage::CommunityId>(ci));
        std::vector<Edge> inside;
        for (const Edge& e : g.edges()) {
            if (std::binary_search(members.begin(), members.end(), e.u) &&
                std::binary_search(members.begin(), members.end(), e.v)) {
                inside.push_back(e);
            }
        }
        const Graph sub = Graph::from_edges({members.begin(), members.end()}, inside);
        dist = combine(dist, community_distribution(idx, sub, k, retries));
    }
    for (std::size_t a = 0; a < c.num_communities(); ++a) {
        for (std::size_t b = a + 1; b < c.num_communities(); ++b) {
            std::map<VertexId, double> da, db;
            double cross = 0.0;
            for (const Edge& e : g.edges()) {
                const auto cu = c.community_of(e.u), cv = c.community_of(e.v);
                if (cu == a && cv == b) {
                    ++da[e.u], ++db[e.v], ++cross;
                } else if (cu == b && cv == a) {
                    ++da[e.v], ++db[e.u], ++cross;
                }
            }
            for (auto [i, di] : da) {
                for (auto [j, dj] : db) {
                    const double p = std::min(1.0, di * dj / cross);
                    MaskDist bern{{0, 1.0 - p}, {idx.bit(i, j), p}};
                    dist = combine(dist, bern);
                }
            }
        }
    }
    return dist;
}

/// Feature vector (presence of u-v, deg u, deg v) for an output mask.
inline std::vector<std::int64_t> mask_features(const PairIndex& idx, std::uint64_t mask, VertexId u, VertexId v,
                                               bool with_degrees) {
    std::vector<std::int64_t> f{(mask & idx.bit(u, v)) ? 1 : 0};
    if (with_degrees) {
        f.push_back(static_cast<std::int64_t>(state_neighbors(idx, mask, u).size()));
        f.push_back(static_cast<std::int64_t>(state_neighbors(idx, mask, v).size()));
    }
    return f;
}

inline double feature_probability(const Graph& g, const MaskDist& dist, VertexId u, VertexId v,
                                  const std::vector<std::int64_t>& target, bool with_degrees) {
    const PairIndex idx(g);
    double p = 0.0;
    for (auto [mask, pm] : dist) {
        if (mask_features(idx, mask, u, v, with_degrees) == target) {
            p += pm;
        }
    }
    return p;
}

}  // namespace oracle
