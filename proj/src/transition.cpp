#include "linkmirage/transition.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace linkmirage {

TransitionMatrix TransitionMatrix::from_rows(
    std::vector<VertexId> vertices, const std::vector<std::vector<std::pair<VertexId, double>>>& rows) {
    if (vertices.size() != rows.size()) {
        throw DimensionError("row count does not match vertex count");
    }
    TransitionMatrix m;
    m.vertices_ = std::move(vertices);
    const std::size_t bound = m.vertices_.empty() ? 0 : std::size_t{m.vertices_.back()} + 1;
    m.local_.assign(bound, -1);
    for (std::size_t i = 0; i < m.vertices_.size(); ++i) {
        m.local_[m.vertices_[i]] = static_cast<std::int32_t>(i);
    }
    m.offsets_.assign(1, 0);
    for (const auto& r : rows) {
        for (auto [c, p] : r) {
            m.cols_.push_back(c);
            m.probs_.push_back(p);
        }
        m.offsets_.push_back(m.cols_.size());
    }
    return m;
}

double TransitionMatrix::at(VertexId r, VertexId c) const {
    if (!contains(r)) {
        return 0.0;
    }
    Row row_r = row(r);
    auto it = std::lower_bound(row_r.cols.begin(), row_r.cols.end(), c);
    if (it == row_r.cols.end() || *it != c) {
        return 0.0;
    }
    return row_r.probs[static_cast<std::size_t>(it - row_r.cols.begin())];
}

TransitionMatrix transition_matrix(const Graph& g) {
    std::vector<std::vector<std::pair<VertexId, double>>> rows(g.num_vertices());
    auto vs = g.vertices();
    for (std::size_t i = 0; i < vs.size(); ++i) {
        auto nb = g.neighbors(vs[i]);
        if (nb.empty()) {
            rows[i].emplace_back(vs[i], 1.0);
            continue;
        }
        const double p = 1.0 / static_cast<double>(nb.size());
        rows[i].reserve(nb.size());
        for (VertexId w : nb) {
            rows[i].emplace_back(w, p);
        }
    }
    return TransitionMatrix::from_rows({vs.begin(), vs.end()}, rows);
}

TransitionMatrix multiply(const TransitionMatrix& a, const TransitionMatrix& b) {
    if (!std::equal(a.vertices().begin(), a.vertices().end(), b.vertices().begin(), b.vertices().end())) {
        throw DimensionError("matrix product over different vertex sets");
    }
    auto vs = a.vertices();
    const std::size_t bound = vs.empty() ? 0 : std::size_t{vs.back()} + 1;
    std::vector<double> acc(bound, 0.0);
    std::vector<char> seen(bound, 0);
    std::vector<VertexId> touched;
    std::vector<std::vector<std::pair<VertexId, double>>> rows(vs.size());
    for (std::size_t i = 0; i < vs.size(); ++i) {
        auto ra = a.row_at(i);
        for (std::size_t x = 0; x < ra.cols.size(); ++x) {
            auto rb = b.row(ra.cols[x]);
            const double w = ra.probs[x];
            for (std::size_t y = 0; y < rb.cols.size(); ++y) {
                const VertexId c = rb.cols[y];
                if (!seen[c]) {
                    seen[c] = 1;
                    touched.push_back(c);
                }
                acc[c] += w * rb.probs[y];
            }
        }
        std::sort(touched.begin(), touched.end());
        rows[i].reserve(touched.size());
        for (VertexId c : touched) {
            rows[i].emplace_back(c, acc[c]);
            acc[c] = 0.0;
            seen[c] = 0;
        }
        touched.clear();
    }
    return TransitionMatrix::from_rows({vs.begin(), vs.end()}, rows);
}

TransitionMatrix matrix_power(const TransitionMatrix& p, unsigned l) {
    if (l == 0) {
        throw std::invalid_argument("matrix_power requires l >= 1");
    }
    TransitionMatrix out = p;
    for (unsigned i = 1; i < l; ++i) {
        out = multiply(out, p);
    }
    return out;
}

double row_tv(TransitionMatrix::Row a, TransitionMatrix::Row b) {
    double sum = 0.0;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.cols.size() || j < b.cols.size()) {
        if (j == b.cols.size() || (i < a.cols.size() && a.cols[i] < b.cols[j])) {
            sum += std::abs(a.probs[i++]);
        } else if (i == a.cols.size() || b.cols[j] < a.cols[i]) {
            sum += std::abs(b.probs[j++]);
        } else {
            sum += std::abs(a.probs[i++] - b.probs[j++]);
        }
    }
    return 0.5 * sum;
}

double tv_distance(const TransitionMatrix& p, const TransitionMatrix& q) {
    if (!std::equal(p.vertices().begin(), p.vertices().end(), q.vertices().begin(), q.vertices().end())) {
        throw DimensionError("tv_distance over different vertex sets (" + std::to_string(p.dimension()) +
                             " vs " + std::to_string(q.dimension()) + ")");
    }
    if (p.dimension() == 0) {
        return 0.0;
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < p.dimension(); ++i) {
        sum += row_tv(p.row_at(i), q.row_at(i));
    }
    return sum / static_cast<double>(p.dimension());
}

RestrictedTv tv_distance_common(const TransitionMatrix& p, const TransitionMatrix& q) {
    RestrictedTv out;
    double sum = 0.0;
    for (std::size_t i = 0; i < p.dimension(); ++i) {
        const VertexId v = p.vertices()[i];
        if (q.contains(v)) {
            sum += row_tv(p.row_at(i), q.row(v));
            ++out.common_vertices;
        }
    }
    out.distance = out.common_vertices ? sum / static_cast<double>(out.common_vertices) : 0.0;
    return out;
}

VertexId random_walk(const Graph& g, VertexId start, unsigned length, Rng& rng) {
    if (!g.contains(start)) {
        throw std::invalid_argument("random walk from absent vertex " + std::to_string(start));
    }
    VertexId cur = start;
    for (unsigned s = 0; s < length; ++s) {
        auto nb = g.neighbors(cur);
        if (nb.empty()) {
            break;
        }
        cur = nb[uniform_index(rng, nb.size())];
    }
    return cur;
}

}  // namespace linkmirage
