#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "linkmirage/graph.hpp"
#include "linkmirage/random.hpp"

namespace linkmirage {

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/**
 * Sparse row-stochastic matrix indexed by global vertex ids.
 *
 * Row i belongs to vertices()[i]; each row stores its support sorted by
 * column id. Used for P_t, its powers, and the matrices of perturbed or
 * aggregated graphs.
 */
class TransitionMatrix {
public:
    struct Row {
        std::span<const VertexId> cols;
        std::span<const double> probs;
    };

    TransitionMatrix() = default;

    /// rows[i] is the (column, probability) support of vertices[i]; vertices
    /// must be sorted and unique, each row sorted by column.
    static TransitionMatrix from_rows(std::vector<VertexId> vertices,
                                      const std::vector<std::vector<std::pair<VertexId, double>>>& rows);

    std::size_t dimension() const { return vertices_.size(); }
    std::size_t nnz() const { return cols_.size(); }
    std::span<const VertexId> vertices() const { return vertices_; }
    bool contains(VertexId v) const { return v < local_.size() && local_[v] >= 0; }

    Row row_at(std::size_t i) const {
        return {{cols_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]},
                {probs_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]}};
    }
    Row row(VertexId v) const { return row_at(static_cast<std::size_t>(local_[v])); }
    double at(VertexId r, VertexId c) const;

    friend bool operator==(const TransitionMatrix&, const TransitionMatrix&) = default;

private:
    std::vector<VertexId> vertices_;
    std::vector<std::int32_t> local_;
    std::vector<std::size_t> offsets_{0};
    std::vector<VertexId> cols_;
    std::vector<double> probs_;
};

/// Simple random walk matrix: P(i,j) = 1/deg(i) on edges. An isolated vertex
/// gets a lazy self-loop row so every row stays stochastic.
TransitionMatrix transition_matrix(const Graph& g);

/// a * b over the same vertex set.
TransitionMatrix multiply(const TransitionMatrix& a, const TransitionMatrix& b);

/// p^l for l >= 1.
TransitionMatrix matrix_power(const TransitionMatrix& p, unsigned l);

/// Half the L1 distance between two sparse rows.
double row_tv(TransitionMatrix::Row a, TransitionMatrix::Row b);

/// Mean row TV distance. Both matrices must share the same vertex set.
double tv_distance(const TransitionMatrix& p, const TransitionMatrix& q);

struct RestrictedTv {
    double distance = 0.0;
    std::size_t common_vertices = 0;
};

/// Mean row TV distance over the vertices present in both matrices.
RestrictedTv tv_distance_common(const TransitionMatrix& p, const TransitionMatrix& q);

/// Terminal vertex of a `length`-step simple random walk from `start`.
/// A walk reaching an isolated vertex stays there.
VertexId random_walk(const Graph& g, VertexId start, unsigned length, Rng& rng);

}  // namespace linkmirage
