#pragma once

#include <cstddef>

#include "linkmirage/graph.hpp"
#include "linkmirage/random.hpp"

namespace linkmirage {

/// Synthetic fixtures for experiments and tests.

struct PlantedPartitionSpec {
    std::size_t vertices = 200;
    std::size_t groups = 4;
    double p_in = 0.2;
    double p_out = 0.01;
};

/// Groups are contiguous blocks of near-equal size. Every vertex is present,
/// isolated or not.
Graph planted_partition(const PlantedPartitionSpec& spec, Rng& rng);

/// Group of vertex v under the block layout used by planted_partition.
std::size_t planted_group(const PlantedPartitionSpec& spec, VertexId v);

/// G(n, p) over vertices 0..n-1.
Graph erdos_renyi(std::size_t n, double p, Rng& rng);

/// Random spanning tree plus `extra` uniformly chosen additional edges.
Graph random_connected(std::size_t n, std::size_t extra, Rng& rng);

/**
 * Snapshot sequence in which consecutive graphs share `overlap` of their
 * edges: each step keeps that fraction of the previous edges and refills the
 * edge count with fresh edges drawn from the same planted-partition model.
 */
TemporalGraphSequence overlapping_sequence(const PlantedPartitionSpec& spec, std::size_t snapshots,
                                           double overlap, Rng& rng);

}  // namespace linkmirage
