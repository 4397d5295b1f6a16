#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "linkmirage/graph.hpp"
#include "linkmirage/random.hpp"

namespace testing {

/// Scratch directory removed on destruction.
class TempDir {
public:
    TempDir() {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                ("lm_test_" + std::to_string(rd()) + "_" + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path write(const std::string& name, const std::string& text) const {
        const auto p = path_ / name;
        std::filesystem::create_directories(p.parent_path());
        std::ofstream(p) << text;
        return p;
    }

private:
    std::filesystem::path path_;
};

inline linkmirage::Graph graph_of(std::initializer_list<std::pair<linkmirage::VertexId, linkmirage::VertexId>> es) {
    std::vector<linkmirage::Edge> edges;
    for (auto [u, v] : es) {
        edges.emplace_back(u, v);
    }
    return linkmirage::Graph::from_edges(std::move(edges));
}

inline linkmirage::Graph complete_graph(std::size_t n) {
    std::vector<linkmirage::Edge> edges;
    for (linkmirage::VertexId i = 0; i < n; ++i) {
        for (linkmirage::VertexId j = i + 1; j < n; ++j) {
            edges.emplace_back(i, j);
        }
    }
    return linkmirage::Graph::from_edges(std::move(edges));
}

/// Two cliques of size `size` joined by one bridge edge (size-1, size).
inline linkmirage::Graph bridged_cliques(std::size_t size) {
    std::vector<linkmirage::Edge> edges;
    for (std::size_t block = 0; block < 2; ++block) {
        const auto base = static_cast<linkmirage::VertexId>(block * size);
        for (linkmirage::VertexId i = 0; i < size; ++i) {
            for (linkmirage::VertexId j = i + 1; j < size; ++j) {
                edges.emplace_back(base + i, base + j);
            }
        }
    }
    edges.emplace_back(static_cast<linkmirage::VertexId>(size - 1), static_cast<linkmirage::VertexId>(size));
    return linkmirage::Graph::from_edges(std::move(edges));
}

/// G(n, p) over 0..n-1 with every vertex present (isolated ones included).
inline linkmirage::Graph random_graph(std::size_t n, double p, linkmirage::Rng& rng) {
    std::vector<linkmirage::VertexId> vs(n);
    std::vector<linkmirage::Edge> edges;
    for (linkmirage::VertexId i = 0; i < n; ++i) {
        vs[i] = i;
        for (linkmirage::VertexId j = i + 1; j < n; ++j) {
            if (linkmirage::uniform01(rng) < p) {
                edges.emplace_back(i, j);
            }
        }
    }
    return linkmirage::Graph::from_edges(std::move(vs), std::move(edges));
}

}  // namespace testing
