#include <doctest.h>

#include <cmath>

#include "linkmirage/apps.hpp"
#include "linkmirage/generators.hpp"
#include "linkmirage/perturb.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace linkmirage;

TEST_CASE("attack probability") {
    const std::vector<Graph> seq{
        Graph::from_edges({0, 1, 2}, {{0, 1}}),
        Graph::from_edges({0, 1, 2}, {{0, 2}}),
        Graph::from_edges({0, 1, 2}, {{0, 1}, {0, 2}}),
    };
    const auto p = attack_probability(seq, 0, 0.1);
    REQUIRE(p.size() == 3);
    CHECK(p[0] == doctest::Approx(0.1));
    CHECK(p[1] == doctest::Approx(0.19));
    CHECK(p[2] == doctest::Approx(0.19));
    CHECK(cumulative_neighbors(seq, 0) == std::vector<std::size_t>{1, 2, 2});
    CHECK_THROWS(attack_probability(seq, 0, 1.5));
    CHECK_THROWS(attack_probability(seq, 7, 0.1));
}

TEST_CASE("k-hop edges agree with all-pairs distances") {
    Rng rng = make_stream(61);
    for (int trial = 0; trial < 10; ++trial) {
        const Graph g = testing::random_graph(12, 0.2, rng);
        const std::size_t n = g.num_vertices();
        std::vector<std::vector<int>> dist(n, std::vector<int>(n, 1000));
        for (std::size_t i = 0; i < n; ++i) {
            dist[i][i] = 0;
            for (VertexId w : g.neighbors(g.vertices()[i])) {
                dist[i][w] = 1;
            }
        }
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    dist[i][j] = std::min(dist[i][j], dist[i][k] + dist[k][j]);
                }
            }
        }
        for (unsigned k : {1u, 2u, 3u}) {
            std::vector<Edge> expect;
            for (VertexId i = 0; i < n; ++i) {
                for (VertexId j = i + 1; j < n; ++j) {
                    if (dist[i][j] <= static_cast<int>(k)) {
                        expect.emplace_back(i, j);
                    }
                }
            }
            CHECK(k_hop_edges(g, k) == expect);
        }
    }
}

TEST_CASE("sampling probability") {
    Rng rng = make_stream(62);
    const std::vector<Graph> orig{testing::random_graph(20, 0.2, rng), testing::random_graph(20, 0.2, rng)};
    const auto same = sampling_probability(orig, orig, 1);
    CHECK(same.probability == 1.0);
    CHECK(same.out_of_envelope == 0);

    const std::vector<Graph> stat{perturb_static(orig[0], 2, rng), perturb_static(orig[1], 2, rng)};
    const auto r = sampling_probability(stat, orig, 2);
    CHECK(r.probability > 0.0);
    CHECK(r.probability <= 1.0);

    const std::vector<Graph> empty{Graph::from_edges({0, 1}, {})};
    CHECK_THROWS(sampling_probability(empty, empty, 2));
    const std::vector<Graph> one{orig[0]};
    CHECK_THROWS(sampling_probability(one, orig, 2));
}

TEST_CASE("sybil world") {
    Rng rng = make_stream(63);
    SybilScenario sc;
    sc.honest = random_connected(100, 150, rng);
    sc.sybil_vertices = 40;
    sc.attack_edges = 7;
    const auto world = build_sybil_world(sc, 9);
    CHECK(world.attack_edges == 7);
    CHECK(count_attack_edges(world.graph, world.is_sybil) == 7);
    CHECK(world.graph.num_vertices() == 140);
    for (VertexId v = 0; v < 100; ++v) {
        CHECK_FALSE(world.is_sybil[v]);
    }

    SybilScenario bad = sc;
    bad.attack_edges = 0;
    CHECK_THROWS(build_sybil_world(bad, 1));
    bad = sc;
    bad.walk_length = 0;
    CHECK_THROWS(build_sybil_world(bad, 1));
}

TEST_CASE("sybil false positives fall with walk length") {
    Rng rng = make_stream(64);
    SybilScenario sc;
    sc.honest = random_connected(100, 200, rng);
    double previous = 2.0;
    double last = 1.0;
    for (std::size_t w : {1u, 4u, 16u}) {
        sc.walk_length = w;
        const auto world = build_sybil_world(sc, 3);
        const auto r = sybil_eval(sc, world, world.graph, 3);
        CHECK(r.false_positive_rate <= previous + 0.02);
        CHECK_FALSE(r.honest_disconnected);
        previous = r.false_positive_rate;
        last = r.false_positive_rate;
    }
    CHECK(last < 0.05);

    // Same scenario, different thread count: same answer.
    const auto world = build_sybil_world(sc, 3);
    CHECK(sybil_eval(sc, world, world.graph, 3, 1).false_positive_rate ==
          sybil_eval(sc, world, world.graph, 3, 4).false_positive_rate);
}

TEST_CASE("a lone honest vertex accepts only itself") {
    SybilScenario sc;
    sc.honest = Graph::from_edges({0, 1, 2}, {{1, 2}});
    sc.sybil_vertices = 3;
    sc.attack_edges = 1;
    sc.verifiers = 3;
    const auto world = build_sybil_world(sc, 5);
    const auto r = sybil_eval(sc, world, world.graph, 5);
    CHECK(r.honest_disconnected);
    CHECK(r.false_positive_rate >= 0.0);
    CHECK(r.false_positive_rate <= 1.0);
}
