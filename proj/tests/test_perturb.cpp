#include <doctest.h>

#include <cmath>
#include <map>

#include "linkmirage/generators.hpp"
#include "linkmirage/perturb.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace linkmirage;

namespace {

std::uint64_t mask_of(const oracle::PairIndex& idx, const Graph& g) {
    std::uint64_t m = 0;
    for (const Edge& e : g.edges()) {
        m |= idx.bit(e.u, e.v);
    }
    return m;
}

/// Largest gap between empirical output frequencies and an exact distribution.
template <class Draw>
double max_frequency_gap(const Graph& g, const oracle::MaskDist& exact, std::size_t n, Draw&& draw) {
    const oracle::PairIndex idx(g);
    std::map<std::uint64_t, double> seen;
    for (std::size_t i = 0; i < n; ++i) {
        seen[mask_of(idx, draw(i))] += 1.0 / static_cast<double>(n);
    }
    double worst = 0.0;
    for (auto [mask, p] : exact) {
        worst = std::max(worst, std::fabs(p - seen[mask]));
        seen.erase(mask);
    }
    for (auto [mask, p] : seen) {
        worst = std::max(worst, p);  // output the oracle says is impossible
    }
    return worst;
}

}  // namespace

TEST_CASE("static perturbation keeps the vertex set and every degree") {
    Rng rng = make_stream(31);
    const Graph g = planted_partition({80, 2, 0.2, 0.02}, rng);
    for (unsigned k : {1u, 2u, 5u}) {
        const Graph h = perturb_static(g, k, rng);
        CHECK(std::ranges::equal(h.vertices(), g.vertices()));
        for (VertexId v : g.vertices()) {
            CHECK(h.degree(v) == g.degree(v));
        }
    }
    CHECK_THROWS(perturb_static(g, 0, rng));
}

TEST_CASE("forced cases") {
    Rng rng = make_stream(32);
    const Graph edge = testing::graph_of({{0, 1}});
    for (int i = 0; i < 20; ++i) {
        CHECK(perturb_static(edge, 1, rng) == edge);
    }
    const Graph k3 = testing::complete_graph(3);
    for (int i = 0; i < 200; ++i) {
        const Graph h = perturb_static(k3, 1, rng);
        for (VertexId v = 0; v < 3; ++v) {
            CHECK(h.degree(v) == 2);
        }
    }
}

TEST_CASE("two-step walks on a path end at either end with probability one half") {
    const Graph path = testing::graph_of({{0, 1}, {1, 2}});
    const auto exact = oracle::walk_distribution(path, 0, 2);
    CHECK(exact.at(0) == doctest::Approx(0.5));
    CHECK(exact.at(2) == doctest::Approx(0.5));

    Rng rng = make_stream(33);
    int to_two = 0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        to_two += random_walk(path, 0, 2, rng) == 2 ? 1 : 0;
    }
    CHECK(std::fabs(to_two / double(n) - 0.5) < 0.02);
    // A path is the only simple graph with its degree sequence.
    CHECK(perturb_static(path, 2, rng) == path);
}

TEST_CASE("static output distribution matches exact enumeration") {
    const std::vector<Graph> fixtures{
        testing::graph_of({{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}}),
        testing::graph_of({{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 4}, {4, 5}}),
        testing::graph_of({{0, 1}, {0, 2}, {0, 3}, {1, 2}, {3, 4}, {4, 5}, {2, 5}}),
    };
    for (const Graph& g : fixtures) {
        for (unsigned k : {1u, 2u, 3u}) {
            const oracle::PairIndex idx(g);
            const auto exact = oracle::community_distribution(idx, g, k, kFakeEdgeRetries);
            double total = 0.0;
            for (auto [m, p] : exact) {
                total += p;
            }
            CHECK(total == doctest::Approx(1.0));
            const double gap = max_frequency_gap(g, exact, 40000, [&](std::size_t i) {
                Rng rng = make_stream(34, {k, i});
                return perturb_static(g, k, rng);
            });
            CHECK(gap < 0.01);
        }
    }
}

TEST_CASE("single step output distribution matches exact enumeration") {
    const Graph g = testing::bridged_cliques(3);
    PerturbParams params;
    params.k = 2;
    const auto plan = plan_step(g, nullptr, nullptr, params);
    REQUIRE(plan.cluster.clustering.num_communities() == 2);
    const auto exact = oracle::step_distribution(g, plan.cluster.clustering, params.k, kFakeEdgeRetries);
    const double gap = max_frequency_gap(g, exact, 40000, [&](std::size_t i) {
        return realize_step(g, plan, nullptr, params, 0, derive_seed(35, {i})).assemble(g.vertices());
    });
    CHECK(gap < 0.01);
}

TEST_CASE("inter-cluster probabilities") {
    MarginalPair one;
    one.a = {{0}, {1}};
    one.b = {{5}, {1}};
    one.inter_edges = 1;
    CHECK(inter_cluster_probability(InterClusterForm::kDegreePreserving, 1, 1, one) == 1.0);
    Rng rng = make_stream(36);
    CHECK(rewire_pair(one, InterClusterForm::kDegreePreserving, rng) == std::vector<Edge>{{0, 5}});

    MarginalPair wide;
    wide.a = {{0, 1, 2}, {1, 2, 1}};
    wide.b = {{10, 11, 12, 13}, {1, 1, 1, 1}};
    wide.inter_edges = 4;
    CHECK(inter_cluster_probability(InterClusterForm::kDegreePreserving, 2, 1, wide) == doctest::Approx(0.5));
    CHECK(inter_cluster_probability(InterClusterForm::kAsymmetric, 2, 1, wide) ==
          doctest::Approx(0.5 * 3.0 / 7.0));

    // Every (i, j) pair shows up at its own Bernoulli rate.
    std::map<std::pair<VertexId, VertexId>, int> hits;
    const int n = 20000;
    for (int t = 0; t < n; ++t) {
        for (const Edge& e : rewire_pair(wide, InterClusterForm::kDegreePreserving, rng)) {
            ++hits[{e.u, e.v}];
        }
    }
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            const double p = inter_cluster_probability(InterClusterForm::kDegreePreserving,
                                                       wide.a.inter_degree[i], wide.b.inter_degree[j], wide);
            const double freq = hits[{wide.a.nodes[i], wide.b.nodes[j]}] / double(n);
            CHECK(std::fabs(freq - p) < 4 * std::sqrt(p * (1 - p) / n) + 1e-9);
        }
    }
    CHECK(parse_inter_cluster_form("algorithm1") == InterClusterForm::kAsymmetric);
    CHECK(to_string(parse_inter_cluster_form("appendixC")) == "appendixC");
    CHECK_THROWS(parse_inter_cluster_form("other"));
}

TEST_CASE("marginal pairs of two bridged cliques") {
    const Graph g = testing::bridged_cliques(4);
    const auto c = Clustering::from_groups({{0, 1, 2, 3}, {4, 5, 6, 7}});
    const auto pairs = marginal_pairs(g, c);
    REQUIRE(pairs.size() == 1);
    const auto& p = pairs.begin()->second;
    CHECK(p.inter_edges == 1);
    CHECK(p.a.nodes == std::vector<VertexId>{3});
    CHECK(p.b.nodes == std::vector<VertexId>{4});
    const auto inter = perturb_intercluster(g, c, InterClusterForm::kDegreePreserving, 1);
    CHECK(inter.begin()->second == std::vector<Edge>{{3, 4}});
}

TEST_CASE("temporal runs") {
    Rng rng = make_stream(37);
    const Graph g = planted_partition({90, 3, 0.25, 0.02}, rng);
    PerturbParams params;
    params.seed = 99;

    SUBCASE("identical snapshots give identical outputs") {
        const auto seq = TemporalGraphSequence::from_graphs({g, g, g, g, g});
        const auto out = linkmirage_sequence(seq, params);
        REQUIRE(out.size() == 5);
        for (std::size_t t = 1; t < 5; ++t) {
            CHECK(out[t] == out[0]);
        }
        const auto stat = perturb_static_baseline_sequence(seq, params.k, params.seed);
        CHECK_FALSE(stat[1] == stat[0]);
    }
    SUBCASE("length one") {
        const auto seq = TemporalGraphSequence::from_graphs({g});
        const auto run = linkmirage_run(seq, params);
        REQUIRE(run.perturbed.size() == 1);
        const auto step = linkmirage_step(g, std::nullopt, params, 0, step_seed(params.seed, 0));
        CHECK(step.perturbed == run.perturbed[0]);
    }
    SUBCASE("deterministic and thread independent") {
        Rng r2 = make_stream(38);
        const auto seq = overlapping_sequence({120, 4, 0.2, 0.01}, 4, 0.8, r2);
        const auto a = linkmirage_sequence(seq, params);
        PerturbParams threaded = params;
        threaded.threads = 4;
        CHECK(linkmirage_sequence(seq, threaded) == a);
        CHECK(linkmirage_sequence(seq, params) == a);
        PerturbParams other = params;
        other.seed = 100;
        CHECK_FALSE(linkmirage_sequence(seq, other) == a);
    }
    SUBCASE("step contract") {
        const auto first = linkmirage_step(g, std::nullopt, params, 0, 1);
        const PreviousStep prev{g, first.record, first.cluster};
        CHECK_THROWS(linkmirage_step(g, prev, params, 0, 1));
        CHECK_THROWS(linkmirage_step(g, std::nullopt, params, 1, 1));
        CHECK_NOTHROW(linkmirage_step(g, prev, params, 1, 1));
    }
}

TEST_CASE("unchanged communities keep their perturbation") {
    Rng rng = make_stream(39);
    const Graph g0 = planted_partition({90, 3, 0.3, 0.0}, rng);
    // Rewire inside the last block only; the first two blocks are untouched.
    auto edges = g0.edges();
    std::erase_if(edges, [](const Edge& e) { return e.u >= 60 && (e.u + e.v) % 3 == 0; });
    const Graph g1 = Graph::from_edges({g0.vertices().begin(), g0.vertices().end()}, edges);
    const auto seq = TemporalGraphSequence::from_graphs({g0, g1});
    PerturbParams params;
    params.m = 0;
    const auto run = linkmirage_run(seq, params);
    const auto& diff = run.plans[1].diff;
    std::size_t reused = 0;
    for (const auto& pair : diff.unchanged) {
        const auto old_members = run.records[0].clustering.members(pair.prev);
        const auto new_members = run.records[1].clustering.members(pair.cur);
        if (std::ranges::equal(old_members, new_members)) {
            CHECK(run.records[1].intra.at(pair.cur) == run.records[0].intra.at(pair.prev));
            ++reused;
        }
    }
    CHECK(reused >= 2);
}

TEST_CASE("random deletion and insertion baseline") {
    Rng rng = make_stream(40);
    const Graph g = planted_partition({60, 2, 0.2, 0.05}, rng);
    const std::size_t m = g.num_edges();
    const Graph h = hay_perturb(g, m / 2, rng);
    CHECK(h.num_edges() == m);
    std::size_t kept = 0;
    for (const Edge& e : h.edges()) {
        kept += g.has_edge(e.u, e.v) ? 1 : 0;
    }
    CHECK(kept == m - m / 2);
}

TEST_CASE("parameter validation") {
    PerturbParams p;
    p.k = 0;
    CHECK_THROWS(p.validate());
    p.k = 2;
    p.theta = 0.0;
    CHECK_THROWS(p.validate());
    p.theta = 1.0;
    CHECK_NOTHROW(p.validate());
    p.k_override[3] = 7;
    CHECK(p.k_for(3) == 7);
    CHECK(p.k_for(2) == 2);
}
