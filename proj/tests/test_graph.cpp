#include <doctest.h>

#include "linkmirage/graph.hpp"
#include "support.hpp"

using namespace linkmirage;
using testing::graph_of;
using testing::TempDir;

TEST_CASE("edge list parsing") {
    TempDir dir;

    SUBCASE("plain path") {
        const Graph g = load_edge_list(dir.write("a.txt", "0 1\n1 2\n"));
        CHECK(g.num_vertices() == 3);
        CHECK(g.num_edges() == 2);
        CHECK(g.has_edge(0, 1));
        CHECK(g.has_edge(2, 1));
        CHECK_FALSE(g.has_edge(0, 2));
    }
    SUBCASE("reversed duplicate collapses") {
        const Graph g = load_edge_list(dir.write("a.txt", "0 1\n1 0\n"));
        CHECK(g.num_edges() == 1);
    }
    SUBCASE("self-loop is rejected with its line number") {
        const auto p = dir.write("a.txt", "# header\n0 1\n3 3\n");
        try {
            load_edge_list(p);
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.line() == 3);
        }
    }
    SUBCASE("comments, blank lines, tabs and isolated vertices") {
        const Graph g = load_edge_list(dir.write("a.txt", "# c\n\n5\t7\n9\n  7 11  \n"));
        std::vector<std::uint64_t> raw;
        const Graph h = load_edge_list(dir.path() / "a.txt", raw);
        CHECK(raw == std::vector<std::uint64_t>{5, 7, 9, 11});
        CHECK(h.num_vertices() == 4);
        CHECK(h.degree(2) == 0);  // raw 9
        CHECK(h.has_edge(1, 3));  // raw 7-11
        CHECK(g == h);
    }
    SUBCASE("garbage") {
        CHECK_THROWS_AS(load_edge_list(dir.write("a.txt", "0 x\n")), ParseError);
        CHECK_THROWS_AS(load_edge_list(dir.write("b.txt", "0 1 2\n")), ParseError);
        CHECK_THROWS_AS(load_edge_list(dir.write("c.txt", "-1 2\n")), ParseError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_edge_list(dir.path() / "nope.txt"), GraphError);
    }
}

TEST_CASE("sequences share one id namespace") {
    TempDir dir;
    dir.write("s0.txt", "100 200\n");
    dir.write("s1.txt", "200 300\n");
    const auto manifest = dir.write("m.txt", "s0.txt\ns1.txt\n");
    const auto seq = load_sequence(manifest);
    REQUIRE(seq.size() == 2);
    CHECK(seq.raw_ids == std::vector<std::uint64_t>{100, 200, 300});
    CHECK(seq[0].has_edge(0, 1));
    CHECK(seq[1].has_edge(1, 2));
    CHECK_FALSE(seq[0].contains(2));
    CHECK(seq.labels == std::vector<std::string>{"s0.txt", "s1.txt"});

    SUBCASE("single snapshot") {
        CHECK(load_sequence(dir.write("one.txt", "s0.txt\n")).size() == 1);
    }
    SUBCASE("absent snapshot") {
        CHECK_THROWS_AS(load_sequence(dir.write("bad.txt", "s0.txt\nmissing.txt\n")), GraphError);
    }
    SUBCASE("empty manifest") {
        CHECK_THROWS_AS(load_sequence(dir.write("empty.txt", "\n")), GraphError);
    }
    SUBCASE("mapped reload") {
        const auto p = dir.write("out.txt", "300 100\n");
        const Graph g = load_edge_list_mapped(p, seq.raw_ids);
        CHECK(g.has_edge(0, 2));
        CHECK_THROWS_AS(load_edge_list_mapped(dir.write("x.txt", "100 999\n"), seq.raw_ids), ParseError);
    }
}

TEST_CASE("write then read round-trips, isolated vertices included") {
    TempDir dir;
    const Graph g = Graph::from_edges({0, 1, 2, 3, 4}, {{0, 1}, {1, 3}});
    const std::vector<std::uint64_t> raw{10, 20, 30, 40, 50};
    write_edge_list(dir.path() / "g.txt", g, raw, "provenance x");
    std::vector<std::uint64_t> back;
    const Graph h = load_edge_list(dir.path() / "g.txt", back);
    CHECK(back == raw);
    CHECK(h == g);
}

TEST_CASE("graph construction") {
    CHECK_THROWS_AS(Graph::from_edges({{2, 2}}), GraphError);
    const Graph g = graph_of({{3, 1}, {1, 3}, {1, 2}});
    CHECK(g.num_edges() == 2);
    CHECK(g.edges() == std::vector<Edge>{{1, 2}, {1, 3}});
    CHECK(g.neighbors(1).size() == 2);
    CHECK_FALSE(g.contains(0));
    CHECK_FALSE(g.has_edge(0, 1));
    CHECK(g.id_bound() == 4);
}

TEST_CASE("union and induced subgraph") {
    const Graph a = graph_of({{0, 1}});
    const Graph b = graph_of({{1, 2}});
    const std::vector<Graph> both{a, b};
    const Graph u = union_graph(both);
    CHECK(u.edges() == std::vector<Edge>{{0, 1}, {1, 2}});

    const std::vector<Graph> one{a};
    CHECK(union_graph(one) == a);

    const Graph c = graph_of({{5, 6}, {6, 7}});
    const std::vector<Graph> disjoint{a, c};
    CHECK(union_graph(disjoint).num_edges() == a.num_edges() + c.num_edges());

    const Graph sq = graph_of({{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    const std::vector<VertexId> keep{2, 1, 0, 9};
    const Graph s = induced_subgraph(sq, keep);
    CHECK(s.num_vertices() == 3);
    CHECK(s.edges() == std::vector<Edge>{{0, 1}, {1, 2}});
}
