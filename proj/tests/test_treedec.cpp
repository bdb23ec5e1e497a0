#include <catch2/catch_amalgamated.hpp>

#include <optiterm/forms.hpp>
#include <optiterm/parse.hpp>
#include <optiterm/treedec.hpp>

#include "generators.hpp"

using namespace optiterm;

namespace {

using E = NHGraph::Edge;

// Path on four vertices: E(0,1), E(1,2), E(2,3).
NHGraph path4() {
    return NHGraph({0, 1, 2, 3}, {E{"E", {0, 1}}, E{"E", {1, 2}}, E{"E", {2, 3}}}, {});
}

TreeDecomposition path4_td() {
    TreeDecomposition td;
    td.nodes = {0, 1, 2};
    td.arcs = {{0, 1}, {1, 2}};
    td.bags = {{0, {0, 1}}, {1, {1, 2}}, {2, {2, 3}}};
    return td;
}

NHGraph triangle() {
    return NHGraph({0, 1, 2}, {E{"E", {0, 1}}, E{"E", {1, 2}}, E{"E", {0, 2}}}, {});
}

NHGraph k4() {
    std::vector<E> edges;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) edges.push_back(E{"E", {i, j}});
    return NHGraph({0, 1, 2, 3}, std::move(edges), {});
}

}  // namespace

TEST_CASE("a valid decomposition reports no violations") {
    CHECK(validate_td(path4(), path4_td()).empty());
    CHECK(td_width(path4_td()) == 1);
    CHECK(td_max_bag(path4_td()) == 2);
}

TEST_CASE("each defining condition is reported with its witness") {
    NHGraph g = path4();

    TreeDecomposition missing = path4_td();
    missing.bags[2] = {2};  // vertex 3 dropped everywhere
    auto v1 = validate_td(g, missing);
    REQUIRE(v1.size() == 2);
    CHECK(v1[0] == "(a) vertex 3 appears in no bag");
    CHECK(v1[1] == "(b) edge 2 'E' fits in no bag");

    TreeDecomposition split = path4_td();
    split.bags[1] = {1, 2, 0};
    split.bags[0] = {0, 1};
    split.bags[2] = {2, 3, 0};
    // Vertex 0 sits in bags 0 and 2 but bag 1 also holds it, so still fine.
    CHECK(validate_td(g, split).empty());
    split.bags[1] = {1, 2};
    auto v2 = validate_td(g, split);
    REQUIRE(v2.size() == 1);
    CHECK(v2[0] == "(c) bags holding vertex 0 are not connected");
}

TEST_CASE("malformed decompositions throw before validation") {
    NHGraph g = path4();
    TreeDecomposition td = path4_td();

    TreeDecomposition cycle = td;
    cycle.arcs.push_back({0, 2});
    CHECK_THROWS_WITH(validate_td(g, cycle), "node/arc count is not a tree");

    TreeDecomposition forest = td;
    forest.arcs = {{0, 1}, {0, 1}};
    CHECK_THROWS_WITH(validate_td(g, forest), "decomposition tree is not connected");

    TreeDecomposition stray = td;
    stray.arcs[0] = {0, 9};
    CHECK_THROWS_WITH(validate_td(g, stray), "arc endpoint is not a node");

    CHECK_THROWS_WITH(td_width(TreeDecomposition{}), "empty tree decomposition");
}

TEST_CASE("a decomposition translates to a term of matching width") {
    NHGraph g = path4();
    TreeDecomposition td = path4_td();
    std::map<int, std::string> hints = {{0, "a"}, {1, "b"}, {2, "c"}, {3, "d"}};

    Term t = td_to_term(g, td, 0, hints);
    CHECK(render_term(t) == "(a)(b)(E(a,b) || (c)(E(b,c) || (d)E(c,d)))");
    CHECK(complexity(t) == td_max_bag(td));
    CHECK(isomorphic(eval_graph(t), g));

    // Any root gives a congruent translation.
    for (int root : {1, 2}) {
        Term u = td_to_term(g, td, root, hints);
        CHECK(congruent_terms(u, t));
        CHECK(complexity(u) == td_max_bag(td));
    }
}

TEST_CASE("translation requires a closed graph and a valid decomposition") {
    NHGraph named({0, 1}, {E{"A", {0, 1}}}, {{0, Name("x")}});
    CHECK_THROWS_WITH(td_to_term(named, path4_td(), 0),
                      "td_to_term expects a graph with empty interface");

    TreeDecomposition bad = path4_td();
    bad.bags[2] = {2};
    CHECK_THROWS_AS(td_to_term(path4(), bad, 0), std::invalid_argument);
    CHECK_THROWS_WITH(td_to_term(path4(), path4_td(), 7), "unknown root node");
}

TEST_CASE("heuristics find optimal widths on the standard shapes") {
    for (TdStrategy s : {TdStrategy::MinDegree, TdStrategy::MinFill}) {
        TreeDecomposition tp = heuristic_td(path4(), s);
        CHECK(validate_td(path4(), tp).empty());
        CHECK(td_width(tp) == 1);

        TreeDecomposition tt = heuristic_td(triangle(), s);
        CHECK(validate_td(triangle(), tt).empty());
        CHECK(td_width(tt) == 2);

        TreeDecomposition tk = heuristic_td(k4(), s);
        CHECK(validate_td(k4(), tk).empty());
        CHECK(td_width(tk) == 3);
    }
    CHECK_THROWS_WITH(heuristic_td(NHGraph::empty(), TdStrategy::MinDegree),
                      "heuristic_td: empty graph");
}

TEST_CASE("random graphs round-trip through heuristic decompositions") {
    std::mt19937 rng(59);
    for (int i = 0; i < 40; ++i) {
        NHGraph g = gen::random_graph(rng);
        for (TdStrategy s : {TdStrategy::MinDegree, TdStrategy::MinFill}) {
            TreeDecomposition td = heuristic_td(g, s);
            CHECK(validate_td(g, td).empty());
            Term t = td_to_term(g, td, *td.nodes.begin());
            CHECK(isomorphic(eval_graph(t), g));
            CHECK(complexity(t) <= td_max_bag(td));
        }
    }
}
