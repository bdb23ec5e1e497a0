#include <catch2/catch_amalgamated.hpp>

#include <optiterm/forms.hpp>
#include <optiterm/hier.hpp>
#include <optiterm/nhgraph.hpp>
#include <optiterm/parse.hpp>

#include "generators.hpp"

using namespace optiterm;

namespace {
Term T(const char* s) { return parse_term(s); }
}

TEST_CASE("graph construction validates its shape") {
    using E = NHGraph::Edge;
    CHECK_NOTHROW(NHGraph({0, 1}, {E{"A", {0, 1}}}, {{0, Name("x")}}));
    CHECK_THROWS_WITH(NHGraph({0, 1, 2}, {E{"A", {0, 1}}}, {}), "isolated vertex 2");
    CHECK_THROWS_WITH(NHGraph({0, 1}, {E{"A", {0, 1}}, E{"A", {0}}}, {}),
                      "edge label 'A' used with two different arities");
    CHECK_THROWS_WITH(NHGraph({0}, {E{"A", {0, 0}}}, {}), "edge 'A' attached twice to one vertex");
    CHECK_THROWS_WITH(NHGraph({0}, {E{"A", {0, 1}}}, {}), "edge 'A' attached to unknown vertex");
    CHECK_THROWS_WITH(NHGraph({0, 1}, {E{"A", {0, 1}}}, {{0, Name("x")}, {1, Name("x")}}),
                      "two vertices named 'x'");
    CHECK_THROWS_WITH(NHGraph({0}, {E{"A", {0}}}, {{3, Name("x")}}),
                      "naming refers to unknown vertex");
}

TEST_CASE("atoms become single-edge graphs over named vertices") {
    NHGraph g = graph_atom("A", {Name("x"), Name("y")});
    CHECK(g.vertices().size() == 2);
    CHECK(g.edges().size() == 1);
    CHECK(support_graph(g) == NameSet{Name("x"), Name("y")});
    CHECK(g.vertex_of(Name("x")) != g.vertex_of(Name("y")));
    // Repeated arguments would force one name onto two vertices.
    CHECK_THROWS_AS(graph_atom("A", {Name("x"), Name("x")}), std::invalid_argument);
}

TEST_CASE("parallel merges interfaces and restriction hides a name") {
    NHGraph g = eval_graph(T("A(x,y) || B(y,z)"));
    CHECK(g.vertices().size() == 3);
    CHECK(g.edges().size() == 2);
    CHECK(support_graph(g) == NameSet{Name("x"), Name("y"), Name("z")});

    NHGraph h = eval_graph(T("(x2)A(x1,x2) || (x3)B(x1,x3)"));
    CHECK(h.vertices().size() == 3);
    CHECK(h.edges().size() == 2);
    CHECK(support_graph(h) == NameSet{Name("x1")});

    // Restricting a name not on the interface changes nothing.
    CHECK(isomorphic(graph_restrict(Name("q"), h), h));
}

TEST_CASE("separate binders with one spelling keep separate vertices") {
    NHGraph g = eval_graph(T("(x)A(x) || (x)A(x)"));
    CHECK(g.vertices().size() == 2);
    CHECK(g.edges().size() == 2);
    CHECK(support_graph(g).empty());
    CHECK(congruent_terms(T("(x)A(x) || (x)A(x)"), T("(y)A(y) || (z)A(z)")));
}

TEST_CASE("permuting a graph renames its interface") {
    NHGraph g = eval_graph(T("A(x,y)"));
    Permutation pi = Permutation::transpose(Name("x"), Name("z"));
    NHGraph moved = graph_permute(g, pi);
    CHECK(support_graph(moved) == NameSet{Name("y"), Name("z")});
    CHECK(isomorphic(moved, eval_graph(Term::perm_app(T("A(x,y)"), pi))));
    CHECK(isomorphic(moved, eval_graph(T("A(z,y)"))));
}

TEST_CASE("congruence distinguishes interface roles") {
    CHECK(congruent_terms(T("A(x,y) || B(y,z)"), T("B(y,z) || A(x,y)")));
    CHECK(congruent_terms(T("(x)(A(x) || B(y))"), T("(x)A(x) || B(y)")));
    CHECK(congruent_terms(T("A(x) || nil"), T("A(x)")));
    CHECK_FALSE(congruent_terms(T("C(x)"), T("C(y)")));
    CHECK_FALSE(congruent_terms(T("A(x,y)"), T("A(y,x)")));
    CHECK_FALSE(congruent_terms(T("A(x,y)"), T("B(x,y)")));
    CHECK_FALSE(congruent_terms(T("(x)A(x)"), T("(x)A(x) || (x)A(x)")));
}

TEST_CASE("graphs translate back to congruent terms") {
    for (const char* s : {"A(x,y) || B(y,z)", "(x2)A(x1,x2) || (x3)B(x1,x3)",
                          "(x)(y)(A(x,y) || A(y,x))", "nil"}) {
        NHGraph g = eval_graph(T(s));
        CHECK(isomorphic(eval_graph(graph_to_term(g)), g));
        CHECK(congruent_terms(graph_to_term(g), T(s)));
    }
}

TEST_CASE("random graphs survive the term round trip") {
    std::mt19937 rng(31);
    for (int i = 0; i < 60; ++i) {
        NHGraph g = gen::random_graph(rng);
        Term t = graph_to_term(g);
        CHECK(isomorphic(eval_graph(t), g));
    }
}

TEST_CASE("hierarchical views expose binders level by level") {
    HierNHGraph h = term_to_hier(canonical_form(T("(x1)(x2)(x3)(A(x1,x2) || B(x2,x3))")));
    CHECK(h.interface_names.empty());
    CHECK(render_hier(h) ==
          "{}\n"
          "  {x2}\n"
          "    {x1}\n"
          "      A(x1,x2)\n"
          "    {x3}\n"
          "      B(x2,x3)\n");

    HierNHGraph open = term_to_hier(canonical_form(T("(x2)A(x1,x2) || (x3)B(x1,x3)")));
    CHECK(open.interface_names == NameSet{Name("x1")});
    CHECK(render_hier(open) ==
          "{x1}\n"
          "  {x2}\n"
          "    A(x1,x2)\n"
          "  {x3}\n"
          "    B(x1,x3)\n");
}

TEST_CASE("flattening a hierarchy matches the direct graph") {
    std::mt19937 rng(47);
    for (int i = 0; i < 40; ++i) {
        gen::TermConfig cfg;
        Term t = gen::random_term(rng, cfg);
        Term n = normal_form(t);
        HierNHGraph h = term_to_hier(n);
        CHECK(isomorphic(flatten_hier(h), eval_graph(n)));
        CHECK(congruent_terms(hier_to_term(h), n));
    }
}

TEST_CASE("hierarchies reject permutation nodes and clashing exposure") {
    CHECK_THROWS_AS(term_to_hier(Term::perm_app(T("A(x)"), Permutation())),
                    std::invalid_argument);

    HierNHGraph bad;
    bad.interface_names = {Name("x")};
    HierNode inner;
    inner.exposed = {Name("x")};
    HierNode leaf;
    leaf.leaf = true;
    leaf.label = "A";
    leaf.attach = {Name("x")};
    inner.children.push_back(leaf);
    bad.components.push_back(inner);
    CHECK_THROWS_WITH(validate_hier(bad), "name 'x' exposed twice on one path");

    HierNHGraph unseen;
    unseen.components.push_back(leaf);
    CHECK_THROWS_WITH(validate_hier(unseen), "edge 'A' uses name 'x' not exposed on its path");
}
