#include <catch2/catch_amalgamated.hpp>

#include <optiterm/costeval.hpp>
#include <optiterm/forms.hpp>
#include <optiterm/parse.hpp>

#include "generators.hpp"

using namespace optiterm;

namespace {

Term T(const char* s) { return parse_term(s); }
ExtCost fin(std::int64_t n, std::int64_t d = 1) { return ExtCost(Rational(n, d)); }
const ExtCost inf = ExtCost::infinity();

// The worked two-constant example: A over (x1,x2), B over (x2,x3).
struct Worked {
    Domain d{std::vector<std::string>{"d1", "d2"}};
    Binding b;
    Term p{Term::nil()};
    Worked() {
        b.bind("A", 2, {fin(7), fin(5), inf, fin(2)});
        b.bind("B", 2, {fin(9), fin(1), fin(6), fin(13)});
        p = T("(x1)(x2)(x3)(A(x1,x2) || B(x2,x3))");
    }
};

}  // namespace

TEST_CASE("rationals stay normalized and exact") {
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
    CHECK(Rational(-4, -8) == Rational(1, 2));
    CHECK(Rational(7) * Rational(1, 7) == Rational(1));
    CHECK(Rational(1, 3) - Rational(1, 3) == Rational(0));
    CHECK(-Rational(3, 2) == Rational(-3, 2));
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational(3, 2).str() == "3/2");
    CHECK(Rational(-2).str() == "-2");
    CHECK(Rational::parse("0.5") == Rational(1, 2));
    CHECK(Rational::parse("-3/4") == Rational(-3, 4));
    CHECK(Rational::parse("2") == Rational(2));
    CHECK_THROWS_AS(Rational(1, 0), std::invalid_argument);
}

TEST_CASE("extended costs saturate at infinity") {
    CHECK((inf + fin(5)).is_infinite());
    CHECK((fin(5) + inf).is_infinite());
    CHECK(fin(2) + fin(3) == fin(5));
    CHECK(fin(5) < inf);
    CHECK(min(inf, fin(4)) == fin(4));
    CHECK(min(fin(4), fin(3, 2)) == fin(3, 2));
    CHECK(inf.str() == "inf");
    CHECK(ExtCost::parse("inf").is_infinite());
    CHECK(ExtCost::parse("7/2") == fin(7, 2));
}

TEST_CASE("tables index assignments with the first support name most significant") {
    Domain d({"d1", "d2"});
    CostTable t({Name("y"), Name("x")}, d);  // support sorts to (x, y)
    REQUIRE(t.support() == std::vector<Name>{Name("x"), Name("y")});
    REQUIRE(t.size() == 4);
    t.entry(0) = fin(1);  // x=d1 y=d1
    t.entry(1) = fin(2);  // x=d1 y=d2
    t.entry(2) = fin(3);  // x=d2 y=d1
    t.entry(3) = fin(4);  // x=d2 y=d2

    CHECK(t.at({{Name("x"), "d1"}, {Name("y"), "d2"}}) == fin(2));
    CHECK(t.at({{Name("x"), "d2"}, {Name("y"), "d1"}}) == fin(3));
    // Extra names are ignored; missing support names are an error.
    CHECK(t.at({{Name("x"), "d2"}, {Name("y"), "d1"}, {Name("z"), "d2"}}) == fin(3));
    CHECK_THROWS_AS(t.at({{Name("x"), "d1"}}), std::invalid_argument);
    CHECK(t.min_entry() == fin(1));

    CostTable c = CostTable::constant(d, fin(9, 2));
    CHECK(c.support().empty());
    CHECK(c.size() == 1);
    CHECK(c.at({}) == fin(9, 2));
}

TEST_CASE("atom tables reindex positional rows onto sorted support") {
    Domain d({"d1", "d2"});
    Binding b;
    // Rows in argument order: (arg1, arg2) with arg1 most significant.
    b.bind("A", 2, {fin(10), fin(20), fin(30), fin(40)});

    CostTable t = table_atom("A", {Name("y"), Name("x")}, b, d);
    CHECK(t.at({{Name("y"), "d1"}, {Name("x"), "d1"}}) == fin(10));
    CHECK(t.at({{Name("y"), "d1"}, {Name("x"), "d2"}}) == fin(20));
    CHECK(t.at({{Name("y"), "d2"}, {Name("x"), "d1"}}) == fin(30));
    CHECK(t.at({{Name("y"), "d2"}, {Name("x"), "d2"}}) == fin(40));

    CHECK_THROWS_AS(table_atom("A", {Name("x")}, b, d), std::invalid_argument);
    CHECK_THROWS_AS(table_atom("Z", {Name("x"), Name("y")}, b, d), std::invalid_argument);
}

TEST_CASE("sum joins supports and min_out projects one name away") {
    Domain d({"d1", "d2"});
    Binding b;
    b.bind("A", 1, {fin(1), fin(2)});
    b.bind("B", 1, {fin(10), fin(20)});
    CostTable ta = table_atom("A", {Name("x")}, b, d);
    CostTable tb = table_atom("B", {Name("y")}, b, d);

    CostTable s = table_sum(ta, tb);
    CHECK(s.support() == std::vector<Name>{Name("x"), Name("y")});
    CHECK(s.at({{Name("x"), "d2"}, {Name("y"), "d1"}}) == fin(12));

    CostTable m = table_min_out(s, Name("y"));
    CHECK(m.support() == std::vector<Name>{Name("x")});
    CHECK(m.at({{Name("x"), "d1"}}) == fin(11));
    CHECK(m.at({{Name("x"), "d2"}}) == fin(12));
    // Absent names leave the table untouched.
    CHECK(table_min_out(s, Name("z")) == s);

    CHECK_THROWS_AS(table_sum(ta, CostTable::constant(Domain({"e1"}), fin(0))),
                    std::invalid_argument);
}

TEST_CASE("permuting a table renames its support consistently") {
    Domain d({"d1", "d2"});
    Binding b;
    b.bind("A", 1, {fin(3), fin(5)});
    CostTable t = table_atom("A", {Name("x")}, b, d);

    CostTable moved = table_permute(t, Permutation::transpose(Name("x"), Name("y")));
    CHECK(moved.support() == std::vector<Name>{Name("y")});
    CHECK(moved.at({{Name("y"), "d1"}}) == fin(3));
    CHECK(moved.at({{Name("y"), "d2"}}) == fin(5));

    // Evaluating under a permuted term agrees with permuting the table.
    Term moved_term = Term::perm_app(T("A(x)"), Permutation::transpose(Name("x"), Name("y")));
    CHECK(eval_cost(moved_term, b, d) == moved);
}

TEST_CASE("the worked example evaluates to 8 under both forms") {
    Worked w;
    Term canon = canonical_form(w.p);
    Term normal = normal_form(w.p);

    CostEval ec = eval_cost_tree(canon, w.b, w.d);
    CostEval en = eval_cost_tree(normal, w.b, w.d);
    CHECK(ec.table().support().empty());
    CHECK(ec.table().at({}) == fin(8));
    CHECK(en.table().at({}) == fin(8));
    CHECK(ec.peak_support == 2);
    CHECK(en.peak_support == 3);

    // Intermediate tables on the canonical tree.
    const auto& par = *ec.root->children[0];
    const auto& left = *par.children[0];   // (x1)A(x1,x2)
    const auto& right = *par.children[1];  // (x3)B(x2,x3)
    CHECK(left.table.at({{Name("x2"), "d1"}}) == fin(7));
    CHECK(left.table.at({{Name("x2"), "d2"}}) == fin(2));
    CHECK(right.table.at({{Name("x2"), "d1"}}) == fin(1));
    CHECK(right.table.at({{Name("x2"), "d2"}}) == fin(6));
    CHECK(par.table.at({{Name("x2"), "d1"}}) == fin(8));
    CHECK(par.table.at({{Name("x2"), "d2"}}) == fin(8));
}

TEST_CASE("the worked example has exactly two optima") {
    Worked w;
    auto optima = backtrack_optima(canonical_form(w.p), w.b, w.d);
    REQUIRE(optima.size() == 2);
    Assignment first = {{Name("x1"), "d1"}, {Name("x2"), "d1"}, {Name("x3"), "d2"}};
    Assignment second = {{Name("x1"), "d2"}, {Name("x2"), "d2"}, {Name("x3"), "d1"}};
    CHECK(optima[0].first == first);
    CHECK(optima[1].first == second);
    CHECK(optima[0].second == fin(8));
    CHECK(optima[1].second == fin(8));

    // The same optima fall out of the flat form.
    auto flat = backtrack_optima(normal_form(w.p), w.b, w.d);
    REQUIRE(flat.size() == 2);
    CHECK(flat[0].first == first);
    CHECK(flat[1].first == second);
}

TEST_CASE("brute force agrees with the table evaluation on the worked example") {
    Worked w;
    CHECK(brute_force(w.p, w.b, w.d) == eval_cost(w.p, w.b, w.d));
    CHECK(brute_force(canonical_form(w.p), w.b, w.d) == eval_cost(canonical_form(w.p), w.b, w.d));
}

TEST_CASE("brute force refuses oversized instances") {
    Binding b;
    b.bind("A", 1, {fin(0), fin(1)});
    std::vector<Term> atoms;
    for (int i = 1; i <= 13; ++i) atoms.push_back(Term::atom("A", {Name("n" + std::to_string(i))}));
    CHECK_THROWS_AS(brute_force(Term::par_all(atoms), b, Domain({"d1", "d2"})),
                    std::invalid_argument);
}

TEST_CASE("vacuous binders enumerate every value") {
    Binding b;
    b.bind("A", 1, {fin(0), fin(5)});
    Domain d({"d1", "d2"});
    auto optima = backtrack_optima(T("(x)A(y)"), b, d);
    REQUIRE(optima.size() == 2);
    CHECK(optima[0].first == Assignment{{Name("x"), "d1"}, {Name("y"), "d1"}});
    CHECK(optima[1].first == Assignment{{Name("x"), "d2"}, {Name("y"), "d1"}});

    auto trivial = backtrack_optima(T("nil"), b, d);
    REQUIRE(trivial.size() == 1);
    CHECK(trivial[0].first.empty());
    CHECK(trivial[0].second == fin(0));
}

TEST_CASE("infeasible problems stay infinite end to end") {
    Binding b;
    b.bind("A", 1, {inf, inf});
    Domain d({"d1", "d2"});
    CostTable t = eval_cost(T("(x)A(x)"), b, d);
    CHECK(t.at({}).is_infinite());
    CHECK(backtrack_optima(T("(x)A(x)"), b, d).empty());
}

TEST_CASE("parallel evaluation matches the sequential tree") {
    Worked w;
    Term canon = canonical_form(w.p);
    CostEval seq = eval_cost_tree(canon, w.b, w.d, false);
    CostEval par = eval_cost_tree(canon, w.b, w.d, true);
    CHECK(seq.table() == par.table());
    CHECK(seq.peak_support == par.peak_support);
}

TEST_CASE("random terms evaluate like their brute-force tables") {
    std::mt19937 rng(77);
    for (int i = 0; i < 40; ++i) {
        gen::CostInstance inst = gen::random_cost_instance(rng, true);
        CHECK(eval_cost(inst.term, inst.binding, inst.domain) ==
              brute_force(inst.term, inst.binding, inst.domain));
        // Both forms give the same table as the raw term.
        CHECK(eval_cost(normal_form(inst.term), inst.binding, inst.domain) ==
              eval_cost(inst.term, inst.binding, inst.domain));
        CHECK(eval_cost(canonical_form(inst.term), inst.binding, inst.domain) ==
              eval_cost(inst.term, inst.binding, inst.domain));
    }
}
