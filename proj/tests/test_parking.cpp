#include <catch2/catch_amalgamated.hpp>

#include <optiterm/parking.hpp>
#include <optiterm/parse.hpp>

#include "generators.hpp"

using namespace optiterm;

namespace {

ExtCost fin(std::int64_t n) { return ExtCost(Rational(n)); }
const ExtCost inf = ExtCost::infinity();
Name N(const char* s) { return Name(s); }

// The worked instance: three zones of capacity two, three cars with
// sparse zone availability.
ParkingInstance worked() {
    ParkingInstance inst;
    inst.zone_order = {"A", "B", "C"};
    inst.capacity = {{"A", 2}, {"B", 2}, {"C", 2}};
    inst.cars = {N("x1"), N("x2"), N("x3")};
    inst.cost[N("x1")] = {{"A", fin(3)}, {"B", inf}, {"C", inf}};
    inst.cost[N("x2")] = {{"A", fin(4)}, {"B", fin(6)}, {"C", inf}};
    inst.cost[N("x3")] = {{"A", inf}, {"B", fin(4)}, {"C", fin(1)}};
    inst.term = parse_term("(x1)(x2)(x3)(A(x1,x2) || B(x2,x3) || C(x3))");
    return inst;
}

std::vector<ExtCost> entries_of(const SubsetTable& t) { return t.entries(); }

}  // namespace

TEST_CASE("subset tables index by sorted support and extend past it") {
    SubsetTable t({N("y"), N("x")}, {fin(0), fin(1), fin(2), fin(3)});
    REQUIRE(t.support() == std::vector<Name>{N("x"), N("y")});
    CHECK(t.entry(0) == fin(0));
    CHECK(t.at({N("x")}) == fin(1));
    CHECK(t.at({N("y")}) == fin(2));
    CHECK(t.at({N("x"), N("y")}) == fin(3));
    // Extension: names outside the support do not change the entry read.
    CHECK(t.at({N("x"), N("z")}) == fin(1));
    CHECK(t.at({N("q")}) == fin(0));
    CHECK(t.mask_of({N("y")}) == 2);
    CHECK(t.subset_at(3) == NameSet{N("x"), N("y")});
    CHECK(t.min_entry() == fin(0));
    CHECK(SubsetTable::constant(fin(9)).at({}) == fin(9));
    CHECK_THROWS_WITH(SubsetTable({N("x")}, {fin(0)}), "subset table entry count mismatch");
    CHECK_THROWS_AS(t.position(N("z")), std::invalid_argument);
}

TEST_CASE("zone tables price subsets and cut off at capacity") {
    SubsetTable t = park_atom({N("x2"), N("x1")}, 1, {fin(10), fin(3)});
    CHECK(t.at({}) == fin(0));
    CHECK(t.at({N("x1")}) == fin(3));
    CHECK(t.at({N("x2")}) == fin(10));
    CHECK(t.at({N("x1"), N("x2")}).is_infinite());

    SubsetTable zero = park_atom({N("x1")}, 0, {fin(5)});
    CHECK(zero.at({}) == fin(0));
    CHECK(zero.at({N("x1")}).is_infinite());

    CHECK_THROWS_WITH(park_atom({N("x1"), N("x1")}, 2, {fin(1), fin(2)}),
                      "park_atom: repeated car 'x1'");
    CHECK_THROWS_WITH(park_atom({N("x1")}, 2, {}), "park_atom: one cost per car required");
}

TEST_CASE("the worked instance builds the published tables") {
    ParkingInstance inst = worked();
    ParkEval e = eval_parking_tree(inst);

    // Canonical tree: (x2)((x1)A(x1,x2) || (x3)(B(x2,x3) || C(x3))).
    const auto& root = *e.root;                 // (x2)...
    const auto& par = *root.children[0];        // top parallel
    const auto& resA = *par.children[0];        // (x1)A(x1,x2)
    const auto& atomA = *resA.children[0];      // A(x1,x2)
    const auto& resBC = *par.children[1];       // (x3)(B || C)
    const auto& parBC = *resBC.children[0];     // B(x2,x3) || C(x3)
    const auto& atomB = *parBC.children[0];
    const auto& atomC = *parBC.children[1];

    CHECK(entries_of(atomA.table) == std::vector<ExtCost>{fin(0), fin(3), fin(4), fin(7)});
    CHECK(entries_of(atomB.table) == std::vector<ExtCost>{fin(0), fin(6), fin(4), fin(10)});
    CHECK(entries_of(atomC.table) == std::vector<ExtCost>{fin(0), fin(1)});
    CHECK(entries_of(resA.table) == std::vector<ExtCost>{fin(3), fin(7)});
    CHECK(entries_of(parBC.table) == std::vector<ExtCost>{fin(0), fin(6), fin(1), fin(7)});
    CHECK(entries_of(resBC.table) == std::vector<ExtCost>{fin(1), fin(7)});
    CHECK(entries_of(par.table) == std::vector<ExtCost>{fin(4), fin(8)});
    CHECK(entries_of(root.table) == std::vector<ExtCost>{fin(8)});
    CHECK(e.peak_support == 2);

    // The candidate sums behind the interesting parallel entries, in
    // examination order.
    std::size_t m_x3 = parBC.table.mask_of({N("x3")});
    CHECK(park_split_candidates(atomB.table, atomC.table, m_x3) ==
          std::vector<ExtCost>{fin(4), fin(1)});
    std::size_t m_both = parBC.table.mask_of({N("x2"), N("x3")});
    CHECK(park_split_candidates(atomB.table, atomC.table, m_both) ==
          std::vector<ExtCost>{fin(10), fin(7)});
    std::size_t m_x2 = par.table.mask_of({N("x2")});
    CHECK(park_split_candidates(resA.table, resBC.table, m_x2) ==
          std::vector<ExtCost>{fin(8), fin(10)});
}

TEST_CASE("the worked instance parks for 8 under either form") {
    ParkingInstance inst = worked();
    CHECK(eval_parking(inst).at({}) == fin(8));
    CHECK(eval_parking(inst, true).at({}) == fin(8));
    CHECK(eval_parking_tree(inst, true).peak_support == 3);

    ParkAssignment a = park_backtrack(inst);
    CHECK(a.total == fin(8));
    CHECK(a.zone_of ==
          std::map<Name, std::string>{{N("x1"), "A"}, {N("x2"), "A"}, {N("x3"), "C"}});
    CHECK(a.car_cost.at(N("x1")) == fin(3));
    CHECK(a.car_cost.at(N("x2")) == fin(4));
    CHECK(a.car_cost.at(N("x3")) == fin(1));

    ParkBrute b = park_brute_force(inst);
    CHECK(b.best == fin(8));
    REQUIRE(b.argmins.size() == 1);
    CHECK(b.argmins[0] == a.zone_of);
}

TEST_CASE("restriction and permutation act on tables as on terms") {
    SubsetTable t({N("x1"), N("x2")}, {fin(0), fin(3), fin(4), fin(7)});
    SubsetTable r = park_restrict(t, N("x1"));
    CHECK(r.support() == std::vector<Name>{N("x2")});
    CHECK(entries_of(r) == std::vector<ExtCost>{fin(3), fin(7)});
    CHECK(park_restrict(t, N("q")) == t);

    SubsetTable moved = park_permute(t, Permutation::transpose(N("x1"), N("x9")));
    CHECK(moved.support() == std::vector<Name>{N("x2"), N("x9")});
    CHECK(moved.at({N("x9")}) == fin(3));
    CHECK(moved.at({N("x2"), N("x9")}) == fin(7));
    CHECK(park_permute(t, Permutation()) == t);
}

TEST_CASE("algebra laws hold on generated environments") {
    std::mt19937 rng(83);
    for (int i = 0; i < 30; ++i) {
        ParkingInstance env = gen::axiom_parking_env(rng);
        gen::TermConfig cfg;
        cfg.labels = {"A", "B", "C"};
        cfg.arity = {2, 2, 1};
        Term t = gen::random_term(rng, cfg);

        // Unit, restriction of an absent name, permutation compatibility.
        CHECK(eval_park_term(Term::par(t, Term::nil()), env) == eval_park_term(t, env));
        CHECK(eval_park_term(Term::restrict(N("q"), t), env) == eval_park_term(t, env));
        Permutation pi = gen::random_perm(rng, gen::name_pool(8));
        CHECK(eval_park_term(Term::perm_app(t, pi), env) ==
              park_permute(eval_park_term(t, env), pi));
    }
}

TEST_CASE("instance validation names the defect") {
    ParkingInstance inst = worked();
    inst.capacity.erase("C");
    CHECK_THROWS_WITH(validate_parking(inst), "zone 'C' has no capacity");

    inst = worked();
    inst.cars.push_back(N("x1"));
    CHECK_THROWS_WITH(validate_parking(inst), "duplicate car declaration");

    inst = worked();
    inst.term = parse_term("(x1)(x2)(x3)(A(x1,x2) || D(x3))");
    CHECK_THROWS_WITH(validate_parking(inst), "term uses undeclared zone 'D'");

    inst = worked();
    inst.term = parse_term("(x1)(A(x1) || A(x2))");
    CHECK_THROWS_WITH(validate_parking(inst), "zone 'A' appears twice in the term");

    inst = worked();
    inst.term = parse_term("A(x9)");
    CHECK_THROWS_WITH(validate_parking(inst), "term uses undeclared car 'x9'");

    inst = worked();
    inst.term = parse_term("(x1)(x1)A(x1,x2)");
    CHECK_THROWS_WITH(validate_parking(inst), "car 'x1' restricted twice");

    inst = worked();
    inst.term = parse_term("(q)A(x1,x2)");
    CHECK_THROWS_WITH(validate_parking(inst), "restricted name 'q' is not a car");

    inst = worked();
    inst.term = parse_term("(x3)A(x1,x2)");
    CHECK_THROWS_WITH(validate_parking(inst),
                      "car 'x3' is restricted but no zone offers it a spot");

    inst = worked();
    inst.term = Term::perm_app(inst.term, Permutation());
    CHECK_THROWS_WITH(validate_parking(inst), "parking term contains a permutation node");
}

TEST_CASE("infeasible instances report infinity and refuse to backtrack") {
    ParkingInstance inst = worked();
    inst.capacity["A"] = 0;  // x1 can only park in A
    SubsetTable t = eval_parking(inst);
    CHECK(t.at({}).is_infinite());
    CHECK_THROWS_WITH(park_backtrack(inst), "park_backtrack: instance is infeasible");
    CHECK(park_brute_force(inst).best.is_infinite());
}

TEST_CASE("random instances agree with direct enumeration") {
    std::mt19937 rng(101);
    for (int i = 0; i < 60; ++i) {
        ParkingInstance inst = gen::random_parking(rng);
        SubsetTable canon = eval_parking(inst);
        SubsetTable flat = eval_parking(inst, true);
        CHECK(canon == flat);
        CHECK(canon == park_brute_force_table(inst));

        ExtCost total = canon.at({});
        if (!total.is_infinite()) {
            ParkAssignment a = park_backtrack(inst);
            CHECK(a.total == total);
            ParkBrute b = park_brute_force(inst);
            CHECK(b.best == total);
            CHECK(std::find(b.argmins.begin(), b.argmins.end(), a.zone_of) != b.argmins.end());
        }
    }
}
