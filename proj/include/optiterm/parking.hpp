#pragma once

// Parking problems: zones with capacities, cars with per-zone costs, and a
// term giving the system's structure.  An atom Z(x,y) offers zone Z to cars
// x and y; a restriction (x)p commits car x to a spot somewhere inside p.
// Evaluation runs over subset tables, and a backtracking pass recovers the
// car-to-zone assignment behind the optimum.

#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "extcost.hpp"
#include "forms.hpp"
#include "subset_table.hpp"
#include "term.hpp"

namespace optiterm {

struct ParkingInstance {
    std::vector<std::string> zone_order;          // declaration order, for reports
    std::map<std::string, std::size_t> capacity;  // zone -> capacity
    std::vector<Name> cars;
    std::map<Name, std::map<std::string, ExtCost>> cost;  // car -> zone -> cost
    Term term;

    ExtCost cost_of(const Name& car, const std::string& zone) const {
        auto ci = cost.find(car);
        if (ci != cost.end()) {
            auto zi = ci->second.find(zone);
            if (zi != ci->second.end()) return zi->second;
        }
        throw std::invalid_argument("no cost for car '" + car.str() + "' in zone '" + zone +
                                    "'");
    }
};

namespace detail {

inline void collect_atoms(const Term& t, std::vector<Term>& out) {
    switch (t.kind()) {
        case TermKind::Atom: out.push_back(t); return;
        case TermKind::Nil: return;
        case TermKind::Par:
            collect_atoms(t.left(), out);
            collect_atoms(t.right(), out);
            return;
        case TermKind::Restrict:
        case TermKind::PermApp: collect_atoms(t.body(), out); return;
    }
}

inline void collect_binders(const Term& t, std::vector<Name>& out) {
    switch (t.kind()) {
        case TermKind::Atom:
        case TermKind::Nil: return;
        case TermKind::Par:
            collect_binders(t.left(), out);
            collect_binders(t.right(), out);
            return;
        case TermKind::Restrict:
            out.push_back(t.bound());
            collect_binders(t.body(), out);
            return;
        case TermKind::PermApp: collect_binders(t.body(), out); return;
    }
}

}  // namespace detail

// Structural consistency of an instance; throws with a description of the
// first problem found.  Each zone may appear only once (capacity semantics
// for a duplicated zone would be ambiguous), every restricted car must
// actually have a candidate zone, and every (car, zone) pair the term can
// produce needs a declared cost.
inline void validate_parking(const ParkingInstance& inst) {
    std::set<std::string> zones;
    for (const std::string& z : inst.zone_order) {
        if (!zones.insert(z).second)
            throw std::invalid_argument("zone '" + z + "' declared twice");
        if (!inst.capacity.count(z))
            throw std::invalid_argument("zone '" + z + "' has no capacity");
    }
    std::set<Name> cars(inst.cars.begin(), inst.cars.end());
    if (cars.size() != inst.cars.size())
        throw std::invalid_argument("duplicate car declaration");

    if (!is_permapp_free(inst.term))
        throw std::invalid_argument("parking term contains a permutation node");

    std::vector<Term> atoms;
    detail::collect_atoms(inst.term, atoms);
    std::set<std::string> seen_zones;
    NameSet in_atoms;
    for (const Term& a : atoms) {
        if (!zones.count(a.label()))
            throw std::invalid_argument("term uses undeclared zone '" + a.label() + "'");
        if (!seen_zones.insert(a.label()).second)
            throw std::invalid_argument("zone '" + a.label() + "' appears twice in the term");
        for (const Name& x : a.args()) {
            if (!cars.count(x))
                throw std::invalid_argument("term uses undeclared car '" + x.str() + "'");
            inst.cost_of(x, a.label());  // throws when missing
            in_atoms.insert(x);
        }
    }

    std::vector<Name> binders;
    detail::collect_binders(inst.term, binders);
    std::set<Name> bound;
    for (const Name& x : binders) {
        if (!bound.insert(x).second)
            throw std::invalid_argument("car '" + x.str() + "' restricted twice");
        if (!cars.count(x))
            throw std::invalid_argument("restricted name '" + x.str() + "' is not a car");
        if (!in_atoms.count(x))
            throw std::invalid_argument("car '" + x.str() +
                                        "' is restricted but no zone offers it a spot");
    }
}

struct ParkEvalNode {
    Term term;
    SubsetTable table;
    std::vector<std::shared_ptr<const ParkEvalNode>> children;
};

struct ParkEval {
    std::shared_ptr<const ParkEvalNode> root;
    std::size_t peak_support = 0;  // realized exponent of the largest table

    const SubsetTable& table() const { return root->table; }
};

namespace detail {

inline std::shared_ptr<const ParkEvalNode> eval_park_rec(const Term& t,
                                                         const ParkingInstance& inst) {
    auto node = std::make_shared<ParkEvalNode>();
    node->term = t;
    switch (t.kind()) {
        case TermKind::Atom: {
            auto cap = inst.capacity.find(t.label());
            if (cap == inst.capacity.end())
                throw std::invalid_argument("no capacity for zone '" + t.label() + "'");
            std::vector<ExtCost> costs;
            costs.reserve(t.args().size());
            for (const Name& x : t.args()) costs.push_back(inst.cost_of(x, t.label()));
            node->table = park_atom(t.args(), cap->second, costs);
            break;
        }
        case TermKind::Nil:
            node->table = SubsetTable::constant(ExtCost(0));
            break;
        case TermKind::Par: {
            auto l = eval_park_rec(t.left(), inst);
            auto r = eval_park_rec(t.right(), inst);
            node->table = park_parallel(l->table, r->table);
            node->children = {std::move(l), std::move(r)};
            break;
        }
        case TermKind::Restrict: {
            auto c = eval_park_rec(t.body(), inst);
            node->table = park_restrict(c->table, t.bound());
            node->children = {std::move(c)};
            break;
        }
        case TermKind::PermApp: {
            auto c = eval_park_rec(t.body(), inst);
            node->table = park_permute(c->table, t.perm());
            node->children = {std::move(c)};
            break;
        }
    }
    return node;
}

inline std::size_t park_peak(const std::shared_ptr<const ParkEvalNode>& n) {
    std::size_t m = n->table.support().size();
    for (const auto& c : n->children) m = std::max(m, park_peak(c));
    return m;
}

}  // namespace detail

// Evaluates the instance bottom-up over the canonical form of its term
// (the normal form on request, for width comparisons), keeping every
// intermediate table.
inline ParkEval eval_parking_tree(const ParkingInstance& inst, bool use_normal_form = false) {
    validate_parking(inst);
    Term form = use_normal_form ? normal_form(inst.term) : canonical_form(inst.term);
    ParkEval e;
    e.root = detail::eval_park_rec(form, inst);
    e.peak_support = detail::park_peak(e.root);
    return e;
}

inline SubsetTable eval_parking(const ParkingInstance& inst, bool use_normal_form = false) {
    return eval_parking_tree(inst, use_normal_form).root->table;
}

// Evaluation of a bare term against cost and capacity data, without the
// instance-level validation; used to check the algebra laws on arbitrary
// terms, including ones with repeated zones or permutation nodes.
inline SubsetTable eval_park_term(const Term& t, const ParkingInstance& inst) {
    return detail::eval_park_rec(t, inst)->table;
}

struct ParkAssignment {
    std::map<Name, std::string> zone_of;  // parked cars only
    std::map<Name, ExtCost> car_cost;
    ExtCost total;
};

namespace detail {

// Descends the evaluation tree with the set of cars that must park inside
// the current component, committing splits and zones that reproduce the
// stored table values.
inline void park_descend(const std::shared_ptr<const ParkEvalNode>& n, NameSet parked,
                         const ParkingInstance& inst, ParkAssignment& out) {
    switch (n->term.kind()) {
        case TermKind::Atom: {
            for (const Name& x : parked) {
                out.zone_of[x] = n->term.label();
                out.car_cost[x] = inst.cost_of(x, n->term.label());
            }
            return;
        }
        case TermKind::Nil:
            return;
        case TermKind::Par: {
            const SubsetTable& lt = n->children[0]->table;
            const SubsetTable& rt = n->children[1]->table;
            ExtCost want = n->table.at(parked);
            NameSet shared;
            for (const Name& x : parked)
                if (lt.supports(x)) shared.insert(x);
            // First split in subset order that achieves the stored value.
            std::size_t shared_mask = lt.mask_of(shared);
            std::size_t sub = shared_mask;
            while (true) {
                NameSet left = lt.subset_at(sub);
                NameSet right;
                bool fits = true;
                for (const Name& x : parked)
                    if (!left.count(x)) {
                        if (!rt.supports(x)) { fits = false; break; }
                        right.insert(x);
                    }
                if (fits && lt.at(left) + rt.at(right) == want) {
                    park_descend(n->children[0], std::move(left), inst, out);
                    park_descend(n->children[1], std::move(right), inst, out);
                    return;
                }
                if (sub == 0) break;
                sub = (sub - 1) & shared_mask;
            }
            throw std::logic_error("park_backtrack: no split reproduces the table value");
        }
        case TermKind::Restrict: {
            const Name& x = n->term.bound();
            if (n->children[0]->table.supports(x)) parked.insert(x);
            park_descend(n->children[0], std::move(parked), inst, out);
            return;
        }
        case TermKind::PermApp:
            throw std::invalid_argument(
                "park_backtrack: defined only for terms without permutation nodes");
    }
}

}  // namespace detail

// The car-to-zone assignment behind the optimum of a feasible instance;
// throws when the instance is infeasible (optimal cost infinite).  Free
// cars of an open term are left unparked, matching the empty-set query.
inline ParkAssignment park_backtrack(const ParkEval& e, const ParkingInstance& inst) {
    ParkAssignment out;
    out.total = e.table().at({});
    if (out.total.is_infinite())
        throw std::invalid_argument("park_backtrack: instance is infeasible");
    detail::park_descend(e.root, {}, inst, out);
    return out;
}

inline ParkAssignment park_backtrack(const ParkingInstance& inst,
                                     bool use_normal_form = false) {
    return park_backtrack(eval_parking_tree(inst, use_normal_form), inst);
}

namespace detail {

struct ParkEnum {
    std::vector<Name> parked_cars;
    // Candidate atoms per parked car, as indices into `atoms`.
    std::vector<std::vector<std::size_t>> candidates;
    std::vector<Term> atoms;
    const ParkingInstance& inst;

    ExtCost best = ExtCost::infinity();
    std::vector<std::map<Name, std::string>> argmins;
    std::vector<std::size_t> choice;

    void run(std::size_t i) {
        if (i == parked_cars.size()) {
            score();
            return;
        }
        for (std::size_t c : candidates[i]) {
            choice.push_back(c);
            run(i + 1);
            choice.pop_back();
        }
    }

    void score() {
        std::map<std::size_t, std::size_t> load;
        ExtCost sum(0);
        for (std::size_t i = 0; i < choice.size(); ++i) {
            ++load[choice[i]];
            sum = sum + inst.cost_of(parked_cars[i], atoms[choice[i]].label());
        }
        for (const auto& [atom, count] : load)
            if (count > inst.capacity.at(atoms[atom].label())) return;
        if (sum < best) {
            best = sum;
            argmins.clear();
        }
        if (sum == best && !sum.is_infinite()) {
            std::map<Name, std::string> a;
            for (std::size_t i = 0; i < choice.size(); ++i)
                a[parked_cars[i]] = atoms[choice[i]].label();
            argmins.push_back(std::move(a));
        }
    }
};

}  // namespace detail

struct ParkBrute {
    ExtCost best;
    std::vector<std::map<Name, std::string>> argmins;
};

// Direct enumeration of car placements: every restricted car that some
// zone offers a spot parks in one of its candidate zones, cars in X
// likewise, and the rest stay out.  Capacities are per zone occurrence.
// Answers the closed query X = {}; exists as an independent check.
inline ParkBrute park_brute_force(const ParkingInstance& inst, const NameSet& x_cars = {}) {
    Term u = rename_binders_apart(inst.term);
    std::vector<Term> atoms;
    detail::collect_atoms(u, atoms);
    std::vector<Name> binders;
    detail::collect_binders(u, binders);

    if (binders.size() + x_cars.size() > 10 || atoms.size() > 6)
        throw std::invalid_argument("park_brute_force: instance too large to enumerate");

    detail::ParkEnum en{{}, {}, atoms, inst, ExtCost::infinity(), {}, {}};
    NameSet want(binders.begin(), binders.end());
    for (const Name& x : x_cars) want.insert(x);
    for (const Name& x : want) {
        std::vector<std::size_t> cand;
        for (std::size_t i = 0; i < atoms.size(); ++i)
            for (const Name& arg : atoms[i].args())
                if (arg == x) cand.push_back(i);
        // Cars no atom mentions do not constrain the component: a vacuous
        // binder stands aside at cost 0, and a queried name outside the
        // term is ignored, the same extension rule the tables use.
        if (cand.empty()) continue;
        en.parked_cars.push_back(x);
        en.candidates.push_back(std::move(cand));
    }
    en.run(0);
    return {en.best, std::move(en.argmins)};
}

// Whole-table oracle: the brute-force value at every subset of fn(term).
inline SubsetTable park_brute_force_table(const ParkingInstance& inst) {
    NameSet fn = free_names(inst.term);
    SubsetTable t{std::vector<Name>(fn.begin(), fn.end())};
    for (std::size_t mask = 0; mask < t.size(); ++mask)
        t.entry(mask) = park_brute_force(inst, t.subset_at(mask)).best;
    return t;
}

}  // namespace optiterm
