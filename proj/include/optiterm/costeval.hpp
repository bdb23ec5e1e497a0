#pragma once

// Bottom-up min-plus evaluation of a term to a cost table, one table per
// AST node.  Keeping the per-node tables makes a top-down descent possible
// afterwards to recover every assignment that achieves the optimum, and a
// brute-force evaluator provides an independent check.

#include <cstddef>
#include <future>
#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "cost_table.hpp"
#include "forms.hpp"
#include "term.hpp"

namespace optiterm {

struct CostEvalNode {
    Term term;
    CostTable table;
    std::vector<std::shared_ptr<const CostEvalNode>> children;
};

struct CostEval {
    std::shared_ptr<const CostEvalNode> root;
    // Largest support among all intermediate tables: the realized width of
    // this evaluation order.
    std::size_t peak_support = 0;

    const CostTable& table() const { return root->table; }
};

namespace detail {

inline std::shared_ptr<const CostEvalNode> eval_cost_rec(const Term& t, const Binding& b,
                                                         const Domain& d, int spawn_depth) {
    auto node = std::make_shared<CostEvalNode>();
    node->term = t;
    switch (t.kind()) {
        case TermKind::Atom:
            node->table = table_atom(t.label(), t.args(), b, d);
            break;
        case TermKind::Nil:
            node->table = CostTable::constant(d, ExtCost(0));
            break;
        case TermKind::Par: {
            std::shared_ptr<const CostEvalNode> l, r;
            if (spawn_depth > 0) {
                // Sibling subterms share nothing mutable, so they may be
                // evaluated concurrently.
                auto lf = std::async(std::launch::async, [&] {
                    return eval_cost_rec(t.left(), b, d, spawn_depth - 1);
                });
                r = eval_cost_rec(t.right(), b, d, spawn_depth - 1);
                l = lf.get();
            } else {
                l = eval_cost_rec(t.left(), b, d, 0);
                r = eval_cost_rec(t.right(), b, d, 0);
            }
            node->table = table_sum(l->table, r->table);
            node->children = {std::move(l), std::move(r)};
            break;
        }
        case TermKind::Restrict: {
            auto c = eval_cost_rec(t.body(), b, d, spawn_depth);
            node->table = table_min_out(c->table, t.bound());
            node->children = {std::move(c)};
            break;
        }
        case TermKind::PermApp: {
            auto c = eval_cost_rec(t.body(), b, d, spawn_depth);
            node->table = table_permute(c->table, t.perm());
            node->children = {std::move(c)};
            break;
        }
    }
    return node;
}

inline std::size_t peak_support(const std::shared_ptr<const CostEvalNode>& n) {
    std::size_t m = n->table.support().size();
    for (const auto& c : n->children) m = std::max(m, peak_support(c));
    return m;
}

}  // namespace detail

// Evaluates t bottom-up, keeping the table of every subterm.  With
// `parallel`, sibling branches near the root run as concurrent tasks.
inline CostEval eval_cost_tree(const Term& t, const Binding& b, const Domain& d,
                               bool parallel = false) {
    CostEval e;
    e.root = detail::eval_cost_rec(t, b, d, parallel ? 2 : 0);
    e.peak_support = detail::peak_support(e.root);
    return e;
}

inline CostTable eval_cost(const Term& t, const Binding& b, const Domain& d) {
    return eval_cost_tree(t, b, d).root->table;
}

using Optimum = std::pair<Assignment, ExtCost>;

namespace detail {

// Extends each partial assignment with the values of names bound below
// this node, keeping only extensions that reproduce the stored table
// entries.  On entry every assignment in `acc` covers the node's support.
inline void backtrack_rec(const std::shared_ptr<const CostEvalNode>& n,
                          std::vector<Assignment>& acc, const Domain& d) {
    if (acc.empty()) return;
    switch (n->term.kind()) {
        case TermKind::Atom:
        case TermKind::Nil:
            return;
        case TermKind::Par: {
            backtrack_rec(n->children[0], acc, d);
            backtrack_rec(n->children[1], acc, d);
            return;
        }
        case TermKind::Restrict: {
            const Name& x = n->term.bound();
            const CostTable& inner = n->children[0]->table;
            bool vacuous = true;
            for (const Name& s : inner.support())
                if (s == x) { vacuous = false; break; }
            std::vector<Assignment> next;
            for (const Assignment& a : acc) {
                if (vacuous) {
                    // The cost does not depend on x; every value is optimal.
                    for (std::size_t v = 0; v < d.size(); ++v) {
                        Assignment e = a;
                        e[x] = d.value(v);
                        next.push_back(std::move(e));
                    }
                } else {
                    ExtCost best = n->table.at(a);
                    for (std::size_t v = 0; v < d.size(); ++v) {
                        Assignment e = a;
                        e[x] = d.value(v);
                        if (inner.at(e) == best) next.push_back(std::move(e));
                    }
                }
            }
            acc = std::move(next);
            backtrack_rec(n->children[0], acc, d);
            return;
        }
        case TermKind::PermApp:
            throw std::invalid_argument(
                "backtrack_optima: defined only for terms without permutation nodes");
    }
}

}  // namespace detail

// All assignments, over free and bound names alike, that achieve the
// table's minimum; empty when the problem is infeasible (all entries
// infinite).  Results are sorted by name-wise domain order and truncated
// to `cap`.  Binder names must be pairwise distinct; backtrack through
// rename_binders_apart when they are not.
inline std::vector<Optimum> backtrack_optima(const CostEval& e, const Domain& d,
                                             std::size_t cap = 1000) {
    const CostTable& root = e.root->table;
    ExtCost best = root.min_entry();
    if (best.is_infinite()) return {};

    std::vector<Assignment> acc;
    for (std::size_t index = 0; index < root.size(); ++index)
        if (root.entry(index) == best) acc.push_back(root.assignment_at(index));
    detail::backtrack_rec(e.root, acc, d);

    auto key = [&](const Assignment& a) {
        std::vector<std::size_t> digits;
        digits.reserve(a.size());
        for (const auto& [n, v] : a) digits.push_back(d.index_of(v));
        return digits;
    };
    std::sort(acc.begin(), acc.end(),
              [&](const Assignment& a, const Assignment& b) { return key(a) < key(b); });
    if (acc.size() > cap) acc.resize(cap);

    std::vector<Optimum> out;
    out.reserve(acc.size());
    for (Assignment& a : acc) out.push_back({std::move(a), best});
    return out;
}

inline std::vector<Optimum> backtrack_optima(const HierTerm& t, const Binding& b,
                                             const Domain& d, std::size_t cap = 1000) {
    Term u = rename_binders_apart(t);
    return backtrack_optima(eval_cost_tree(u, b, d), d, cap);
}

namespace detail {

inline ExtCost brute_eval(const Term& t, const Binding& b, const Domain& d,
                          std::map<Name, std::string>& rho) {
    switch (t.kind()) {
        case TermKind::Atom: {
            const BaseCost& base = b.at(t.label());
            std::size_t index = 0;
            for (const Name& n : t.args()) {
                auto it = rho.find(n);
                if (it == rho.end())
                    throw std::logic_error("brute_eval: unassigned name " + n.str());
                index = index * d.size() + d.index_of(it->second);
            }
            return base.entries.at(index);
        }
        case TermKind::Nil: return ExtCost(0);
        case TermKind::Par: return brute_eval(t.left(), b, d, rho) + brute_eval(t.right(), b, d, rho);
        case TermKind::Restrict: {
            const Name& x = t.bound();
            auto old = rho.find(x);
            bool had = old != rho.end();
            std::string saved = had ? old->second : std::string();
            ExtCost m = ExtCost::infinity();
            for (std::size_t v = 0; v < d.size(); ++v) {
                rho[x] = d.value(v);
                m = min(m, brute_eval(t.body(), b, d, rho));
            }
            if (had)
                rho[x] = saved;
            else
                rho.erase(x);
            return m;
        }
        case TermKind::PermApp: {
            // Reading through pi: the body sees rho at pi(n) for each n.
            std::map<Name, std::string> pre;
            NameSet inner = free_names(t.body());
            for (const Name& n : inner) {
                auto it = rho.find(t.perm()(n));
                if (it != rho.end()) pre[n] = it->second;
            }
            return brute_eval(t.body(), b, d, pre);
        }
    }
    return ExtCost::infinity();
}

}  // namespace detail

// Literal evaluation of the defining equations, enumerating assignments
// without any table reuse.  Guarded to small instances; exists as an
// independent check of eval_cost.
inline CostTable brute_force(const Term& t, const Binding& b, const Domain& d) {
    NameSet vars = all_names(t);
    if (vars.size() > 12 || d.size() > 3)
        throw std::invalid_argument("brute_force: instance too large to enumerate");

    NameSet free = free_names(t);
    CostTable r(std::vector<Name>(free.begin(), free.end()), d);
    for (std::size_t index = 0; index < r.size(); ++index) {
        std::map<Name, std::string> rho = r.assignment_at(index);
        r.entry(index) = detail::brute_eval(t, b, d, rho);
    }
    return r;
}

}  // namespace optiterm
