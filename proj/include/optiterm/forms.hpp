#pragma once

// Rewriting up to structural congruence: normal form (all restrictions at
// the top of a flat parallel composition of atoms), canonical form
// (restrictions pushed maximally inward across parallel composition), and
// the width measure driving the choice between them.

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "term.hpp"

namespace optiterm {

// A term with every permutation already pushed through (no PermApp nodes).
// normal_form and canonical_form return terms of this shape.
using HierTerm = Term;

inline bool is_hierarchical(const Term& t) { return is_permapp_free(t); }

namespace detail {

// Flattens nested parallel compositions into a factor list, left to right.
// nil factors are dropped; a lone nil yields the empty list.
inline void flatten_par(const Term& t, std::vector<Term>& out) {
    if (t.is(TermKind::Par)) {
        flatten_par(t.left(), out);
        flatten_par(t.right(), out);
    } else if (!t.is(TermKind::Nil)) {
        out.push_back(t);
    }
}

inline std::vector<Term> par_factors(const Term& t) {
    std::vector<Term> out;
    flatten_par(t, out);
    return out;
}

inline void collect_atom_labels(const Term& t, std::vector<std::string>& out) {
    switch (t.kind()) {
        case TermKind::Atom: out.push_back(t.label()); return;
        case TermKind::Nil: return;
        case TermKind::Par:
            collect_atom_labels(t.left(), out);
            collect_atom_labels(t.right(), out);
            return;
        case TermKind::Restrict:
        case TermKind::PermApp: collect_atom_labels(t.body(), out); return;
    }
}

// Factor order used whenever a parallel composition is rebuilt: by the
// sorted multiset of atom labels inside the factor, then by the
// alpha-invariant key.  Stable under alpha renaming of bound names.
struct FactorKey {
    std::vector<std::string> labels;
    std::string key;

    explicit FactorKey(const Term& t) : key(alpha_canonical_key(t)) {
        collect_atom_labels(t, labels);
        std::sort(labels.begin(), labels.end());
    }

    friend bool operator<(const FactorKey& a, const FactorKey& b) {
        if (a.labels != b.labels) return a.labels < b.labels;
        return a.key < b.key;
    }
};

inline void sort_factors(std::vector<Term>& fs) {
    std::stable_sort(fs.begin(), fs.end(), [](const Term& a, const Term& b) {
        return FactorKey(a) < FactorKey(b);
    });
}

// Collects the atoms and the pre-order binder list of a term whose binders
// are already renamed apart.
inline void strip(const Term& t, std::vector<Name>& binders, std::vector<Term>& atoms) {
    switch (t.kind()) {
        case TermKind::Atom: atoms.push_back(t); return;
        case TermKind::Nil: return;
        case TermKind::Par:
            strip(t.left(), binders, atoms);
            strip(t.right(), binders, atoms);
            return;
        case TermKind::Restrict:
            binders.push_back(t.bound());
            strip(t.body(), binders, atoms);
            return;
        case TermKind::PermApp:
            throw std::logic_error("strip: unexpected permutation node");
    }
}

}  // namespace detail

// Rewrites t to (x1)...(xk)(A1 || ... || An): permutations pushed through,
// binders renamed apart and hoisted above a flat atom list, binders whose
// name occurs in no atom dropped.  Atoms are sorted by label and then by
// argument names (bound names compared by binder position, so the order is
// alpha-invariant); binders are ordered by first occurrence in the sorted
// atom list.  Deterministic, idempotent, and congruence preserving.
inline HierTerm normal_form(const Term& t) {
    Term u = rename_binders_apart(apply_perm(t, Permutation::identity()));

    std::vector<Name> binders;
    std::vector<Term> atoms;
    detail::strip(u, binders, atoms);

    // Binder position in pre-order; used as the alpha-invariant sort handle
    // for bound argument names.
    std::map<Name, std::size_t> binder_pos;
    for (std::size_t i = 0; i < binders.size(); ++i) binder_pos.emplace(binders[i], i);

    using ArgKey = std::pair<int, std::pair<std::size_t, std::string>>;
    auto atom_key = [&](const Term& a) {
        std::vector<ArgKey> ks;
        for (const Name& n : a.args()) {
            auto it = binder_pos.find(n);
            if (it == binder_pos.end())
                ks.push_back({0, {0, n.str()}});
            else
                ks.push_back({1, {it->second, ""}});
        }
        return std::make_pair(a.label(), ks);
    };
    std::stable_sort(atoms.begin(), atoms.end(),
                     [&](const Term& a, const Term& b) { return atom_key(a) < atom_key(b); });

    // Keep a binder only if its name occurs in some atom, ordered by first
    // occurrence across the sorted atom list.
    std::vector<Name> ordered;
    {
        NameSet pending(binders.begin(), binders.end());
        for (const Term& a : atoms)
            for (const Name& n : a.args())
                if (pending.erase(n)) ordered.push_back(n);
    }

    return Term::restrict_all(ordered, Term::par_all(atoms));
}

namespace detail {

Term push_restrict(const Name& x, std::vector<Term> factors);

// Restriction (x) placed over exactly the factors that mention x; the rest
// are hoisted out.  A lone restricted factor gets x pushed underneath its
// own binder, which repeats the split one level deeper.
inline std::vector<Term> group_under(const Name& x, std::vector<Term> factors) {
    std::vector<Term> with, without;
    for (Term& f : factors)
        (free_names(f).count(x) ? with : without).push_back(std::move(f));
    if (with.empty()) return without;  // vacuous binder, dropped

    Term grouped = with.size() == 1 && with[0].is(TermKind::Restrict)
                       ? push_restrict(x, {with[0]})
                       : Term::restrict(x, Term::par_all(with));
    without.push_back(grouped);
    sort_factors(without);
    return without;
}

inline Term push_restrict(const Name& x, std::vector<Term> factors) {
    // factors is a single Restrict(y, body) with x free in it; binders are
    // renamed apart, so x != y and the two may be swapped before x descends
    // into body's own factor split.
    Term f = factors[0];
    const Name& y = f.bound();
    std::vector<Term> regrouped = group_under(x, par_factors(f.body()));
    return Term::restrict(y, Term::par_all(regrouped));
}

}  // namespace detail

// Pushes every restriction as deep as parallel structure allows, starting
// from the normal form and moving binders inward innermost first.  In the
// result no restriction can move further: each Restrict(x, p1 || ... || pk)
// has x free in every pi.  Deterministic representative of the rewrite
// relation; see scope_extension_step for single steps.
inline HierTerm canonical_form(const Term& t) {
    Term nf = normal_form(t);

    std::vector<Name> binders;
    std::vector<Term> factors;
    {
        Term cur = nf;
        while (cur.is(TermKind::Restrict)) {
            binders.push_back(cur.bound());
            cur = cur.body();
        }
        factors = detail::par_factors(cur);
    }
    detail::sort_factors(factors);

    for (std::size_t i = binders.size(); i-- > 0;)
        factors = detail::group_under(binders[i], std::move(factors));

    return Term::par_all(factors);
}

// Width measure: the largest atom arity or intermediate interface met in a
// bottom-up evaluation.
//   w(A(x1..xn)) = n
//   w(nil)       = 0
//   w((x)p)      = w(p)
//   w(p || q)    = max(w(p), w(q), |fn(p || q)|)
// Computed on the tree as written; parallel spines are read right
// associated, which congruence makes unobservable downstream.
inline std::size_t complexity(const HierTerm& t) {
    switch (t.kind()) {
        case TermKind::Atom: return t.args().size();
        case TermKind::Nil: return 0;
        case TermKind::Restrict: return complexity(t.body());
        case TermKind::Par: {
            std::size_t l = complexity(t.left());
            std::size_t r = complexity(t.right());
            return std::max({l, r, free_names(t).size()});
        }
        case TermKind::PermApp:
            throw std::invalid_argument(
                "complexity: defined only for terms without permutation nodes");
    }
    return 0;
}

// One scope-extension rewrite at `path`: the subterm there must be
// (x)(p1 || ... || pk).  The factors not mentioning x move out of the
// scope; the binder stays over the rest, or disappears when no factor
// mentions x.  Fails if every factor mentions x (no rewrite applies) or
// the subterm is not a restricted parallel composition.
inline HierTerm scope_extension_step(const HierTerm& t, const TermPath& path) {
    Term sub = subterm_at(t, path);
    if (!sub.is(TermKind::Restrict) || !sub.body().is(TermKind::Par))
        throw std::invalid_argument(
            "scope_extension_step: subterm is not a restricted parallel composition");
    const Name& x = sub.bound();
    std::vector<Term> with, without;
    for (const Term& f : detail::par_factors(sub.body())) {
        (free_names(f).count(x) ? with : without).push_back(f);
    }
    if (without.empty())
        throw std::invalid_argument("scope_extension_step: '" + x.str() +
                                    "' is free in every parallel component");
    Term replacement = with.empty()
                           ? Term::par_all(without)
                           : Term::par(Term::restrict(x, Term::par_all(with)),
                                       Term::par_all(without));
    return replace_at(t, path, replacement);
}

}  // namespace optiterm
