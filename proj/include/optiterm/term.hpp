#pragma once

// Term AST of the optimization signature.
//
//   p, q := A(x1,...,xn) | nil | p || q | (x)p | p pi
//
// Terms are immutable and shared; every operation below is a pure function.
// Restriction (x)p marks x for elimination inside p; permutation application
// p pi is kept as an explicit node so the permutation axioms are testable as
// rewrites, and apply_perm eliminates such nodes eagerly.

#include <cassert>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "names.hpp"
#include "perm.hpp"

namespace optiterm {

// Constant labels with arities.  The empty problem `nil` is a dedicated
// term node, never a declared constant.
class Signature {
public:
    Signature() = default;
    Signature(std::initializer_list<std::pair<std::string, std::size_t>> cs) {
        for (const auto& [l, a] : cs) declare(l, a);
    }

    void declare(const std::string& label, std::size_t arity) {
        if (!Name::valid(label))
            throw std::invalid_argument("invalid constant label: '" + label + "'");
        auto [it, fresh] = arity_.emplace(label, arity);
        if (!fresh && it->second != arity)
            throw std::invalid_argument("constant '" + label + "' redeclared with different arity");
    }

    bool declared(const std::string& label) const { return arity_.count(label) != 0; }

    std::size_t arity(const std::string& label) const {
        auto it = arity_.find(label);
        if (it == arity_.end())
            throw std::invalid_argument("unknown constant: '" + label + "'");
        return it->second;
    }

    const std::map<std::string, std::size_t>& constants() const { return arity_; }

private:
    std::map<std::string, std::size_t> arity_;
};

enum class TermKind { Atom, Nil, Par, Restrict, PermApp };

class Term;

struct TermNode {
    TermKind kind;
    // Atom
    std::string label;
    std::vector<Name> args;
    // Par
    std::shared_ptr<const TermNode> left, right;
    // Restrict
    Name bound;
    // Restrict / PermApp share the body slot
    std::shared_ptr<const TermNode> body;
    // PermApp
    Permutation perm;
};

class Term {
public:
    Term() : node_(nil().node_) {}

    static Term atom(const std::string& label, const std::vector<Name>& args) {
        for (std::size_t i = 0; i < args.size(); ++i)
            for (std::size_t j = i + 1; j < args.size(); ++j)
                if (args[i] == args[j])
                    throw std::invalid_argument("repeated atom argument '" + args[i].str() +
                                                "' in " + label);
        auto n = std::make_shared<TermNode>();
        n->kind = TermKind::Atom;
        n->label = label;
        n->args = args;
        return Term(std::move(n));
    }

    static Term nil() {
        static const std::shared_ptr<const TermNode> n = [] {
            auto m = std::make_shared<TermNode>();
            m->kind = TermKind::Nil;
            return m;
        }();
        return Term(n);
    }

    static Term par(const Term& l, const Term& r) {
        auto n = std::make_shared<TermNode>();
        n->kind = TermKind::Par;
        n->left = l.node_;
        n->right = r.node_;
        return Term(std::move(n));
    }

    // Right-associated parallel composition of a factor list; nil when empty.
    static Term par_all(const std::vector<Term>& factors) {
        if (factors.empty()) return nil();
        Term acc = factors.back();
        for (std::size_t i = factors.size() - 1; i-- > 0;) acc = par(factors[i], acc);
        return acc;
    }

    static Term restrict(const Name& x, const Term& body) {
        auto n = std::make_shared<TermNode>();
        n->kind = TermKind::Restrict;
        n->bound = x;
        n->body = body.node_;
        return Term(std::move(n));
    }

    static Term restrict_all(const std::vector<Name>& xs, const Term& body) {
        Term acc = body;
        for (std::size_t i = xs.size(); i-- > 0;) acc = restrict(xs[i], acc);
        return acc;
    }

    static Term perm_app(const Term& body, const Permutation& pi) {
        auto n = std::make_shared<TermNode>();
        n->kind = TermKind::PermApp;
        n->body = body.node_;
        n->perm = pi;
        return Term(std::move(n));
    }

    TermKind kind() const { return node_->kind; }
    bool is(TermKind k) const { return node_->kind == k; }

    const std::string& label() const { expect(TermKind::Atom); return node_->label; }
    const std::vector<Name>& args() const { expect(TermKind::Atom); return node_->args; }
    Term left() const { expect(TermKind::Par); return Term(node_->left); }
    Term right() const { expect(TermKind::Par); return Term(node_->right); }
    const Name& bound() const { expect(TermKind::Restrict); return node_->bound; }
    Term body() const {
        assert(node_->kind == TermKind::Restrict || node_->kind == TermKind::PermApp);
        return Term(node_->body);
    }
    const Permutation& perm() const { expect(TermKind::PermApp); return node_->perm; }

    const TermNode* node() const { return node_.get(); }

    friend bool operator==(const Term& a, const Term& b) { return equal(a.node_, b.node_); }
    friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }

private:
    explicit Term(std::shared_ptr<const TermNode> n) : node_(std::move(n)) {}

    void expect(TermKind k) const {
        if (node_->kind != k) throw std::logic_error("term node kind mismatch");
    }

    static bool equal(const std::shared_ptr<const TermNode>& a,
                      const std::shared_ptr<const TermNode>& b) {
        if (a == b) return true;
        if (a->kind != b->kind) return false;
        switch (a->kind) {
            case TermKind::Atom: return a->label == b->label && a->args == b->args;
            case TermKind::Nil: return true;
            case TermKind::Par: return equal(a->left, b->left) && equal(a->right, b->right);
            case TermKind::Restrict: return a->bound == b->bound && equal(a->body, b->body);
            case TermKind::PermApp: return a->perm == b->perm && equal(a->body, b->body);
        }
        return false;
    }

    std::shared_ptr<const TermNode> node_;
};

// fn(p) of the free-name equations; fn(p pi) = pi(fn(p)).
inline NameSet free_names(const Term& t) {
    switch (t.kind()) {
        case TermKind::Atom: {
            NameSet r;
            for (const Name& n : t.args()) r.insert(n);
            return r;
        }
        case TermKind::Nil: return {};
        case TermKind::Par: return set_union(free_names(t.left()), free_names(t.right()));
        case TermKind::Restrict: return set_minus(free_names(t.body()), t.bound());
        case TermKind::PermApp: return t.perm().apply(free_names(t.body()));
    }
    return {};
}

// Every name that occurs anywhere in the term: atom arguments, binders,
// and both sides of embedded permutations.  Used to seed fresh-name
// generation.
inline void collect_all_names(const Term& t, NameSet& out) {
    switch (t.kind()) {
        case TermKind::Atom:
            for (const Name& n : t.args()) out.insert(n);
            return;
        case TermKind::Nil: return;
        case TermKind::Par:
            collect_all_names(t.left(), out);
            collect_all_names(t.right(), out);
            return;
        case TermKind::Restrict:
            out.insert(t.bound());
            collect_all_names(t.body(), out);
            return;
        case TermKind::PermApp:
            for (const auto& [k, v] : t.perm().moved()) {
                out.insert(k);
                out.insert(v);
            }
            collect_all_names(t.body(), out);
            return;
    }
}

inline NameSet all_names(const Term& t) {
    NameSet r;
    collect_all_names(t, r);
    return r;
}

inline bool is_permapp_free(const Term& t) {
    switch (t.kind()) {
        case TermKind::Atom:
        case TermKind::Nil: return true;
        case TermKind::Par: return is_permapp_free(t.left()) && is_permapp_free(t.right());
        case TermKind::Restrict: return is_permapp_free(t.body());
        case TermKind::PermApp: return false;
    }
    return true;
}

inline std::size_t atom_count(const Term& t) {
    switch (t.kind()) {
        case TermKind::Atom: return 1;
        case TermKind::Nil: return 0;
        case TermKind::Par: return atom_count(t.left()) + atom_count(t.right());
        case TermKind::Restrict:
        case TermKind::PermApp: return atom_count(t.body());
    }
    return 0;
}

namespace detail {

inline void render(const Term& t, std::ostream& os);

// A factor of a parallel composition: parenthesized when itself a `||`.
inline void render_factor(const Term& t, std::ostream& os) {
    if (t.is(TermKind::Par)) {
        os << '(';
        render(t, os);
        os << ')';
    } else {
        render(t, os);
    }
}

inline void render(const Term& t, std::ostream& os) {
    switch (t.kind()) {
        case TermKind::Atom: {
            os << t.label() << '(';
            bool first = true;
            for (const Name& n : t.args()) {
                if (!first) os << ',';
                os << n.str();
                first = false;
            }
            os << ')';
            return;
        }
        case TermKind::Nil: os << "nil"; return;
        case TermKind::Par:
            // "||" parses right-associative, so a right-nested chain needs
            // no parentheses of its own.
            render_factor(t.left(), os);
            os << " || ";
            render(t.right(), os);
            return;
        case TermKind::Restrict:
            os << '(' << t.bound().str() << ')';
            render_factor(t.body(), os);
            return;
        case TermKind::PermApp: {
            // Debug-only notation; permutation application has no concrete
            // syntax in the term DSL.
            render_factor(t.body(), os);
            os << "{";
            bool first = true;
            for (const auto& [k, v] : t.perm().moved()) {
                if (!first) os << ", ";
                os << k.str() << "->" << v.str();
                first = false;
            }
            os << "}";
            return;
        }
    }
}

}  // namespace detail

// Concrete syntax; parse_term(render_term(t)) == t for PermApp-free t.
inline std::string render_term(const Term& t) {
    std::ostringstream os;
    detail::render(t, os);
    return os.str();
}

namespace detail {

// Alpha-canonical key: bound names are replaced by binder indices assigned
// in a fixed pre-order traversal, free names stay literal.  Two terms are
// alpha-equal iff their keys coincide.
inline void alpha_key(const Term& t, std::map<Name, int>& bound, int& counter,
                      std::ostream& os) {
    switch (t.kind()) {
        case TermKind::Atom: {
            os << t.label() << '(';
            bool first = true;
            for (const Name& n : t.args()) {
                if (!first) os << ',';
                auto it = bound.find(n);
                if (it != bound.end())
                    os << '#' << it->second;
                else
                    os << n.str();
                first = false;
            }
            os << ')';
            return;
        }
        case TermKind::Nil: os << "nil"; return;
        case TermKind::Par:
            os << '(';
            alpha_key(t.left(), bound, counter, os);
            os << "||";
            alpha_key(t.right(), bound, counter, os);
            os << ')';
            return;
        case TermKind::Restrict: {
            int idx = counter++;
            auto prev = bound.find(t.bound());
            bool had = prev != bound.end();
            int old = had ? prev->second : 0;
            bound[t.bound()] = idx;
            os << "(#" << idx << ')';
            alpha_key(t.body(), bound, counter, os);
            if (had)
                bound[t.bound()] = old;
            else
                bound.erase(t.bound());
            return;
        }
        case TermKind::PermApp: {
            os << '[';
            alpha_key(t.body(), bound, counter, os);
            os << "]{";
            for (const auto& [k, v] : t.perm().moved()) {
                auto emit = [&](const Name& n) {
                    auto it = bound.find(n);
                    if (it != bound.end())
                        os << '#' << it->second;
                    else
                        os << n.str();
                };
                emit(k);
                os << '>';
                emit(v);
                os << ';';
            }
            os << '}';
            return;
        }
    }
}

}  // namespace detail

inline std::string alpha_canonical_key(const Term& t) {
    std::ostringstream os;
    std::map<Name, int> bound;
    int counter = 0;
    detail::alpha_key(t, bound, counter, os);
    return os.str();
}

// Equality modulo renaming of bound names only: no factor reordering, no
// scope movement.
inline bool alpha_eq(const Term& a, const Term& b) {
    return alpha_canonical_key(a) == alpha_canonical_key(b);
}

namespace detail {

inline Term apply_perm_rec(const Term& t, const Permutation& pi, FreshNames& fresh) {
    switch (t.kind()) {
        case TermKind::Atom: {
            std::vector<Name> args;
            args.reserve(t.args().size());
            for (const Name& n : t.args()) args.push_back(pi(n));
            return Term::atom(t.label(), args);
        }
        case TermKind::Nil: return t;
        case TermKind::Par:
            return Term::par(apply_perm_rec(t.left(), pi, fresh),
                             apply_perm_rec(t.right(), pi, fresh));
        case TermKind::PermApp:
            return apply_perm_rec(t.body(), pi.after(t.perm()), fresh);
        case TermKind::Restrict: {
            const Name& x = t.bound();
            NameSet outer = set_minus(free_names(t.body()), x);
            // The binder is untouched by pi; rename it first whenever pi
            // moves it or would map a free name onto it.
            bool capture = pi(x) != x;
            if (!capture)
                for (const Name& y : outer)
                    if (pi(y) == x) { capture = true; break; }
            if (!capture)
                return Term::restrict(x, apply_perm_rec(t.body(), pi, fresh));
            Name z = fresh.next();
            Term renamed = apply_perm_rec(t.body(), Permutation::transpose(x, z), fresh);
            return Term::restrict(z, apply_perm_rec(renamed, pi, fresh));
        }
    }
    return t;
}

}  // namespace detail

// Pushes a permutation through the term, eliminating every PermApp node.
// Bound names are alpha-renamed to fresh ones where needed, so the action
// is capture avoiding.
inline Term apply_perm(const Term& t, const Permutation& pi) {
    NameSet avoid = all_names(t);
    for (const Name& n : pi.moved_names()) {
        avoid.insert(n);
        avoid.insert(pi(n));
    }
    FreshNames fresh(avoid);
    return detail::apply_perm_rec(t, pi, fresh);
}

namespace detail {

inline Term rename_apart_rec(const Term& t, std::map<Name, Name>& env, NameSet& used,
                             FreshNames& fresh) {
    switch (t.kind()) {
        case TermKind::Atom: {
            std::vector<Name> args;
            args.reserve(t.args().size());
            for (const Name& n : t.args()) {
                auto it = env.find(n);
                args.push_back(it == env.end() ? n : it->second);
            }
            return Term::atom(t.label(), args);
        }
        case TermKind::Nil: return t;
        case TermKind::Par: {
            Term l = rename_apart_rec(t.left(), env, used, fresh);
            Term r = rename_apart_rec(t.right(), env, used, fresh);
            return Term::par(l, r);
        }
        case TermKind::Restrict: {
            const Name& x = t.bound();
            Name x2 = used.count(x) ? fresh.next() : x;
            used.insert(x2);
            auto prev = env.find(x);
            bool had = prev != env.end();
            Name old = had ? prev->second : Name();
            env[x] = x2;
            Term b = rename_apart_rec(t.body(), env, used, fresh);
            if (had)
                env[x] = old;
            else
                env.erase(x);
            return Term::restrict(x2, b);
        }
        case TermKind::PermApp:
            throw std::invalid_argument("rename_binders_apart: term contains a permutation node");
    }
    return t;
}

}  // namespace detail

// Renames binders so that all bound names are pairwise distinct and
// distinct from every free name.  Binder names already satisfying this are
// kept.  Requires a PermApp-free term.
inline Term rename_binders_apart(const Term& t) {
    NameSet used = free_names(t);
    FreshNames fresh(all_names(t));
    std::map<Name, Name> env;
    return detail::rename_apart_rec(t, env, used, fresh);
}

// Tree positions: child indices from the root (Par: 0 = left, 1 = right;
// Restrict/PermApp: 0 = body).
using TermPath = std::vector<int>;

inline Term subterm_at(const Term& t, const TermPath& path, std::size_t from = 0) {
    if (from == path.size()) return t;
    int step = path[from];
    switch (t.kind()) {
        case TermKind::Par:
            if (step == 0) return subterm_at(t.left(), path, from + 1);
            if (step == 1) return subterm_at(t.right(), path, from + 1);
            break;
        case TermKind::Restrict:
        case TermKind::PermApp:
            if (step == 0) return subterm_at(t.body(), path, from + 1);
            break;
        default: break;
    }
    throw std::invalid_argument("invalid term path");
}

inline Term replace_at(const Term& t, const TermPath& path, const Term& sub,
                       std::size_t from = 0) {
    if (from == path.size()) return sub;
    int step = path[from];
    switch (t.kind()) {
        case TermKind::Par:
            if (step == 0) return Term::par(replace_at(t.left(), path, sub, from + 1), t.right());
            if (step == 1) return Term::par(t.left(), replace_at(t.right(), path, sub, from + 1));
            break;
        case TermKind::Restrict:
            if (step == 0) return Term::restrict(t.bound(), replace_at(t.body(), path, sub, from + 1));
            break;
        case TermKind::PermApp:
            if (step == 0) return Term::perm_app(replace_at(t.body(), path, sub, from + 1), t.perm());
            break;
        default: break;
    }
    throw std::invalid_argument("invalid term path");
}

}  // namespace optiterm
