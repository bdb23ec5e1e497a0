#pragma once

// Labeled hypergraphs with a named interface: a partial injective map from
// vertices to names.  Vertex ids are opaque; two graphs are compared only
// through isomorphism, which must preserve labels, attachment order, and
// interface names.  The three operations mirror the term constructors, so
// a term evaluates to a graph by structural recursion, and term congruence
// coincides with graph isomorphism.

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "names.hpp"
#include "perm.hpp"
#include "term.hpp"

namespace optiterm {

class NHGraph {
public:
    struct Edge {
        std::string label;
        std::vector<int> attach;  // vertex ids, pairwise distinct
    };

    NHGraph() = default;

    NHGraph(std::set<int> vertices, std::vector<Edge> edges, std::map<int, Name> naming)
        : vertices_(std::move(vertices)), edges_(std::move(edges)), naming_(std::move(naming)) {
        validate();
    }

    static NHGraph empty() { return NHGraph(); }

    const std::set<int>& vertices() const { return vertices_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::map<int, Name>& naming() const { return naming_; }

    bool has_name(const Name& n) const {
        for (const auto& [v, m] : naming_)
            if (m == n) return true;
        return false;
    }

    // Vertex carrying the given interface name.
    int vertex_of(const Name& n) const {
        for (const auto& [v, m] : naming_)
            if (m == n) return v;
        throw std::invalid_argument("no vertex named '" + n.str() + "'");
    }

    void validate() const {
        std::set<int> attached;
        std::map<std::string, std::size_t> arity;
        for (const Edge& e : edges_) {
            auto [it, fresh] = arity.emplace(e.label, e.attach.size());
            if (!fresh && it->second != e.attach.size())
                throw std::invalid_argument("edge label '" + e.label +
                                            "' used with two different arities");
            std::set<int> seen;
            for (int v : e.attach) {
                if (!vertices_.count(v))
                    throw std::invalid_argument("edge '" + e.label +
                                                "' attached to unknown vertex");
                if (!seen.insert(v).second)
                    throw std::invalid_argument("edge '" + e.label +
                                                "' attached twice to one vertex");
                attached.insert(v);
            }
        }
        for (int v : vertices_)
            if (!attached.count(v))
                throw std::invalid_argument("isolated vertex " + std::to_string(v));
        std::set<Name> seen_names;
        for (const auto& [v, n] : naming_) {
            if (!vertices_.count(v))
                throw std::invalid_argument("naming refers to unknown vertex");
            if (!seen_names.insert(n).second)
                throw std::invalid_argument("two vertices named '" + n.str() + "'");
        }
    }

private:
    friend NHGraph graph_parallel(const NHGraph&, const NHGraph&);
    friend NHGraph graph_restrict(const Name&, const NHGraph&);
    friend NHGraph graph_permute(const NHGraph&, const Permutation&);

    std::set<int> vertices_;
    std::vector<Edge> edges_;
    std::map<int, Name> naming_;
};

// One edge over fully named vertices; the whole argument list is interface.
inline NHGraph graph_atom(const std::string& label, const std::vector<Name>& names) {
    std::set<int> vs;
    std::map<int, Name> naming;
    NHGraph::Edge e{label, {}};
    for (std::size_t i = 0; i < names.size(); ++i) {
        int v = static_cast<int>(i);
        vs.insert(v);
        naming.emplace(v, names[i]);
        e.attach.push_back(v);
    }
    return NHGraph(std::move(vs), {std::move(e)}, std::move(naming));
}

// Disjoint union, then vertices carrying the same interface name merged.
inline NHGraph graph_parallel(const NHGraph& g1, const NHGraph& g2) {
    int offset = 0;
    if (!g1.vertices_.empty()) offset = *g1.vertices_.rbegin() + 1;

    // g2 vertex id -> id in the result.
    std::map<int, int> remap;
    for (int v : g2.vertices_) remap[v] = v + offset;
    for (const auto& [v, n] : g2.naming_) {
        for (const auto& [w, m] : g1.naming_)
            if (m == n) {
                remap[v] = w;
                break;
            }
    }

    std::set<int> vs = g1.vertices_;
    for (const auto& [v, w] : remap) vs.insert(w);
    std::vector<NHGraph::Edge> es = g1.edges_;
    for (const NHGraph::Edge& e : g2.edges_) {
        NHGraph::Edge f{e.label, {}};
        for (int v : e.attach) f.attach.push_back(remap.at(v));
        es.push_back(std::move(f));
    }
    std::map<int, Name> naming = g1.naming_;
    for (const auto& [v, n] : g2.naming_) naming.emplace(remap.at(v), n);
    return NHGraph(std::move(vs), std::move(es), std::move(naming));
}

// Removes x from the interface; the vertex itself stays.
inline NHGraph graph_restrict(const Name& x, const NHGraph& g) {
    NHGraph r = g;
    for (auto it = r.naming_.begin(); it != r.naming_.end(); ++it)
        if (it->second == x) {
            r.naming_.erase(it);
            break;
        }
    return r;
}

// Renames the interface along pi.
inline NHGraph graph_permute(const NHGraph& g, const Permutation& pi) {
    NHGraph r = g;
    for (auto& [v, n] : r.naming_) n = pi(n);
    return r;
}

inline NameSet support_graph(const NHGraph& g) {
    NameSet s;
    for (const auto& [v, n] : g.naming()) s.insert(n);
    return s;
}

inline NHGraph eval_graph(const Term& t) {
    switch (t.kind()) {
        case TermKind::Atom: return graph_atom(t.label(), t.args());
        case TermKind::Nil: return NHGraph::empty();
        case TermKind::Par: return graph_parallel(eval_graph(t.left()), eval_graph(t.right()));
        case TermKind::Restrict: return graph_restrict(t.bound(), eval_graph(t.body()));
        case TermKind::PermApp: return graph_permute(eval_graph(t.body()), t.perm());
    }
    return NHGraph::empty();
}

// One atom per edge; interface vertices keep their names, the others get
// fresh names which are then restricted.
inline Term graph_to_term(const NHGraph& g) {
    NameSet avoid = support_graph(g);
    FreshNames fresh(avoid);
    std::map<int, Name> vname = g.naming();
    std::vector<Name> bound;
    for (int v : g.vertices()) {
        if (!vname.count(v)) {
            Name n = fresh.next();
            vname.emplace(v, n);
            bound.push_back(n);
        }
    }
    std::vector<Term> atoms;
    for (const NHGraph::Edge& e : g.edges()) {
        std::vector<Name> args;
        for (int v : e.attach) args.push_back(vname.at(v));
        atoms.push_back(Term::atom(e.label, args));
    }
    return Term::restrict_all(bound, Term::par_all(atoms));
}

namespace detail {

// Per-vertex invariant used to prune the isomorphism search: the interface
// name, if any, plus the sorted multiset of (label, position) slots the
// vertex fills.
struct VertexInv {
    std::string name;
    std::vector<std::pair<std::string, std::size_t>> slots;

    friend bool operator==(const VertexInv& a, const VertexInv& b) {
        return a.name == b.name && a.slots == b.slots;
    }
    friend bool operator<(const VertexInv& a, const VertexInv& b) {
        if (a.name != b.name) return a.name < b.name;
        return a.slots < b.slots;
    }
};

inline std::map<int, VertexInv> vertex_invariants(const NHGraph& g) {
    std::map<int, VertexInv> inv;
    for (int v : g.vertices()) inv[v];
    for (const auto& [v, n] : g.naming()) inv[v].name = n.str();
    for (const NHGraph::Edge& e : g.edges())
        for (std::size_t i = 0; i < e.attach.size(); ++i)
            inv[e.attach[i]].slots.push_back({e.label, i});
    for (auto& [v, iv] : inv) std::sort(iv.slots.begin(), iv.slots.end());
    return inv;
}

inline bool match_edges(const NHGraph& g1, const NHGraph& g2,
                        const std::map<int, VertexInv>& inv1,
                        const std::map<int, VertexInv>& inv2, std::size_t next,
                        std::vector<bool>& used, std::map<int, int>& fwd,
                        std::map<int, int>& bwd) {
    if (next == g1.edges().size()) return true;
    const NHGraph::Edge& e1 = g1.edges()[next];
    for (std::size_t j = 0; j < g2.edges().size(); ++j) {
        if (used[j]) continue;
        const NHGraph::Edge& e2 = g2.edges()[j];
        if (e2.label != e1.label || e2.attach.size() != e1.attach.size()) continue;

        std::vector<std::pair<int, int>> added;
        bool ok = true;
        for (std::size_t i = 0; i < e1.attach.size() && ok; ++i) {
            int v = e1.attach[i], w = e2.attach[i];
            auto fit = fwd.find(v);
            auto bit = bwd.find(w);
            if (fit != fwd.end() || bit != bwd.end()) {
                ok = fit != fwd.end() && fit->second == w;
            } else if (inv1.at(v) == inv2.at(w)) {
                fwd.emplace(v, w);
                bwd.emplace(w, v);
                added.push_back({v, w});
            } else {
                ok = false;
            }
        }
        if (ok) {
            used[j] = true;
            if (match_edges(g1, g2, inv1, inv2, next + 1, used, fwd, bwd)) return true;
            used[j] = false;
        }
        for (auto& [v, w] : added) {
            fwd.erase(v);
            bwd.erase(w);
        }
    }
    return false;
}

}  // namespace detail

// Label-, attachment-order-, and name-preserving bijection test.
inline bool isomorphic(const NHGraph& g1, const NHGraph& g2) {
    if (g1.vertices().size() != g2.vertices().size()) return false;
    if (g1.edges().size() != g2.edges().size()) return false;
    if (support_graph(g1) != support_graph(g2)) return false;

    auto inv1 = detail::vertex_invariants(g1);
    auto inv2 = detail::vertex_invariants(g2);
    std::vector<detail::VertexInv> m1, m2;
    for (const auto& [v, iv] : inv1) m1.push_back(iv);
    for (const auto& [v, iv] : inv2) m2.push_back(iv);
    std::sort(m1.begin(), m1.end());
    std::sort(m2.begin(), m2.end());
    if (m1 != m2) return false;

    std::vector<bool> used(g2.edges().size(), false);
    std::map<int, int> fwd, bwd;
    return detail::match_edges(g1, g2, inv1, inv2, 0, used, fwd, bwd);
}

// Structural congruence of terms, decided through the graph encoding.
inline bool congruent_terms(const Term& a, const Term& b) {
    return isomorphic(eval_graph(a), eval_graph(b));
}

}  // namespace optiterm
