#pragma once

// Hierarchical view of a graph as a tree of nested components: the root
// exposes the interface names, each internal node exposes the names opened
// by a restriction scope, and each leaf holds one edge whose arguments must
// be visible on its root path.  The same name may be exposed in sibling
// branches; those occurrences are distinct vertices when flattened.

#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "forms.hpp"
#include "names.hpp"
#include "nhgraph.hpp"
#include "term.hpp"

namespace optiterm {

struct HierNode {
    // Internal node: names newly exposed here, plus children.
    NameSet exposed;
    std::vector<HierNode> children;
    // Leaf: one edge.
    bool leaf = false;
    std::string label;
    std::vector<Name> attach;
};

struct HierNHGraph {
    NameSet interface_names;  // exposed at the root
    std::vector<HierNode> components;
};

namespace detail {

inline void check_hier_node(const HierNode& n, NameSet visible) {
    if (n.leaf) {
        if (!n.exposed.empty() || !n.children.empty())
            throw std::invalid_argument("leaf component with nested structure");
        std::set<Name> seen;
        for (const Name& a : n.attach) {
            if (!visible.count(a))
                throw std::invalid_argument("edge '" + n.label + "' uses name '" + a.str() +
                                            "' not exposed on its path");
            if (!seen.insert(a).second)
                throw std::invalid_argument("edge '" + n.label + "' attached twice to '" +
                                            a.str() + "'");
        }
        return;
    }
    for (const Name& x : n.exposed)
        if (!visible.insert(x).second)
            throw std::invalid_argument("name '" + x.str() + "' exposed twice on one path");
    for (const HierNode& c : n.children) check_hier_node(c, visible);
}

}  // namespace detail

// Path distinctness and leaf visibility; throws on violation.
inline void validate_hier(const HierNHGraph& h) {
    NameSet visible = h.interface_names;
    for (const HierNode& c : h.components) detail::check_hier_node(c, visible);
}

namespace detail {

inline void term_components(const Term& t, std::vector<HierNode>& out) {
    switch (t.kind()) {
        case TermKind::Atom: {
            HierNode leaf;
            leaf.leaf = true;
            leaf.label = t.label();
            leaf.attach = t.args();
            out.push_back(std::move(leaf));
            return;
        }
        case TermKind::Nil: return;
        case TermKind::Par:
            term_components(t.left(), out);
            term_components(t.right(), out);
            return;
        case TermKind::Restrict: {
            HierNode node;
            Term cur = t;
            while (cur.is(TermKind::Restrict)) {  // consecutive binders open one component
                node.exposed.insert(cur.bound());
                cur = cur.body();
            }
            term_components(cur, node.children);
            out.push_back(std::move(node));
            return;
        }
        case TermKind::PermApp:
            throw std::invalid_argument(
                "term_to_hier: defined only for terms without permutation nodes");
    }
}

}  // namespace detail

// The nesting structure of a term's restriction scopes as a tree.  Binders
// are renamed apart first, so path distinctness holds by construction.
inline HierNHGraph term_to_hier(const HierTerm& t) {
    Term u = rename_binders_apart(t);
    HierNHGraph h;
    h.interface_names = free_names(u);
    detail::term_components(u, h.components);
    validate_hier(h);
    return h;
}

namespace detail {

inline Term hier_node_term(const HierNode& n) {
    if (n.leaf) return Term::atom(n.label, n.attach);
    std::vector<Term> parts;
    parts.reserve(n.children.size());
    for (const HierNode& c : n.children) parts.push_back(hier_node_term(c));
    return Term::restrict_all(std::vector<Name>(n.exposed.begin(), n.exposed.end()),
                              Term::par_all(parts));
}

}  // namespace detail

// Inverse of term_to_hier up to parallel reordering, binder order within a
// component, and alpha renaming.
inline HierTerm hier_to_term(const HierNHGraph& h) {
    validate_hier(h);
    std::vector<Term> parts;
    parts.reserve(h.components.size());
    for (const HierNode& c : h.components) parts.push_back(detail::hier_node_term(c));
    return Term::par_all(parts);
}

namespace detail {

struct FlattenState {
    std::set<int> vertices;
    std::vector<NHGraph::Edge> edges;
    std::map<int, Name> naming;
    int next_vertex = 0;
};

// env maps each visible name to its vertex; sibling scopes get separate
// copies, so a name re-exposed in another branch is a different vertex.
inline void flatten_node(const HierNode& n, std::map<Name, int> env, FlattenState& st) {
    if (n.leaf) {
        NHGraph::Edge e{n.label, {}};
        for (const Name& a : n.attach) {
            int v = env.at(a);
            st.vertices.insert(v);
            e.attach.push_back(v);
        }
        st.edges.push_back(std::move(e));
        return;
    }
    for (const Name& x : n.exposed) env[x] = st.next_vertex++;
    for (const HierNode& c : n.children) flatten_node(c, env, st);
}

}  // namespace detail

// Pastes the leaf edges together: names merge when they resolve to the same
// exposing node, and root names form the interface.  Exposed names used by
// no edge produce no vertex.
inline NHGraph flatten_hier(const HierNHGraph& h) {
    validate_hier(h);
    detail::FlattenState st;
    std::map<Name, int> env;
    for (const Name& x : h.interface_names) env[x] = st.next_vertex++;
    for (const HierNode& c : h.components) detail::flatten_node(c, env, st);
    for (const Name& x : h.interface_names) {
        int v = env.at(x);
        if (st.vertices.count(v)) st.naming.emplace(v, x);
    }
    return NHGraph(std::move(st.vertices), std::move(st.edges), std::move(st.naming));
}

namespace detail {

inline void render_hier_node(const HierNode& n, std::size_t depth, std::ostream& os) {
    for (std::size_t i = 0; i < depth; ++i) os << "  ";
    if (n.leaf) {
        os << n.label << '(';
        bool first = true;
        for (const Name& a : n.attach) {
            if (!first) os << ',';
            os << a.str();
            first = false;
        }
        os << ")\n";
        return;
    }
    os << '{';
    bool first = true;
    for (const Name& x : n.exposed) {
        if (!first) os << ',';
        os << x.str();
        first = false;
    }
    os << "}\n";
    for (const HierNode& c : n.children) render_hier_node(c, depth + 1, os);
}

}  // namespace detail

// Indented tree text: one line per component ({exposed names}) or leaf
// edge, children indented two spaces under their parent.
inline std::string render_hier(const HierNHGraph& h) {
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (const Name& x : h.interface_names) {
        if (!first) os << ',';
        os << x.str();
        first = false;
    }
    os << "}\n";
    for (const HierNode& c : h.components) detail::render_hier_node(c, 1, os);
    return os.str();
}

}  // namespace optiterm
