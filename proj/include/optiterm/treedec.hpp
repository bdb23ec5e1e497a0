#pragma once

// Tree decompositions of a hypergraph: bags of vertices on a tree such that
// (a) bags cover all vertices, (b) every edge's attachment fits in some
// bag, (c) the bags holding any one vertex form a connected subtree.  A
// rooted decomposition induces an evaluation order, rendered here as a term
// whose graph is isomorphic to the input.

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "names.hpp"
#include "nhgraph.hpp"
#include "term.hpp"

namespace optiterm {

struct TreeDecomposition {
    std::set<int> nodes;
    std::vector<std::pair<int, int>> arcs;  // undirected
    std::map<int, std::set<int>> bags;      // node -> hypergraph vertex ids
};

namespace detail {

inline std::map<int, std::set<int>> td_adjacency(const TreeDecomposition& td) {
    std::map<int, std::set<int>> adj;
    for (int n : td.nodes) adj[n];
    for (const auto& [a, b] : td.arcs) {
        adj.at(a).insert(b);
        adj.at(b).insert(a);
    }
    return adj;
}

// Throws unless (nodes, arcs) is a tree and bags sit on known nodes.
inline void check_td_shape(const TreeDecomposition& td) {
    if (td.nodes.empty()) throw std::invalid_argument("empty tree decomposition");
    for (const auto& [a, b] : td.arcs)
        if (!td.nodes.count(a) || !td.nodes.count(b))
            throw std::invalid_argument("arc endpoint is not a node");
    for (const auto& [n, bag] : td.bags)
        if (!td.nodes.count(n))
            throw std::invalid_argument("bag attached to unknown node " + std::to_string(n));
    if (td.arcs.size() != td.nodes.size() - 1)
        throw std::invalid_argument("node/arc count is not a tree");
    std::map<int, std::set<int>> adj = td_adjacency(td);
    std::set<int> seen;
    std::vector<int> stack{*td.nodes.begin()};
    while (!stack.empty()) {
        int n = stack.back();
        stack.pop_back();
        if (!seen.insert(n).second) continue;
        for (int m : adj.at(n)) stack.push_back(m);
    }
    if (seen.size() != td.nodes.size())
        throw std::invalid_argument("decomposition tree is not connected");
}

}  // namespace detail

// One human-readable line per violated condition, naming the witness;
// empty means the decomposition is valid for g.  Structural defects
// (non-tree shape, unknown vertices) throw instead.
inline std::vector<std::string> validate_td(const NHGraph& g, const TreeDecomposition& td) {
    detail::check_td_shape(td);
    for (const auto& [n, bag] : td.bags)
        for (int v : bag)
            if (!g.vertices().count(v))
                throw std::invalid_argument("bag of node " + std::to_string(n) +
                                            " references unknown vertex " + std::to_string(v));

    std::vector<std::string> violations;

    std::set<int> covered;
    for (const auto& [n, bag] : td.bags) covered.insert(bag.begin(), bag.end());
    for (int v : g.vertices())
        if (!covered.count(v))
            violations.push_back("(a) vertex " + std::to_string(v) + " appears in no bag");

    for (std::size_t i = 0; i < g.edges().size(); ++i) {
        const NHGraph::Edge& e = g.edges()[i];
        bool fits = false;
        for (const auto& [n, bag] : td.bags) {
            fits = std::all_of(e.attach.begin(), e.attach.end(),
                               [&](int v) { return bag.count(v) != 0; });
            if (fits) break;
        }
        if (!fits)
            violations.push_back("(b) edge " + std::to_string(i) + " '" + e.label +
                                 "' fits in no bag");
    }

    std::map<int, std::set<int>> adj = detail::td_adjacency(td);
    for (int v : g.vertices()) {
        std::set<int> holding;
        for (const auto& [n, bag] : td.bags)
            if (bag.count(v)) holding.insert(n);
        if (holding.empty()) continue;  // already reported under (a)
        std::set<int> seen;
        std::vector<int> stack{*holding.begin()};
        while (!stack.empty()) {
            int n = stack.back();
            stack.pop_back();
            if (!holding.count(n) || !seen.insert(n).second) continue;
            for (int m : adj.at(n)) stack.push_back(m);
        }
        if (seen.size() != holding.size())
            violations.push_back("(c) bags holding vertex " + std::to_string(v) +
                                 " are not connected");
    }
    return violations;
}

// Max bag size minus one.
inline std::size_t td_width(const TreeDecomposition& td) {
    if (td.nodes.empty()) throw std::invalid_argument("empty tree decomposition");
    std::size_t mx = 0;
    for (const auto& [n, bag] : td.bags) mx = std::max(mx, bag.size());
    if (mx == 0) throw std::invalid_argument("tree decomposition with all-empty bags");
    return mx - 1;
}

inline std::size_t td_max_bag(const TreeDecomposition& td) { return td_width(td) + 1; }

namespace detail {

inline Name td_vertex_name(int v, const std::map<int, std::string>& hints) {
    auto it = hints.find(v);
    if (it != hints.end()) return Name(it->second);
    return Name("v" + std::to_string(v));
}

struct TdVisit {
    const NHGraph& g;
    const TreeDecomposition& td;
    const std::map<int, std::set<int>>& adj;
    const std::map<int, std::string>& hints;
    std::set<int> placed;
    std::vector<bool> emitted;

    Term visit(int node, int parent) {
        const std::set<int>& bag = td.bags.count(node) ? td.bags.at(node) : empty_bag();
        std::vector<int> newly;
        for (int v : bag)
            if (placed.insert(v).second) newly.push_back(v);

        std::vector<Term> factors;
        for (std::size_t i = 0; i < g.edges().size(); ++i) {
            if (emitted[i]) continue;
            const NHGraph::Edge& e = g.edges()[i];
            if (!std::all_of(e.attach.begin(), e.attach.end(),
                             [&](int v) { return bag.count(v) != 0; }))
                continue;
            emitted[i] = true;
            std::vector<Name> args;
            for (int v : e.attach) args.push_back(td_vertex_name(v, hints));
            factors.push_back(Term::atom(e.label, args));
        }
        for (int child : adj.at(node)) {
            if (child == parent) continue;
            Term sub = visit(child, node);
            // A subtree that introduced nothing contributes the unit.
            if (!sub.is(TermKind::Nil)) factors.push_back(sub);
        }

        std::vector<Name> names;
        for (int v : newly) names.push_back(td_vertex_name(v, hints));
        return Term::restrict_all(names, Term::par_all(factors));
    }

    static const std::set<int>& empty_bag() {
        static const std::set<int> e;
        return e;
    }
};

}  // namespace detail

// Rooted visit of a valid decomposition: each vertex's restriction sits at
// the bag introducing it, each edge becomes an atom at the first bag that
// covers it.  The resulting term's graph is isomorphic to g.  Name hints
// map vertex ids to the names to use; unmentioned vertices get v<id>.
inline Term td_to_term(const NHGraph& g, const TreeDecomposition& td, int root,
                       const std::map<int, std::string>& name_hints = {}) {
    if (!support_graph(g).empty())
        throw std::invalid_argument("td_to_term expects a graph with empty interface");
    std::vector<std::string> violations = validate_td(g, td);
    if (!violations.empty())
        throw std::invalid_argument("invalid tree decomposition: " + violations.front());
    if (!td.nodes.count(root)) throw std::invalid_argument("unknown root node");

    std::map<int, std::set<int>> adj = detail::td_adjacency(td);
    detail::TdVisit visit{g, td, adj, name_hints, {}, std::vector<bool>(g.edges().size(), false)};
    Term t = visit.visit(root, -1);
    for (std::size_t i = 0; i < g.edges().size(); ++i)
        if (!visit.emitted[i])
            throw std::logic_error("edge not covered by the visit");  // (b) rules this out
    return t;
}

enum class TdStrategy { MinDegree, MinFill };

// Greedy elimination on the primal graph (a clique per hyperedge); the
// bags are each eliminated vertex with its neighborhood at elimination
// time, chained into a tree along the elimination order.  Ties break
// toward the smallest vertex id.
inline TreeDecomposition heuristic_td(const NHGraph& g, TdStrategy strategy) {
    if (g.vertices().empty()) throw std::invalid_argument("heuristic_td: empty graph");

    std::map<int, std::set<int>> nb;
    for (int v : g.vertices()) nb[v];
    for (const NHGraph::Edge& e : g.edges())
        for (std::size_t i = 0; i < e.attach.size(); ++i)
            for (std::size_t j = i + 1; j < e.attach.size(); ++j) {
                nb[e.attach[i]].insert(e.attach[j]);
                nb[e.attach[j]].insert(e.attach[i]);
            }

    auto fill_count = [&](int v) {
        std::size_t fill = 0;
        const std::set<int>& ns = nb.at(v);
        for (auto i = ns.begin(); i != ns.end(); ++i)
            for (auto j = std::next(i); j != ns.end(); ++j)
                if (!nb.at(*i).count(*j)) ++fill;
        return fill;
    };

    TreeDecomposition td;
    std::map<int, int> step_of;  // vertex -> elimination step
    std::vector<std::set<int>> step_bags;
    std::vector<int> order;
    std::set<int> remaining = g.vertices();

    while (!remaining.empty()) {
        int best = -1;
        std::size_t best_score = 0;
        for (int v : remaining) {
            std::size_t score =
                strategy == TdStrategy::MinDegree ? nb.at(v).size() : fill_count(v);
            if (best == -1 || score < best_score) {
                best = v;
                best_score = score;
            }
        }
        std::set<int> ns = nb.at(best);
        std::set<int> bag = ns;
        bag.insert(best);
        step_of[best] = static_cast<int>(order.size());
        order.push_back(best);
        step_bags.push_back(std::move(bag));
        // connect the neighborhood into a clique, then drop the vertex
        for (int a : ns)
            for (int b : ns)
                if (a != b) nb.at(a).insert(b);
        for (int a : ns) nb.at(a).erase(best);
        nb.erase(best);
        remaining.erase(best);
    }

    int n = static_cast<int>(order.size());
    for (int i = 0; i < n; ++i) {
        td.nodes.insert(i);
        td.bags[i] = step_bags[i];
    }
    for (int i = 0; i < n - 1; ++i) {
        // attach to the bag of the earliest-eliminated live neighbor
        int parent = i + 1;
        int best_step = n;
        for (int u : step_bags[i])
            if (u != order[i] && step_of.at(u) < best_step) {
                best_step = step_of.at(u);
                parent = step_of.at(u);
            }
        td.arcs.push_back({i, parent});
    }
    return td;
}

}  // namespace optiterm
