#pragma once

// File formats and table rendering.
//
// All loaders work on whole-file text. Lines starting with '#' and blank
// lines are ignored everywhere. Loaders throw std::runtime_error with a
// line-prefixed message on malformed input; semantic validation beyond
// syntax (capacity coverage, arity checks) is delegated to the structures
// being built.

#include <cstdint>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cost_table.hpp"
#include "costeval.hpp"
#include "nhgraph.hpp"
#include "parking.hpp"
#include "parse.hpp"
#include "term.hpp"
#include "treedec.hpp"

namespace optiterm {

namespace detail {

// Logical lines: comments stripped, blanks dropped, original line numbers kept.
struct SourceLine {
    int number = 0;
    std::string text;
};

inline std::vector<SourceLine> logical_lines(const std::string& text) {
    std::vector<SourceLine> out;
    std::istringstream in(text);
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
        ++number;
        auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        auto first = raw.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        auto last = raw.find_last_not_of(" \t\r");
        out.push_back({number, raw.substr(first, last - first + 1)});
    }
    return out;
}

inline std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::istringstream in(line);
    std::string f;
    while (in >> f) fields.push_back(f);
    return fields;
}

[[noreturn]] inline void file_error(const SourceLine& line, const std::string& msg) {
    throw std::runtime_error("line " + std::to_string(line.number) + ": " + msg);
}

inline long parse_int_field(const SourceLine& line, const std::string& field,
                            const std::string& what) {
    try {
        size_t pos = 0;
        long v = std::stol(field, &pos);
        if (pos != field.size()) throw std::invalid_argument(field);
        return v;
    } catch (const std::exception&) {
        file_error(line, what + " must be an integer, got '" + field + "'");
    }
}

// The rest of the line after the first whitespace run following a keyword.
inline std::string rest_after_keyword(const SourceLine& line) {
    auto ws = line.text.find_first_of(" \t");
    if (ws == std::string::npos) return "";
    auto start = line.text.find_first_not_of(" \t", ws);
    if (start == std::string::npos) return "";
    return line.text.substr(start);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Point-wise problem files
//
//   domain d1 d2 d3
//   constant A 2
//   row A d1 d1 7
//   row A d1 d2 1/2
//   ...
//   term (x2)((x1) A(x1,x2) || (x3) B(x2,x3))
//
// Every constant needs a full row list: |domain|^arity rows, each value tuple
// exactly once. Costs are rationals or "inf".

struct Problem {
    Domain domain{std::vector<std::string>{"_"}};
    Signature signature;
    Binding binding;
    Term term{Term::nil()};
};

inline Problem load_problem(const std::string& text) {
    std::vector<std::string> domain_values;
    // label -> (arity, rows seen so far keyed by value tuple)
    std::map<std::string, size_t> arity;
    std::map<std::string, std::map<std::vector<std::string>, ExtCost>> rows;
    std::string term_text;
    bool saw_term = false;

    for (const auto& line : detail::logical_lines(text)) {
        auto fields = detail::split_fields(line.text);
        const std::string& key = fields[0];
        if (key == "domain") {
            if (!domain_values.empty()) detail::file_error(line, "repeated 'domain'");
            if (fields.size() < 2) detail::file_error(line, "'domain' needs at least one value");
            domain_values.assign(fields.begin() + 1, fields.end());
        } else if (key == "constant") {
            if (fields.size() != 3) detail::file_error(line, "expected 'constant LABEL ARITY'");
            if (arity.count(fields[1])) detail::file_error(line, "repeated constant '" + fields[1] + "'");
            long a = detail::parse_int_field(line, fields[2], "arity");
            if (a < 0) detail::file_error(line, "arity must be non-negative");
            arity[fields[1]] = static_cast<size_t>(a);
            rows[fields[1]];
        } else if (key == "row") {
            if (fields.size() < 3) detail::file_error(line, "expected 'row LABEL values... COST'");
            const std::string& label = fields[1];
            auto it = arity.find(label);
            if (it == arity.end())
                detail::file_error(line, "row for undeclared constant '" + label + "'");
            if (fields.size() != 3 + it->second)
                detail::file_error(line, "constant '" + label + "' has arity " +
                                             std::to_string(it->second) + ", row needs " +
                                             std::to_string(it->second) + " value(s) and a cost");
            std::vector<std::string> tuple(fields.begin() + 2, fields.end() - 1);
            ExtCost cost;
            try {
                cost = ExtCost::parse(fields.back());
            } catch (const std::exception& e) {
                detail::file_error(line, e.what());
            }
            if (!rows[label].emplace(tuple, cost).second)
                detail::file_error(line, "repeated row for constant '" + label + "'");
        } else if (key == "term") {
            if (saw_term) detail::file_error(line, "repeated 'term'");
            term_text = detail::rest_after_keyword(line);
            if (term_text.empty()) detail::file_error(line, "'term' needs a value");
            saw_term = true;
        } else {
            detail::file_error(line, "unknown key '" + key + "'");
        }
    }

    if (domain_values.empty()) throw std::runtime_error("missing 'domain'");
    if (!saw_term) throw std::runtime_error("missing 'term'");

    Problem p;
    p.domain = Domain(domain_values);
    for (const auto& [label, a] : arity) p.signature.declare(label, a);
    p.term = parse_term(term_text, p.signature);

    for (const auto& [label, a] : arity) {
        const auto& seen = rows[label];
        size_t expect = 1;
        for (size_t i = 0; i < a; ++i) expect *= p.domain.size();
        if (seen.size() != expect)
            throw std::runtime_error("constant '" + label + "' has " +
                                     std::to_string(seen.size()) + " row(s), needs " +
                                     std::to_string(expect));
        // Row-major positional order, first argument most significant.
        std::vector<ExtCost> entries(expect);
        for (const auto& [tuple, cost] : seen) {
            size_t idx = 0;
            for (const auto& v : tuple) {
                if (!p.domain.contains(v))
                    throw std::runtime_error("constant '" + label + "': value '" + v +
                                             "' is not in the domain");
                idx = idx * p.domain.size() + p.domain.index_of(v);
            }
            entries[idx] = cost;
        }
        p.binding.bind(label, a, entries);
    }
    return p;
}

// ---------------------------------------------------------------------------
// Parking files
//
//   zone A 2
//   car x1
//   cost x1 A 3
//   cost x1 B inf
//   term (x1)(x2)(x3)(A(x1,x2) || B(x2,x3) || C(x3))
//
// Missing cost pairs and structural misuse are caught by validate_parking
// when the instance is evaluated; the loader only enforces syntax and
// duplicate declarations.

inline ParkingInstance load_parking(const std::string& text) {
    ParkingInstance inst;
    std::string term_text;
    bool saw_term = false;

    for (const auto& line : detail::logical_lines(text)) {
        auto fields = detail::split_fields(line.text);
        const std::string& key = fields[0];
        if (key == "zone") {
            if (fields.size() != 3) detail::file_error(line, "expected 'zone LABEL CAPACITY'");
            if (inst.capacity.count(fields[1]))
                detail::file_error(line, "repeated zone '" + fields[1] + "'");
            long cap = detail::parse_int_field(line, fields[2], "capacity");
            if (cap < 0) detail::file_error(line, "capacity must be non-negative");
            inst.zone_order.push_back(fields[1]);
            inst.capacity[fields[1]] = static_cast<size_t>(cap);
        } else if (key == "car") {
            if (fields.size() < 2) detail::file_error(line, "expected 'car NAME...'");
            for (size_t i = 1; i < fields.size(); ++i) {
                Name car(fields[i]);
                for (const auto& c : inst.cars)
                    if (c == car) detail::file_error(line, "repeated car '" + fields[i] + "'");
                inst.cars.push_back(car);
            }
        } else if (key == "cost") {
            if (fields.size() != 4) detail::file_error(line, "expected 'cost CAR ZONE COST'");
            Name car(fields[1]);
            ExtCost cost;
            try {
                cost = ExtCost::parse(fields[3]);
            } catch (const std::exception& e) {
                detail::file_error(line, e.what());
            }
            if (inst.cost[car].count(fields[2]))
                detail::file_error(line, "repeated cost for car '" + fields[1] + "' in zone '" +
                                             fields[2] + "'");
            inst.cost[car][fields[2]] = cost;
        } else if (key == "term") {
            if (saw_term) detail::file_error(line, "repeated 'term'");
            term_text = detail::rest_after_keyword(line);
            if (term_text.empty()) detail::file_error(line, "'term' needs a value");
            saw_term = true;
        } else {
            detail::file_error(line, "unknown key '" + key + "'");
        }
    }

    if (!saw_term) throw std::runtime_error("missing 'term'");
    inst.term = parse_term(term_text);
    return inst;
}

// ---------------------------------------------------------------------------
// Term files: comments and blank lines, then the term itself, which may span
// the remaining lines.

inline Term load_term(const std::string& text) {
    std::string joined;
    for (const auto& line : detail::logical_lines(text)) {
        if (!joined.empty()) joined += ' ';
        joined += line.text;
    }
    if (joined.empty()) throw std::runtime_error("no term in input");
    return parse_term(joined);
}

// ---------------------------------------------------------------------------
// Graph files
//
//   vertex a b c
//   name x1 a
//   edge A(a,b)
//   edge B(b,c)
//
// Vertices carry textual ids in the file; the loader assigns dense integer
// ids in declaration order and returns the correspondence, which the TD
// loader and the term translation reuse.

struct GraphFile {
    NHGraph graph;
    std::vector<std::string> vertex_text;          // id -> file name
    std::map<std::string, int> vertex_id;          // file name -> id
};

inline GraphFile load_graph(const std::string& text) {
    GraphFile gf;
    std::set<int> vertices;
    std::map<int, Name> naming;
    std::vector<NHGraph::Edge> edges;

    auto lookup = [&](const detail::SourceLine& line, const std::string& v) -> int {
        auto it = gf.vertex_id.find(v);
        if (it == gf.vertex_id.end())
            detail::file_error(line, "unknown vertex '" + v + "'");
        return it->second;
    };

    for (const auto& line : detail::logical_lines(text)) {
        auto fields = detail::split_fields(line.text);
        const std::string& key = fields[0];
        if (key == "vertex") {
            if (fields.size() < 2) detail::file_error(line, "expected 'vertex ID...'");
            for (size_t i = 1; i < fields.size(); ++i) {
                if (gf.vertex_id.count(fields[i]))
                    detail::file_error(line, "repeated vertex '" + fields[i] + "'");
                int id = static_cast<int>(gf.vertex_text.size());
                gf.vertex_id[fields[i]] = id;
                gf.vertex_text.push_back(fields[i]);
                vertices.insert(id);
            }
        } else if (key == "name") {
            if (fields.size() != 3) detail::file_error(line, "expected 'name NAME VERTEX'");
            int id = lookup(line, fields[2]);
            if (naming.count(id))
                detail::file_error(line, "vertex '" + fields[2] + "' already named");
            try {
                naming[id] = Name(fields[1]);
            } catch (const std::exception& e) {
                detail::file_error(line, e.what());
            }
        } else if (key == "edge") {
            // edge LABEL(v1,v2,...) with optional spaces, or edge LABEL for arity 0.
            std::string body = detail::rest_after_keyword(line);
            if (body.empty()) detail::file_error(line, "expected 'edge LABEL(V,...)'");
            auto lp = body.find('(');
            std::string label;
            std::vector<int> attach;
            if (lp == std::string::npos) {
                label = body;
            } else {
                label = body.substr(0, lp);
                auto rp = body.rfind(')');
                if (rp == std::string::npos || rp < lp)
                    detail::file_error(line, "unbalanced parentheses in edge");
                std::string args = body.substr(lp + 1, rp - lp - 1);
                std::string cur;
                auto flush = [&]() {
                    auto f = cur.find_first_not_of(" \t");
                    if (f == std::string::npos) detail::file_error(line, "empty vertex in edge");
                    auto l = cur.find_last_not_of(" \t");
                    attach.push_back(lookup(line, cur.substr(f, l - f + 1)));
                    cur.clear();
                };
                for (char c : args) {
                    if (c == ',') flush();
                    else cur.push_back(c);
                }
                if (!cur.empty() || !attach.empty()) flush();
            }
            while (!label.empty() && (label.back() == ' ' || label.back() == '\t'))
                label.pop_back();
            if (label.empty()) detail::file_error(line, "edge needs a label");
            edges.push_back({label, attach});
        } else {
            detail::file_error(line, "unknown key '" + key + "'");
        }
    }

    gf.graph = NHGraph(vertices, edges, naming);
    return gf;
}

inline std::string save_graph(const NHGraph& g,
                              const std::map<int, std::string>& text_ids = {}) {
    auto id_of = [&](int v) {
        auto it = text_ids.find(v);
        return it != text_ids.end() ? it->second : "v" + std::to_string(v);
    };
    std::ostringstream out;
    for (int v : g.vertices()) out << "vertex " << id_of(v) << "\n";
    for (const auto& [v, n] : g.naming()) out << "name " << n.str() << " " << id_of(v) << "\n";
    for (const auto& e : g.edges()) {
        out << "edge " << e.label << "(";
        for (size_t i = 0; i < e.attach.size(); ++i) {
            if (i) out << ",";
            out << id_of(e.attach[i]);
        }
        out << ")\n";
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Tree decomposition files
//
//   node 0: a b
//   node 1: b c
//   arc 0 1
//
// Bag members are vertex ids from the companion graph file.

inline TreeDecomposition load_td(const std::string& text,
                                 const std::map<std::string, int>& vertex_id) {
    TreeDecomposition td;
    for (const auto& line : detail::logical_lines(text)) {
        auto fields = detail::split_fields(line.text);
        const std::string& key = fields[0];
        if (key == "node") {
            if (fields.size() < 2) detail::file_error(line, "expected 'node ID: V...'");
            std::string idf = fields[1];
            bool colon_glued = !idf.empty() && idf.back() == ':';
            if (colon_glued) idf.pop_back();
            long id = detail::parse_int_field(line, idf, "node id");
            size_t first_vertex = 2;
            if (!colon_glued) {
                if (fields.size() < 3 || fields[2] != ":")
                    detail::file_error(line, "expected ':' after node id");
                first_vertex = 3;
            }
            if (td.nodes.count(static_cast<int>(id)))
                detail::file_error(line, "repeated node " + std::to_string(id));
            td.nodes.insert(static_cast<int>(id));
            auto& bag = td.bags[static_cast<int>(id)];
            for (size_t i = first_vertex; i < fields.size(); ++i) {
                auto it = vertex_id.find(fields[i]);
                if (it == vertex_id.end())
                    detail::file_error(line, "unknown vertex '" + fields[i] + "' in bag");
                bag.insert(it->second);
            }
        } else if (key == "arc") {
            if (fields.size() != 3) detail::file_error(line, "expected 'arc ID ID'");
            long a = detail::parse_int_field(line, fields[1], "arc endpoint");
            long b = detail::parse_int_field(line, fields[2], "arc endpoint");
            td.arcs.emplace_back(static_cast<int>(a), static_cast<int>(b));
        } else {
            detail::file_error(line, "unknown key '" + key + "'");
        }
    }
    if (td.nodes.empty()) throw std::runtime_error("no nodes in tree decomposition");
    return td;
}

inline std::string save_td(const TreeDecomposition& td,
                           const std::map<int, std::string>& text_ids = {}) {
    auto id_of = [&](int v) {
        auto it = text_ids.find(v);
        return it != text_ids.end() ? it->second : "v" + std::to_string(v);
    };
    std::ostringstream out;
    for (int n : td.nodes) {
        out << "node " << n << ":";
        auto it = td.bags.find(n);
        if (it != td.bags.end())
            for (int v : it->second) out << " " << id_of(v);
        out << "\n";
    }
    for (const auto& [a, b] : td.arcs) out << "arc " << a << " " << b << "\n";
    return out.str();
}

// ---------------------------------------------------------------------------
// Table rendering. One column per support name plus a cost column, rows in
// entry order (first support name most significant), padded to align.

namespace detail {

inline std::string pad(const std::string& s, size_t w) {
    return s + std::string(s.size() < w ? w - s.size() : 0, ' ');
}

inline std::string render_columns(const std::vector<std::vector<std::string>>& rows) {
    std::vector<size_t> width;
    for (const auto& row : rows) {
        if (width.size() < row.size()) width.resize(row.size(), 0);
        for (size_t i = 0; i < row.size(); ++i)
            width[i] = std::max(width[i], row[i].size());
    }
    std::ostringstream out;
    for (const auto& row : rows) {
        std::string line;
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) line += "  ";
            line += pad(row[i], width[i]);
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out << line << "\n";
    }
    return out.str();
}

}  // namespace detail

inline std::string render_cost_table(const CostTable& t) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header;
    for (const auto& n : t.support()) header.push_back(n.str());
    header.push_back("cost");
    rows.push_back(header);
    for (size_t i = 0; i < t.size(); ++i) {
        auto values = t.decode(i);
        std::vector<std::string> row;
        for (size_t v : values) row.push_back(t.domain().value(v));
        row.push_back(t.entry(i).str());
        rows.push_back(row);
    }
    return detail::render_columns(rows);
}

// Parked names are marked '+', absent ones '-'.
inline std::string render_subset_table(const SubsetTable& t) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header;
    for (const auto& n : t.support()) header.push_back(n.str());
    header.push_back("cost");
    rows.push_back(header);
    for (size_t mask = 0; mask < t.size(); ++mask) {
        std::vector<std::string> row;
        for (size_t i = 0; i < t.support().size(); ++i)
            row.push_back((mask >> i) & 1 ? "+" : "-");
        row.push_back(t.entry(mask).str());
        rows.push_back(row);
    }
    return detail::render_columns(rows);
}

// One block per evaluation node: rendered subterm, then the node's table.
inline std::string render_cost_dump(const CostEvalNode& node) {
    std::ostringstream out;
    for (const auto& child : node.children) out << render_cost_dump(*child);
    out << "== " << render_term(node.term) << "\n";
    out << render_cost_table(node.table) << "\n";
    return out.str();
}

inline std::string render_park_dump(const ParkEvalNode& node) {
    std::ostringstream out;
    for (const auto& child : node.children) out << render_park_dump(*child);
    out << "== " << render_term(node.term) << "\n";
    if (node.term.is(TermKind::Par) && node.children.size() == 2) {
        // A composition row also shows every split sum the minimum was
        // taken over, in examination order.
        const SubsetTable& t = node.table;
        std::vector<std::vector<std::string>> rows;
        std::vector<std::string> header;
        for (const auto& n : t.support()) header.push_back(n.str());
        header.push_back("candidates");
        header.push_back("cost");
        rows.push_back(header);
        for (size_t mask = 0; mask < t.size(); ++mask) {
            std::vector<std::string> row;
            for (size_t i = 0; i < t.support().size(); ++i)
                row.push_back((mask >> i) & 1 ? "+" : "-");
            std::string cands;
            for (const auto& c :
                 park_split_candidates(node.children[0]->table, node.children[1]->table, mask)) {
                if (!cands.empty()) cands += ' ';
                cands += c.str();
            }
            row.push_back(cands);
            row.push_back(t.entry(mask).str());
            rows.push_back(row);
        }
        out << detail::render_columns(rows) << "\n";
    } else {
        out << render_subset_table(node.table) << "\n";
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// FNV-1a, for stable input digests in reports.

inline std::string fnv1a_hex(const std::string& bytes) {
    uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << h;
    return out.str();
}

}  // namespace optiterm
