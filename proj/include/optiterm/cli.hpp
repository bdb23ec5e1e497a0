#pragma once

// Command-line front end. run_cli takes argv-style arguments (program name
// excluded) and writes to the given streams, so tests can drive it without a
// process boundary. Everything on stdout is deterministic for a fixed input;
// timing goes to stderr.

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "forms.hpp"
#include "io.hpp"
#include "nhgraph.hpp"
#include "report.hpp"
#include "treedec.hpp"

namespace optiterm {

namespace detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

class WallClock {
  public:
    explicit WallClock(std::ostream& err) : err_(err), start_(std::chrono::steady_clock::now()) {}
    ~WallClock() {
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - start_)
                      .count();
        err_ << "wall " << ms << " ms\n";
    }

  private:
    std::ostream& err_;
    std::chrono::steady_clock::time_point start_;
};

}  // namespace detail

inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"term-based dynamic programming over optimization problems"};
    app.require_subcommand(1);

    std::string term_path, problem_path, park_path, graph_path, td_path;
    std::string other_path;
    std::string form = "canonical";
    std::string heuristic = "min-degree";
    int root_node = -1;
    bool all_optima = false, emit_tables = false, json_out = false;

    auto* cmd_normal = app.add_subcommand("normal", "print the normal form of a term");
    cmd_normal->add_option("file", term_path, "term file")->required();

    auto* cmd_canon = app.add_subcommand("canon", "print the canonical form of a term");
    cmd_canon->add_option("file", term_path, "term file")->required();

    auto* cmd_width = app.add_subcommand("width", "print the width of both forms of a term");
    cmd_width->add_option("file", term_path, "term file")->required();

    auto* cmd_solve = app.add_subcommand("solve", "optimize a point-wise cost problem");
    cmd_solve->add_option("file", problem_path, "problem file")->required();
    cmd_solve->add_option("--form", form, "form to evaluate (canonical|normal)")
        ->check(CLI::IsMember({"canonical", "normal"}));
    cmd_solve->add_flag("--all-optima", all_optima, "list every optimal assignment");
    cmd_solve->add_flag("--emit-tables", emit_tables, "dump every intermediate table");
    cmd_solve->add_flag("--json", json_out, "machine-readable report");

    auto* cmd_park = app.add_subcommand("park", "optimize a parking instance");
    cmd_park->add_option("file", park_path, "parking file")->required();
    cmd_park->add_option("--form", form, "form to evaluate (canonical|normal)")
        ->check(CLI::IsMember({"canonical", "normal"}));
    cmd_park->add_flag("--emit-tables", emit_tables, "dump every intermediate table");
    cmd_park->add_flag("--json", json_out, "machine-readable report");

    auto* cmd_graph = app.add_subcommand("graph", "print the hypergraph a term denotes");
    cmd_graph->add_option("file", term_path, "term file")->required();

    auto* cmd_congruent = app.add_subcommand("congruent", "decide congruence of two terms");
    cmd_congruent->add_option("first", term_path, "term file")->required();
    cmd_congruent->add_option("second", other_path, "term file")->required();

    auto* cmd_td = app.add_subcommand("td", "tree-decompose a hypergraph and translate back");
    cmd_td->add_option("file", graph_path, "graph file")->required();
    cmd_td->add_option("--td", td_path, "validate this decomposition instead of building one");
    cmd_td->add_option("--heuristic", heuristic, "construction heuristic (min-degree|min-fill)")
        ->check(CLI::IsMember({"min-degree", "min-fill"}));
    cmd_td->add_option("--root", root_node, "node to root the translation at");

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        std::ostringstream usage;
        int code = app.exit(e, usage, usage);
        (code == 0 ? out : err) << usage.str();
        return code;
    }

    try {
        if (cmd_normal->parsed()) {
            out << render_term(normal_form(load_term(detail::read_file(term_path)))) << "\n";
        } else if (cmd_canon->parsed()) {
            out << render_term(canonical_form(load_term(detail::read_file(term_path)))) << "\n";
        } else if (cmd_width->parsed()) {
            Term t = load_term(detail::read_file(term_path));
            out << "normal width " << complexity(normal_form(t)) << "\n";
            out << "canonical width " << complexity(canonical_form(t)) << "\n";
        } else if (cmd_solve->parsed()) {
            std::string text = detail::read_file(problem_path);
            Problem problem = load_problem(text);
            SolveOptions opt;
            opt.use_normal_form = form == "normal";
            opt.all_optima = all_optima;
            opt.emit_tables = emit_tables;
            detail::WallClock clock(err);
            SolveReport rep = run_solve(problem, text, opt);
            if (json_out) out << solve_report_json(rep).dump(2) << "\n";
            else out << render_solve_report(rep);
        } else if (cmd_park->parsed()) {
            std::string text = detail::read_file(park_path);
            ParkingInstance inst = load_parking(text);
            ParkOptions opt;
            opt.use_normal_form = form == "normal";
            opt.emit_tables = emit_tables;
            detail::WallClock clock(err);
            ParkReport rep = run_park(inst, text, opt);
            if (json_out) out << park_report_json(rep).dump(2) << "\n";
            else out << render_park_report(rep);
        } else if (cmd_graph->parsed()) {
            Term t = load_term(detail::read_file(term_path));
            out << save_graph(eval_graph(t));
        } else if (cmd_congruent->parsed()) {
            Term a = load_term(detail::read_file(term_path));
            Term b = load_term(detail::read_file(other_path));
            out << (congruent_terms(a, b) ? "congruent" : "not congruent") << "\n";
        } else if (cmd_td->parsed()) {
            GraphFile gf = load_graph(detail::read_file(graph_path));
            TreeDecomposition td;
            if (!td_path.empty()) {
                td = load_td(detail::read_file(td_path), gf.vertex_id);
                auto violations = validate_td(gf.graph, td);
                if (!violations.empty()) {
                    for (const auto& v : violations) err << v << "\n";
                    return 1;
                }
            } else {
                td = heuristic_td(gf.graph, heuristic == "min-fill" ? TdStrategy::MinFill
                                                                    : TdStrategy::MinDegree);
            }
            std::map<int, std::string> text_ids;
            std::map<int, std::string> hints;
            for (const auto& [text_id, id] : gf.vertex_id) {
                text_ids[id] = text_id;
                try {
                    Name probe(text_id);
                    hints[id] = text_id;
                } catch (const std::exception&) {
                    // vertex id is not a usable name; the translation picks one
                }
            }
            out << save_td(td, text_ids);
            out << "width " << td_width(td) << "\n";
            if (support_graph(gf.graph).empty()) {
                int root = root_node >= 0 ? root_node : *td.nodes.begin();
                Term t = td_to_term(gf.graph, td, root, hints);
                out << "term " << render_term(t) << "\n";
                out << "term width " << complexity(t) << "\n";
            } else {
                out << "term skipped (graph has named vertices)\n";
            }
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace optiterm
