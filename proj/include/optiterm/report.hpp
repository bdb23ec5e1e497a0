#pragma once

// End-to-end pipelines: problem in, report out. Reports are deterministic
// byte-for-byte for a given input; anything time-dependent stays out of them.

#include <json.hpp>

#include <sstream>
#include <string>
#include <vector>

#include "costeval.hpp"
#include "forms.hpp"
#include "io.hpp"
#include "parking.hpp"

namespace optiterm {

struct SolveOptions {
    bool use_normal_form = false;
    bool all_optima = false;
    bool emit_tables = false;
    size_t optima_cap = 1000;
};

struct SolveReport {
    std::string input_digest;
    std::string form_kind;        // "canonical" or "normal"
    Term form{Term::nil()};
    size_t width = 0;             // complexity of the evaluated form
    size_t peak_support = 0;      // realized, from the evaluation tree
    ExtCost optimum;
    std::vector<Optimum> optima;  // empty when the optimum is infinite
    std::string tables;           // empty unless requested
};

inline SolveReport run_solve(const Problem& problem, const std::string& input_text,
                             const SolveOptions& opt = {}) {
    SolveReport rep;
    rep.input_digest = fnv1a_hex(input_text);
    rep.form_kind = opt.use_normal_form ? "normal" : "canonical";
    rep.form = opt.use_normal_form ? normal_form(problem.term) : canonical_form(problem.term);
    rep.width = complexity(rep.form);

    CostEval eval = eval_cost_tree(rep.form, problem.binding, problem.domain);
    rep.peak_support = eval.peak_support;
    rep.optimum = eval.table().min_entry();
    if (!rep.optimum.is_infinite()) {
        rep.optima = backtrack_optima(eval, problem.domain, opt.optima_cap);
        if (!opt.all_optima && rep.optima.size() > 1) rep.optima.resize(1);
    }
    if (opt.emit_tables) rep.tables = render_cost_dump(*eval.root);
    return rep;
}

inline std::string render_solve_report(const SolveReport& rep) {
    std::ostringstream out;
    out << "input " << rep.input_digest << "\n";
    out << "form " << rep.form_kind << " " << render_term(rep.form) << "\n";
    out << "width " << rep.width << "\n";
    out << "peak support " << rep.peak_support << "\n";
    out << "optimum " << rep.optimum.str() << "\n";
    for (const auto& [assignment, cost] : rep.optima) {
        out << "assignment";
        for (const auto& [name, value] : assignment)
            out << " " << name.str() << "=" << value;
        out << " cost " << cost.str() << "\n";
    }
    if (!rep.tables.empty()) out << "\n" << rep.tables;
    return out.str();
}

inline nlohmann::json solve_report_json(const SolveReport& rep) {
    nlohmann::json j;
    j["input"] = rep.input_digest;
    j["form"] = rep.form_kind;
    j["term"] = render_term(rep.form);
    j["width"] = rep.width;
    j["peak_support"] = rep.peak_support;
    j["optimum"] = rep.optimum.str();
    j["optima"] = nlohmann::json::array();
    for (const auto& [assignment, cost] : rep.optima) {
        nlohmann::json o;
        o["cost"] = cost.str();
        o["assignment"] = nlohmann::json::object();
        for (const auto& [name, value] : assignment) o["assignment"][name.str()] = value;
        j["optima"].push_back(o);
    }
    return j;
}

struct ParkOptions {
    bool use_normal_form = false;
    bool emit_tables = false;
};

struct ParkReport {
    std::string input_digest;
    std::string form_kind;
    Term form{Term::nil()};
    size_t width = 0;
    size_t peak_support = 0;
    bool feasible = false;
    ExtCost total;                // inf when infeasible
    ParkAssignment assignment;    // meaningful only when feasible
    std::string tables;
};

inline ParkReport run_park(const ParkingInstance& inst, const std::string& input_text,
                           const ParkOptions& opt = {}) {
    ParkReport rep;
    rep.input_digest = fnv1a_hex(input_text);
    rep.form_kind = opt.use_normal_form ? "normal" : "canonical";

    ParkEval eval = eval_parking_tree(inst, opt.use_normal_form);
    rep.form = eval.root->term;
    rep.width = complexity(rep.form);
    rep.peak_support = eval.peak_support;
    rep.total = eval.table().at(NameSet{});
    rep.feasible = !rep.total.is_infinite();
    if (rep.feasible) rep.assignment = park_backtrack(eval, inst);
    if (opt.emit_tables) rep.tables = render_park_dump(*eval.root);
    return rep;
}

inline std::string render_park_report(const ParkReport& rep) {
    std::ostringstream out;
    out << "input " << rep.input_digest << "\n";
    out << "form " << rep.form_kind << " " << render_term(rep.form) << "\n";
    out << "width " << rep.width << "\n";
    out << "peak support " << rep.peak_support << "\n";
    out << "total " << rep.total.str() << "\n";
    if (rep.feasible) {
        for (const auto& [car, zone] : rep.assignment.zone_of)
            out << "car " << car.str() << " zone " << zone << " cost "
                << rep.assignment.car_cost.at(car).str() << "\n";
    } else {
        out << "infeasible\n";
    }
    if (!rep.tables.empty()) out << "\n" << rep.tables;
    return out.str();
}

inline nlohmann::json park_report_json(const ParkReport& rep) {
    nlohmann::json j;
    j["input"] = rep.input_digest;
    j["form"] = rep.form_kind;
    j["term"] = render_term(rep.form);
    j["width"] = rep.width;
    j["peak_support"] = rep.peak_support;
    j["total"] = rep.total.str();
    j["feasible"] = rep.feasible;
    j["cars"] = nlohmann::json::object();
    if (rep.feasible) {
        for (const auto& [car, zone] : rep.assignment.zone_of) {
            nlohmann::json c;
            c["zone"] = zone;
            c["cost"] = rep.assignment.car_cost.at(car).str();
            j["cars"][car.str()] = c;
        }
    }
    return j;
}

}  // namespace optiterm
