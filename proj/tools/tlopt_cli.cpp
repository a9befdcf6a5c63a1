#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tlopt/encode.hpp"
#include "tlopt/io.hpp"
#include "tlopt/ops.hpp"
#include "tlopt/parser.hpp"
#include "tlopt/synthesis.hpp"

namespace {

namespace fs = std::filesystem;
using namespace tlopt;

// Exit codes: 0 success, 1 parse/lex, 2 semantic, 3 infeasible/unbounded, 4 I/O.
constexpr int kExitSyntax = 1;
constexpr int kExitSemantic = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitIo = 4;

Logic logic_from(const std::string& name) {
    if (name == "stl") return Logic::Stl;
    if (name == "mtl") return Logic::Mtl;
    if (name == "wstl") return Logic::Wstl;
    throw SemanticError("unknown logic '" + name + "' (use stl, mtl or wstl)");
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
    return text;
}

void print_caret(const std::string& text, SourceSpan span) {
    std::size_t line_begin = text.rfind('\n', span.begin == 0 ? 0 : span.begin - 1);
    line_begin = line_begin == std::string::npos ? 0 : line_begin + 1;
    std::size_t line_end = text.find('\n', span.begin);
    if (line_end == std::string::npos) line_end = text.size();
    std::cerr << "  " << text.substr(line_begin, line_end - line_begin) << '\n'
              << "  " << std::string(span.begin - line_begin, ' ') << "^\n";
}

void print_tree(std::ostream& os, const Formula& f, int depth) {
    os << std::string(static_cast<std::size_t>(depth), ' ');
    switch (f.kind()) {
    case NodeKind::Predicate: {
        const Predicate& p = f.predicate();
        if (p.kind == Predicate::Kind::Atom)
            os << "Atom " << (p.negated ? "!" : "") << p.name;
        else
            os << "Pred " << p.name << (p.sense == CmpSense::Ge ? " >= " : " <= ")
               << format_number(p.threshold);
        break;
    }
    case NodeKind::BoolConst:
        os << "BoolConst " << (f.const_value() ? "true" : "false");
        break;
    case NodeKind::Not: os << "Not"; break;
    case NodeKind::And: os << "And"; break;
    case NodeKind::Or: os << "Or"; break;
    case NodeKind::Always: os << "Always"; break;
    case NodeKind::Eventually: os << "Eventually"; break;
    case NodeKind::Until: os << "Until"; break;
    }
    if (f.kind() != NodeKind::Predicate && f.weight()) os << '^' << *f.weight();
    if (is_temporal(f.kind()))
        os << '[' << f.interval().lo << ',' << f.interval().hi << ']';
    os << '\n';
    for (const auto& c : f.children()) print_tree(os, c, depth + 1);
}

struct SpecInput {
    std::string logic_name = "stl";
    std::string spec_text;
    std::string spec_file;
    std::string weights_file;

    void add_to(CLI::App* cmd, bool weights = true) {
        cmd->add_option("--logic", logic_name, "Specification logic: stl, mtl, wstl")
            ->check(CLI::IsMember({"stl", "mtl", "wstl"}));
        auto* spec = cmd->add_option("--spec", spec_text, "Specification string");
        auto* file = cmd->add_option("--file", spec_file, "File with the specification");
        spec->excludes(file);
        if (weights)
            cmd->add_option("--weights", weights_file, "JSON weight table (wSTL)");
    }

    std::string text() const {
        if (!spec_text.empty()) return spec_text;
        if (!spec_file.empty()) return read_file(spec_file);
        throw SemanticError("either --spec or --file is required");
    }

    WeightTable weights() const {
        return weights_file.empty() ? WeightTable{} : load_weight_table(weights_file);
    }

    Formula parse_it(const std::string& text, const WeightTable& table) const {
        return parse(text, logic_from(logic_name), table);
    }
};

int cmd_parse(const SpecInput& input) {
    std::string text = input.text();
    try {
        Formula f = input.parse_it(text, input.weights());
        print_tree(std::cout, f, 0);
        return 0;
    } catch (const SyntaxError& e) {
        std::cerr << "error: " << e.what() << '\n';
        print_caret(text, e.span);
        return kExitSyntax;
    }
}

int cmd_analyze(const SpecInput& input, bool show_horizon, bool show_pnf,
                bool show_negate) {
    std::string text = input.text();
    Formula f;
    try {
        f = input.parse_it(text, input.weights());
    } catch (const SyntaxError& e) {
        std::cerr << "error: " << e.what() << '\n';
        print_caret(text, e.span);
        return kExitSyntax;
    }
    if (show_horizon) std::cout << horizon(f) << '\n';
    if (show_pnf) std::cout << print_formula(pnf(f)) << '\n';
    if (show_negate) std::cout << print_formula(negate(f)) << '\n';
    return 0;
}

int cmd_robustness(const SpecInput& input, const std::string& trace_file,
                   const std::string& method, const std::string& bounds_file,
                   int at_time, const std::string& batch_dir) {
    WeightTable table = input.weights();
    Formula f = input.parse_it(input.text(), table);
    Logic logic = logic_from(input.logic_name);

    VarBounds bounds;
    if (!bounds_file.empty()) bounds = load_bounds(bounds_file);
    bool agm = method == "agm";
    if (agm && bounds.empty()) throw MissingBoundError();
    if (agm && logic == Logic::Wstl)
        throw UnsupportedOperatorError("AGM robustness is not defined for wSTL");

    auto single = [&](const Trace& trace, int t) {
        if (agm) return agm_robustness(f, trace, t, bounds);
        if (logic == Logic::Wstl) return wstl_robustness(f, table, trace, t);
        return robustness(f, trace, t);
    };

    if (!batch_dir.empty()) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(batch_dir))
            if (entry.is_regular_file() && entry.path().extension() == ".csv")
                files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        if (files.empty()) throw IoError("no .csv files in '" + batch_dir + "'");
        for (const auto& file : files)
            std::cout << format_number(single(read_trace_csv(file), 0)) << '\n';
        return 0;
    }
    if (trace_file.empty()) throw SemanticError("either --trace or --batch is required");
    std::cout << format_number(single(read_trace_csv(trace_file), at_time)) << '\n';
    return 0;
}

int cmd_synth(const std::string& config_file, const std::string& out_file,
              const std::string& export_lp_file, double gap, long nodes) {
    SystemConfig cfg = load_system_config(config_file);
    if (cfg.logic == Logic::Mtl)
        throw UnsupportedOperatorError(
            "synth expects an stl or wstl specification");
    SynthLogic logic = cfg.logic == Logic::Wstl ? SynthLogic::Wstl : SynthLogic::Stl;
    Formula f = parse(cfg.formula, cfg.logic, cfg.weights);

    SynthOptions options;
    options.solver.gap = gap;
    options.solver.node_limit = nodes;
    options.horizon = cfg.horizon;

    if (!export_lp_file.empty()) {
        EncodedSpec spec =
            cfg.system
                ? build_control_problem(f, *cfg.system, cfg.costs, logic, cfg.weights)
                : build_trajectory_problem(f, cfg.signal_bounds, cfg.initial, logic,
                                           cfg.weights, cfg.horizon);
        std::ofstream lp(export_lp_file);
        if (!lp) throw IoError("cannot write '" + export_lp_file + "'");
        lp << spec.model.export_lp();
    }

    SynthesisResult res =
        cfg.system ? synth_control(f, *cfg.system, cfg.costs, logic, cfg.weights, options)
                   : synth_trajectory(f, cfg.signal_bounds, cfg.initial, logic,
                                      cfg.weights, options);

    std::cout << "status: " << milp::status_name(res.status) << '\n';
    if (!res.optimal()) return kExitInfeasible;

    std::cout << "rho_milp: " << format_number(res.milp_robustness) << '\n'
              << "rho_monitor: " << format_number(res.monitor_robustness) << '\n'
              << "objective: " << format_number(res.objective) << '\n'
              << "nodes: " << res.nodes << '\n';
    if (!out_file.empty())
        write_trace_csv(out_file, res.states,
                        res.inputs.empty() ? nullptr : &res.inputs);
    if (res.system) {
        CheckReport report = check_result(res, f);
        std::cout << "dynamics_residual: " << format_number(report.max_dynamics_residual)
                  << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Temporal logic toolkit: parse STL/MTL/wSTL, compute robustness, "
                 "and synthesize trajectories/controllers through a built-in MILP solver"};
    app.require_subcommand(1);

    SpecInput parse_input;
    auto* parse_cmd = app.add_subcommand("parse", "Parse a specification and dump its AST");
    parse_input.add_to(parse_cmd);

    SpecInput analyze_input;
    bool show_horizon = false, show_pnf = false, show_negate = false;
    auto* analyze_cmd = app.add_subcommand("analyze", "Horizon / PNF / negation of a specification");
    analyze_input.add_to(analyze_cmd);
    auto* opt_h = analyze_cmd->add_flag("--horizon", show_horizon, "Print the time horizon");
    auto* opt_p = analyze_cmd->add_flag("--pnf", show_pnf, "Print the positive normal form");
    auto* opt_n = analyze_cmd->add_flag("--negate", show_negate, "Print the negation (in PNF)");
    opt_h->excludes(opt_p)->excludes(opt_n);
    opt_p->excludes(opt_n);

    SpecInput rob_input;
    std::string trace_file, method = "classic", bounds_file, batch_dir;
    int at_time = 0;
    auto* rob_cmd = app.add_subcommand("robustness", "Robustness of a trace (or batch of traces)");
    rob_input.add_to(rob_cmd);
    rob_cmd->add_option("--trace", trace_file, "Trace CSV file");
    rob_cmd->add_option("--method", method, "classic or agm")
        ->check(CLI::IsMember({"classic", "agm"}));
    rob_cmd->add_option("--bounds", bounds_file, "JSON variable bounds (AGM)");
    rob_cmd->add_option("--time", at_time, "Evaluation time step (default 0)");
    rob_cmd->add_option("--batch", batch_dir, "Directory of trace CSVs, evaluated in name order");

    std::string config_file, out_file, export_lp_file;
    double gap = 1e-6;
    long node_limit = 100000;
    auto* synth_cmd = app.add_subcommand("synth", "Trajectory / control synthesis from a JSON config");
    synth_cmd->add_option("--config", config_file, "Problem configuration JSON")->required();
    synth_cmd->add_option("--out", out_file, "Output trace CSV");
    synth_cmd->add_option("--export-lp", export_lp_file, "Write the MILP in LP format before solving");
    synth_cmd->add_option("--gap", gap, "Relative MILP gap target (default 1e-6)");
    synth_cmd->add_option("--nodes", node_limit, "Branch-and-bound node limit");

    CLI11_PARSE(app, argc, argv);

    try {
        if (parse_cmd->parsed()) return cmd_parse(parse_input);
        if (analyze_cmd->parsed()) {
            if (!show_horizon && !show_pnf && !show_negate) {
                std::cerr << "error: one of --horizon, --pnf, --negate is required\n";
                return kExitSemantic;
            }
            return cmd_analyze(analyze_input, show_horizon, show_pnf, show_negate);
        }
        if (rob_cmd->parsed())
            return cmd_robustness(rob_input, trace_file, method, bounds_file, at_time,
                                  batch_dir);
        if (synth_cmd->parsed())
            return cmd_synth(config_file, out_file, export_lp_file, gap, node_limit);
    } catch (const SyntaxError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitSyntax;
    } catch (const SemanticError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitSemantic;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    }
    return 0;
}
