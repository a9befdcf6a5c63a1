#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "tlopt/encode.hpp"
#include "tlopt/io.hpp"
#include "tlopt/milp/bnb.hpp"
#include "tlopt/milp/simplex.hpp"
#include "tlopt/ops.hpp"
#include "tlopt/parser.hpp"
#include "tlopt/synthesis.hpp"

namespace py = pybind11;
using namespace tlopt;

namespace {

Trace trace_from_dict(const std::map<std::string, std::vector<double>>& signals) {
    Trace t;
    for (const auto& [name, samples] : signals) t.add_signal(name, samples);
    return t;
}

VarBounds bounds_from_dict(const std::map<std::string, std::pair<double, double>>& m) {
    VarBounds b;
    for (const auto& [name, lohi] : m) b.set(name, lohi.first, lohi.second);
    return b;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Temporal logic toolkit: STL/MTL/wSTL parsing, robustness, and "
              "MILP-based synthesis";

    py::register_exception<LexError>(m, "LexError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<SemanticError>(m, "SemanticError", PyExc_ValueError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    py::enum_<Logic>(m, "Logic")
        .value("STL", Logic::Stl)
        .value("MTL", Logic::Mtl)
        .value("WSTL", Logic::Wstl);

    py::enum_<NodeKind>(m, "NodeKind")
        .value("Predicate", NodeKind::Predicate)
        .value("BoolConst", NodeKind::BoolConst)
        .value("Not", NodeKind::Not)
        .value("And", NodeKind::And)
        .value("Or", NodeKind::Or)
        .value("Always", NodeKind::Always)
        .value("Eventually", NodeKind::Eventually)
        .value("Until", NodeKind::Until);

    py::class_<Formula>(m, "Formula")
        .def_property_readonly("kind", &Formula::kind)
        .def_property_readonly("children",
                               [](const Formula& f) { return f.children(); })
        .def_property_readonly("weight",
                               [](const Formula& f) { return f.weight(); })
        .def_property_readonly("interval",
                               [](const Formula& f) -> std::optional<std::pair<int, int>> {
                                   if (!is_temporal(f.kind())) return std::nullopt;
                                   return std::make_pair(f.interval().lo, f.interval().hi);
                               })
        .def("__str__", &print_formula)
        .def("__repr__",
             [](const Formula& f) { return "Formula(" + print_formula(f) + ")"; })
        .def("__eq__", [](const Formula& a, const Formula& b) { return a == b; });

    py::class_<Trace>(m, "Trace")
        .def(py::init(&trace_from_dict), py::arg("signals"))
        .def_property_readonly("signal_names", &Trace::signal_names)
        .def("__len__", &Trace::length)
        .def("value", &Trace::value, py::arg("signal"), py::arg("step"))
        .def("samples",
             [](const Trace& t, const std::string& name) { return t.samples(name); })
        .def("to_dict", [](const Trace& t) {
            std::map<std::string, std::vector<double>> out;
            for (const auto& name : t.signal_names()) out[name] = t.samples(name);
            return out;
        });

    m.def("parse_stl", &parse_stl, py::arg("text"));
    m.def("parse_mtl", &parse_mtl, py::arg("text"));
    m.def("parse_wstl", &parse_wstl, py::arg("text"), py::arg("weights"));
    m.def("print_formula", &print_formula, py::arg("formula"));
    m.def("horizon", &horizon, py::arg("formula"));
    m.def("pnf", &pnf, py::arg("formula"));
    m.def("negate", &negate, py::arg("formula"));

    m.def("evaluate_bool", &evaluate_bool, py::arg("formula"), py::arg("trace"),
          py::arg("t") = 0);
    m.def("robustness", &robustness, py::arg("formula"), py::arg("trace"),
          py::arg("t") = 0);
    m.def(
        "agm_robustness",
        [](const Formula& f, const Trace& trace, int t,
           const std::map<std::string, std::pair<double, double>>& bounds) {
            return agm_robustness(f, trace, t, bounds_from_dict(bounds));
        },
        py::arg("formula"), py::arg("trace"), py::arg("t"), py::arg("bounds"));
    m.def("wstl_robustness", &wstl_robustness, py::arg("formula"), py::arg("weights"),
          py::arg("trace"), py::arg("t") = 0);
    m.def(
        "batch_robustness",
        [](const Formula& f, const std::vector<Trace>& traces, const std::string& method,
           const std::optional<std::map<std::string, std::pair<double, double>>>& bounds) {
            RobustnessMethod rm = method == "agm" ? RobustnessMethod::Agm
                                                  : RobustnessMethod::Classic;
            if (bounds) {
                VarBounds vb = bounds_from_dict(*bounds);
                return batch_robustness(f, traces, rm, &vb);
            }
            return batch_robustness(f, traces, rm, nullptr);
        },
        py::arg("formula"), py::arg("traces"), py::arg("method") = "classic",
        py::arg("bounds") = std::nullopt);

    py::enum_<milp::SolveStatus>(m, "SolveStatus")
        .value("Optimal", milp::SolveStatus::Optimal)
        .value("Infeasible", milp::SolveStatus::Infeasible)
        .value("Unbounded", milp::SolveStatus::Unbounded)
        .value("GapLimit", milp::SolveStatus::GapLimit)
        .value("NodeLimit", milp::SolveStatus::NodeLimit);

    py::class_<milp::Solution>(m, "Solution")
        .def_readonly("status", &milp::Solution::status)
        .def_readonly("values", &milp::Solution::values)
        .def_readonly("objective", &milp::Solution::objective)
        .def_readonly("bound", &milp::Solution::bound)
        .def_readonly("gap", &milp::Solution::gap)
        .def_readonly("nodes", &milp::Solution::nodes);

    py::class_<milp::BnbOptions>(m, "BnbOptions")
        .def(py::init<>())
        .def_readwrite("int_tol", &milp::BnbOptions::int_tol)
        .def_readwrite("gap", &milp::BnbOptions::gap)
        .def_readwrite("node_limit", &milp::BnbOptions::node_limit)
        .def_readwrite("time_limit_s", &milp::BnbOptions::time_limit_s);

    py::class_<milp::Model>(m, "Model")
        .def(py::init<>())
        .def("add_var",
             [](milp::Model& mod, const std::string& name, const std::string& kind,
                double lower, double upper) {
                 return mod.add_var(name,
                                    kind == "binary" ? milp::VarKind::Binary
                                                     : milp::VarKind::Continuous,
                                    lower, upper);
             },
             py::arg("name"), py::arg("kind"), py::arg("lower"), py::arg("upper"))
        .def("add_constr",
             [](milp::Model& mod, const std::vector<std::pair<double, int>>& terms,
                const std::string& sense, double rhs, const std::string& name) {
                 std::vector<milp::Term> ts;
                 for (const auto& [c, v] : terms) ts.push_back({c, v});
                 milp::ConstrSense s = sense == "<=" ? milp::ConstrSense::Le
                                       : sense == ">=" ? milp::ConstrSense::Ge
                                                       : milp::ConstrSense::Eq;
                 return mod.add_constr(std::move(ts), s, rhs, name);
             },
             py::arg("terms"), py::arg("sense"), py::arg("rhs"), py::arg("name") = "")
        .def("add_abs_link",
             [](milp::Model& mod, int source, int aux) {
                 auto link = mod.add_abs_link(source, aux);
                 return std::make_pair(link.constraints, link.sigma);
             },
             py::arg("source"), py::arg("aux"))
        .def("set_objective",
             [](milp::Model& mod, const std::string& sense,
                const std::vector<std::pair<double, int>>& terms) {
                 std::vector<milp::Term> ts;
                 for (const auto& [c, v] : terms) ts.push_back({c, v});
                 mod.set_objective(sense == "min" ? milp::ObjSense::Minimize
                                                  : milp::ObjSense::Maximize,
                                   std::move(ts));
             },
             py::arg("sense"), py::arg("terms"))
        .def_property_readonly("num_vars", &milp::Model::num_vars)
        .def_property_readonly("num_constraints", &milp::Model::num_constraints)
        .def_property_readonly("num_binaries", &milp::Model::num_binaries)
        .def("export_lp", &milp::Model::export_lp);

    m.def(
        "solve_lp",
        [](const milp::Model& mod) {
            auto r = milp::solve_lp(mod);
            const char* status = r.status == milp::LpStatus::Optimal ? "optimal"
                                 : r.status == milp::LpStatus::Infeasible
                                     ? "infeasible"
                                     : "unbounded";
            return py::make_tuple(status, r.values, r.objective);
        },
        py::arg("model"));
    m.def("solve_milp", &milp::solve_milp, py::arg("model"),
          py::arg("options") = milp::BnbOptions{});

    py::class_<EncodedSpec>(m, "EncodedSpec")
        .def_readonly("model", &EncodedSpec::model)
        .def_readonly("horizon", &EncodedSpec::horizon)
        .def_readonly("signal_names", &EncodedSpec::signal_names)
        .def_readonly("root_var", &EncodedSpec::root_var)
        .def_readonly("robustness_var", &EncodedSpec::robustness_var)
        .def("signal_var", &EncodedSpec::signal_var, py::arg("signal"), py::arg("step"));

    m.def(
        "encode_stl",
        [](const Formula& f, const std::map<std::string, std::pair<double, double>>& bounds,
           bool robust, bool satisfaction, std::optional<int> horizon_override) {
            return encode_stl(f, bounds_from_dict(bounds), robust, satisfaction,
                              horizon_override);
        },
        py::arg("formula"), py::arg("bounds"), py::arg("robust") = true,
        py::arg("satisfaction") = true, py::arg("horizon") = std::nullopt);
    m.def("encode_mtl", &encode_mtl, py::arg("formula"), py::arg("satisfaction") = true,
          py::arg("horizon") = std::nullopt);
    m.def(
        "encode_wstl",
        [](const Formula& f, const WeightTable& weights,
           const std::map<std::string, std::pair<double, double>>& bounds,
           bool satisfaction) {
            return encode_wstl(f, weights, bounds_from_dict(bounds), satisfaction);
        },
        py::arg("formula"), py::arg("weights"), py::arg("bounds"),
        py::arg("satisfaction") = true);
    m.def("pin_initial", &pin_initial, py::arg("spec"), py::arg("signal"),
          py::arg("value"));
    m.def("extract_trace", &extract_trace, py::arg("spec"), py::arg("solution"));

    py::class_<Saturation> saturation(m, "Saturation");
    py::enum_<Saturation::Norm>(saturation, "Norm")
        .value("L1", Saturation::Norm::L1)
        .value("Linf", Saturation::Norm::Linf);
    saturation.def(py::init([](const std::string& norm, double limit) {
                       Saturation s;
                       s.norm = norm == "l1" ? Saturation::Norm::L1
                                             : Saturation::Norm::Linf;
                       s.limit = limit;
                       return s;
                   }),
                   py::arg("norm"), py::arg("limit"))
        .def_readwrite("limit", &Saturation::limit);

    py::class_<LtiSystem>(m, "LtiSystem")
        .def(py::init<>())
        .def_readwrite("A", &LtiSystem::A)
        .def_readwrite("B", &LtiSystem::B)
        .def_readwrite("C", &LtiSystem::C)
        .def_readwrite("D", &LtiSystem::D)
        .def_readwrite("state_names", &LtiSystem::state_names)
        .def_readwrite("input_names", &LtiSystem::input_names)
        .def_readwrite("initial_state", &LtiSystem::initial_state)
        .def_readwrite("horizon", &LtiSystem::horizon)
        .def_readwrite("saturation", &LtiSystem::saturation)
        .def("set_state_bounds",
             [](LtiSystem& sys, const std::string& name, double lo, double hi) {
                 sys.state_bounds.set(name, lo, hi);
             })
        .def("set_input_bounds",
             [](LtiSystem& sys, const std::string& name, double lo, double hi) {
                 sys.input_bounds.set(name, lo, hi);
             });

    py::class_<CostWeights>(m, "CostWeights")
        .def(py::init<>())
        .def_readwrite("lambda_", &CostWeights::lambda)
        .def_readwrite("alpha", &CostWeights::alpha)
        .def_readwrite("beta", &CostWeights::beta);

    py::enum_<SynthLogic>(m, "SynthLogic")
        .value("STL", SynthLogic::Stl)
        .value("WSTL", SynthLogic::Wstl);

    py::class_<SynthesisResult>(m, "SynthesisResult")
        .def_readonly("status", &SynthesisResult::status)
        .def_readonly("states", &SynthesisResult::states)
        .def_readonly("inputs", &SynthesisResult::inputs)
        .def_readonly("outputs", &SynthesisResult::outputs)
        .def_readonly("milp_robustness", &SynthesisResult::milp_robustness)
        .def_readonly("monitor_robustness", &SynthesisResult::monitor_robustness)
        .def_readonly("objective", &SynthesisResult::objective)
        .def_readonly("nodes", &SynthesisResult::nodes)
        .def_property_readonly("optimal", &SynthesisResult::optimal);

    py::class_<CheckReport>(m, "CheckReport")
        .def_readonly("max_dynamics_residual", &CheckReport::max_dynamics_residual)
        .def_readonly("monitor_robustness", &CheckReport::monitor_robustness)
        .def_readonly("boolean_satisfied", &CheckReport::boolean_satisfied)
        .def_readonly("robustness_consistent", &CheckReport::robustness_consistent)
        .def_readonly("dynamics_ok", &CheckReport::dynamics_ok)
        .def_readonly("ok", &CheckReport::ok);

    m.def(
        "synth_trajectory",
        [](const Formula& f, const std::map<std::string, std::pair<double, double>>& bounds,
           const std::map<std::string, double>& initial, SynthLogic logic,
           const WeightTable& weights, std::optional<int> horizon_override,
           const milp::BnbOptions& solver) {
            SynthOptions opt;
            opt.horizon = horizon_override;
            opt.solver = solver;
            return synth_trajectory(f, bounds_from_dict(bounds), initial, logic,
                                    weights, opt);
        },
        py::arg("formula"), py::arg("bounds"), py::arg("initial") = std::map<std::string, double>{},
        py::arg("logic") = SynthLogic::Stl, py::arg("weights") = WeightTable{},
        py::arg("horizon") = std::nullopt, py::arg("solver") = milp::BnbOptions{});
    m.def(
        "synth_control",
        [](const Formula& f, const LtiSystem& sys, const CostWeights& costs,
           SynthLogic logic, const WeightTable& weights, const milp::BnbOptions& solver) {
            SynthOptions opt;
            opt.solver = solver;
            return synth_control(f, sys, costs, logic, weights, opt);
        },
        py::arg("formula"), py::arg("system"), py::arg("costs") = CostWeights{},
        py::arg("logic") = SynthLogic::Stl, py::arg("weights") = WeightTable{},
        py::arg("solver") = milp::BnbOptions{});
    m.def("check_result", &check_result, py::arg("result"), py::arg("formula"));

    m.def("load_system_config", &load_system_config, py::arg("path"));
    m.def("read_trace_csv", &read_trace_csv, py::arg("path"));
    m.def(
        "write_trace_csv",
        [](const std::filesystem::path& path, const Trace& states,
           const std::optional<Trace>& inputs) {
            write_trace_csv(path, states, inputs ? &*inputs : nullptr);
        },
        py::arg("path"), py::arg("states"), py::arg("inputs") = std::nullopt);
}
