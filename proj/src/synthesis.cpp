#include "tlopt/synthesis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "tlopt/ops.hpp"

namespace tlopt {

using milp::ConstrSense;
using milp::ObjSense;
using milp::SolveStatus;
using milp::Term;
using milp::VarKind;

void LtiSystem::validate() const {
    const int n = num_states();
    const int m = num_inputs();
    if (n == 0) throw DimensionError("system needs at least one state");
    if (horizon < 1) throw DimensionError("system horizon must be >= 1");
    if (A.rows() != n || A.cols() != n)
        throw DimensionError("A must be n x n with n = number of states");
    if (B.rows() != n || B.cols() != m)
        throw DimensionError("B must be n x m with m = number of inputs");
    if (C.size() > 0 && C.cols() != n)
        throw DimensionError("C must have n columns");
    if (D.size() != n) throw DimensionError("D must be an n-vector");
    if (initial_state.size() != n)
        throw DimensionError("initial state must be an n-vector");
    for (int i = 0; i < n; ++i) {
        const Bounds& b = state_bounds.at(state_names[static_cast<std::size_t>(i)]);
        if (initial_state[i] < b.lower || initial_state[i] > b.upper)
            throw BadBoundsError("initial state of '" +
                                 state_names[static_cast<std::size_t>(i)] +
                                 "' violates its bounds");
    }
    for (const auto& name : input_names) input_bounds.at(name);
    if (saturation && saturation->limit < 0)
        throw BadBoundsError("saturation limit must be >= 0");
}

namespace {

double robustness_value(const EncodedSpec& spec, const milp::Solution& sol) {
    if (!spec.robustness_var) return 0.0;
    return sol.values[static_cast<std::size_t>(*spec.robustness_var)];
}

double monitor(const Formula& f, SynthLogic logic, const WeightTable& weights,
               const Trace& trace) {
    return logic == SynthLogic::Stl ? robustness(f, trace, 0)
                                    : wstl_robustness(f, weights, trace, 0);
}

EncodedSpec encode_for(const Formula& f, SynthLogic logic, const VarBounds& bounds,
                       const WeightTable& weights, std::optional<int> horizon) {
    if (logic == SynthLogic::Stl) {
        EncodedSpec spec =
            encode_stl(f, bounds, /*robust=*/true, /*satisfaction=*/true, horizon);
        // Synthesis demands true satisfaction: a negative shift would only
        // satisfy the weakened formula, so unreachable specs come back
        // Infeasible instead.
        spec.model.add_constr({{1.0, *spec.robustness_var}}, ConstrSense::Ge, 0.0,
                              "rho_nonneg");
        return spec;
    }
    EncodedSpec spec = encode_wstl(f, weights, bounds, /*satisfaction=*/true);
    if (horizon && *horizon != spec.horizon)
        throw HorizonOverrideError(*horizon, spec.horizon);
    return spec;
}

SynthesisResult solve_and_extract(EncodedSpec& spec, const Formula& original,
                                  SynthLogic logic, const WeightTable& weights,
                                  const milp::BnbOptions& solver_options) {
    auto t0 = std::chrono::steady_clock::now();
    milp::Solution sol = milp::solve_milp(spec.model, solver_options);
    SynthesisResult res;
    res.status = sol.status;
    res.nodes = sol.nodes;
    res.solve_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    res.logic = logic;
    res.weights = weights;
    if (sol.status != SolveStatus::Optimal) return res;
    res.states = extract_trace(spec, sol);
    res.milp_robustness = robustness_value(spec, sol);
    res.monitor_robustness = monitor(original, logic, weights, res.states);
    res.objective = sol.objective;
    return res;
}

} // namespace

EncodedSpec build_trajectory_problem(const Formula& f, const VarBounds& bounds,
                                     const std::map<std::string, double>& initial,
                                     SynthLogic logic, const WeightTable& weights,
                                     std::optional<int> horizon) {
    EncodedSpec spec = encode_for(f, logic, bounds, weights, horizon);
    for (const auto& [signal, value] : initial) {
        const Bounds& b = bounds.at(signal);
        if (value < b.lower || value > b.upper)
            throw BadBoundsError("initial value of '" + signal + "' violates its bounds");
        pin_initial(spec, signal, value);
    }
    return spec;
}

SynthesisResult synth_trajectory(const Formula& f, const VarBounds& bounds,
                                 const std::map<std::string, double>& initial,
                                 SynthLogic logic, const WeightTable& weights,
                                 const SynthOptions& options) {
    EncodedSpec spec =
        build_trajectory_problem(f, bounds, initial, logic, weights, options.horizon);
    return solve_and_extract(spec, f, logic, weights, options.solver);
}

EncodedSpec build_control_problem(const Formula& f, const LtiSystem& sys,
                                  const CostWeights& costs, SynthLogic logic,
                                  const WeightTable& weights) {
    sys.validate();
    if (costs.lambda < 0) throw BadBoundsError("lambda must be >= 0");
    Eigen::VectorXd alpha = costs.alpha.size() == 0
                                ? Eigen::VectorXd::Zero(sys.num_states())
                                : costs.alpha;
    Eigen::VectorXd beta = costs.beta.size() == 0
                               ? Eigen::VectorXd::Zero(sys.num_inputs())
                               : costs.beta;
    if (alpha.size() != sys.num_states() || (alpha.size() > 0 && alpha.minCoeff() < 0))
        throw DimensionError("alpha must be a nonnegative n-vector");
    if (beta.size() != sys.num_inputs() || (beta.size() > 0 && beta.minCoeff() < 0))
        throw DimensionError("beta must be a nonnegative m-vector");

    for (const auto& name : collect_signals(f))
        if (std::find(sys.state_names.begin(), sys.state_names.end(), name) ==
            sys.state_names.end())
            throw UnknownSignalError(name);
    if (horizon(f) > sys.horizon)
        throw HorizonOverrideError(sys.horizon, horizon(f));

    const int n = sys.num_states();
    const int m = sys.num_inputs();
    const int K = sys.horizon;

    EncodedSpec spec = encode_for(f, logic, sys.state_bounds, weights, K);

    // State variables the formula does not mention still enter the dynamics.
    for (int i = 0; i < n; ++i) {
        const std::string& name = sys.state_names[static_cast<std::size_t>(i)];
        if (std::find(spec.signal_names.begin(), spec.signal_names.end(), name) !=
            spec.signal_names.end())
            continue;
        const Bounds& b = sys.state_bounds.at(name);
        spec.signal_names.push_back(name);
        for (int t = 0; t <= K; ++t)
            spec.signal_vars.emplace(
                std::make_pair(name, t),
                spec.model.add_var(name + "_" + std::to_string(t),
                                   VarKind::Continuous, b.lower, b.upper));
    }

    // Inputs live on steps 0..K-1; u(K) never enters the recurrence.
    std::vector<std::vector<int>> input_vars(static_cast<std::size_t>(m));
    double linf = sys.saturation && sys.saturation->norm == Saturation::Norm::Linf
                      ? sys.saturation->limit
                      : std::numeric_limits<double>::infinity();
    for (int j = 0; j < m; ++j) {
        const std::string& name = sys.input_names[static_cast<std::size_t>(j)];
        const Bounds& b = sys.input_bounds.at(name);
        double lo = std::max(b.lower, -linf);
        double hi = std::min(b.upper, linf);
        if (lo > hi) throw BadBoundsError("saturation leaves '" + name + "' empty");
        for (int t = 0; t < K; ++t)
            input_vars[static_cast<std::size_t>(j)].push_back(
                spec.model.add_var(name + "_" + std::to_string(t),
                                   VarKind::Continuous, lo, hi));
    }

    // s_i(k+1) = sum_j A_ij s_j(k) + sum_l B_il u_l(k) + D_i, componentwise.
    for (int k = 0; k + 1 <= K; ++k) {
        for (int i = 0; i < n; ++i) {
            std::vector<Term> terms{
                {1.0, spec.signal_var(sys.state_names[static_cast<std::size_t>(i)], k + 1)}};
            for (int j = 0; j < n; ++j) {
                double a = sys.A(i, j);
                if (a != 0.0)
                    terms.push_back(
                        {-a, spec.signal_var(sys.state_names[static_cast<std::size_t>(j)], k)});
            }
            for (int l = 0; l < m; ++l) {
                double bv = sys.B(i, l);
                if (bv != 0.0)
                    terms.push_back({-bv, input_vars[static_cast<std::size_t>(l)]
                                              [static_cast<std::size_t>(k)]});
            }
            spec.model.add_constr(std::move(terms), ConstrSense::Eq, sys.D[i],
                                  "dyn_" + sys.state_names[static_cast<std::size_t>(i)] +
                                      "_" + std::to_string(k));
        }
    }

    for (int i = 0; i < n; ++i)
        pin_initial(spec, sys.state_names[static_cast<std::size_t>(i)],
                    sys.initial_state[i]);

    // Absolute-value auxiliaries for the cost terms and L1 saturation.
    std::vector<Term> objective;
    if (spec.robustness_var && costs.lambda != 0.0)
        objective.push_back({costs.lambda, *spec.robustness_var});

    std::vector<std::vector<int>> input_abs(static_cast<std::size_t>(m));
    bool l1 = sys.saturation && sys.saturation->norm == Saturation::Norm::L1;
    for (int j = 0; j < m; ++j) {
        if (beta[j] == 0.0 && !l1) continue;
        const std::string& name = sys.input_names[static_cast<std::size_t>(j)];
        for (int t = 0; t < K; ++t) {
            int u = input_vars[static_cast<std::size_t>(j)][static_cast<std::size_t>(t)];
            double mag = std::max(std::abs(spec.model.var(u).lower),
                                  std::abs(spec.model.var(u).upper));
            int aux = spec.model.add_var(name + "_abs_" + std::to_string(t),
                                         VarKind::Continuous, 0.0, mag);
            spec.model.add_abs_link(u, aux);
            input_abs[static_cast<std::size_t>(j)].push_back(aux);
            if (beta[j] != 0.0) objective.push_back({-beta[j], aux});
        }
    }
    if (l1) {
        for (int t = 0; t < K; ++t) {
            std::vector<Term> sum;
            for (int j = 0; j < m; ++j)
                sum.push_back({1.0, input_abs[static_cast<std::size_t>(j)]
                                        [static_cast<std::size_t>(t)]});
            spec.model.add_constr(std::move(sum), ConstrSense::Le,
                                  sys.saturation->limit, "sat_" + std::to_string(t));
        }
    }
    for (int i = 0; i < n; ++i) {
        if (alpha[i] == 0.0) continue;
        const std::string& name = sys.state_names[static_cast<std::size_t>(i)];
        const Bounds& b = sys.state_bounds.at(name);
        double mag = std::max(std::abs(b.lower), std::abs(b.upper));
        for (int t = 0; t <= K; ++t) {
            int s = spec.signal_var(name, t);
            int aux = spec.model.add_var(name + "_abs_" + std::to_string(t),
                                         VarKind::Continuous, 0.0, mag);
            spec.model.add_abs_link(s, aux);
            objective.push_back({-alpha[i], aux});
        }
    }
    spec.model.set_objective(ObjSense::Maximize, std::move(objective));
    return spec;
}

SynthesisResult synth_control(const Formula& f, const LtiSystem& sys,
                              const CostWeights& costs, SynthLogic logic,
                              const WeightTable& weights,
                              const SynthOptions& options) {
    EncodedSpec spec = build_control_problem(f, sys, costs, logic, weights);
    const int m = sys.num_inputs();
    const int K = sys.horizon;

    auto t0 = std::chrono::steady_clock::now();
    milp::Solution sol = milp::solve_milp(spec.model, options.solver);
    SynthesisResult res;
    res.status = sol.status;
    res.nodes = sol.nodes;
    res.solve_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    res.logic = logic;
    res.weights = weights;
    res.system = sys;
    if (sol.status != SolveStatus::Optimal) return res;

    res.states = extract_trace(spec, sol);
    for (int j = 0; j < m; ++j) {
        const std::string& name = sys.input_names[static_cast<std::size_t>(j)];
        std::vector<double> samples;
        for (int t = 0; t < K; ++t)
            samples.push_back(sol.values[static_cast<std::size_t>(
                *spec.model.find_var(name + "_" + std::to_string(t)))]);
        res.inputs.add_signal(name, std::move(samples));
    }
    // y(k) = C s(k), computed rather than optimized.
    for (int r = 0; r < sys.C.rows(); ++r) {
        std::vector<double> samples;
        for (int t = 0; t <= K; ++t) {
            double y = 0.0;
            for (int i = 0; i < sys.num_states(); ++i)
                y += sys.C(r, i) *
                     res.states.value(sys.state_names[static_cast<std::size_t>(i)], t);
            samples.push_back(y);
        }
        res.outputs.add_signal("y" + std::to_string(r + 1), std::move(samples));
    }
    res.milp_robustness = robustness_value(spec, sol);
    res.monitor_robustness = monitor(f, logic, weights, res.states);
    res.objective = sol.objective;
    return res;
}

CheckReport check_result(const SynthesisResult& result, const Formula& f) {
    CheckReport report;
    if (!result.optimal())
        throw NotOptimalError();
    int needed = horizon(f);
    if (needed > result.states.last_step())
        throw TraceTooShortError(needed, result.states.last_step());

    report.monitor_robustness = monitor(f, result.logic, result.weights, result.states);
    report.boolean_satisfied = evaluate_bool(f, result.states, 0);
    report.robustness_consistent =
        report.monitor_robustness >= result.milp_robustness - 1e-6;

    report.max_dynamics_residual = 0.0;
    report.dynamics_ok = true;
    if (result.system) {
        const LtiSystem& sys = *result.system;
        const int n = sys.num_states();
        const int m = sys.num_inputs();
        for (int k = 0; k + 1 <= sys.horizon; ++k) {
            for (int i = 0; i < n; ++i) {
                double next = 0.0;
                for (int j = 0; j < n; ++j)
                    next += sys.A(i, j) *
                            result.states.value(sys.state_names[static_cast<std::size_t>(j)], k);
                for (int l = 0; l < m; ++l)
                    next += sys.B(i, l) *
                            result.inputs.value(sys.input_names[static_cast<std::size_t>(l)], k);
                next += sys.D[i];
                double got =
                    result.states.value(sys.state_names[static_cast<std::size_t>(i)], k + 1);
                report.max_dynamics_residual =
                    std::max(report.max_dynamics_residual, std::abs(got - next));
            }
        }
        report.dynamics_ok = report.max_dynamics_residual <= 1e-6;
    }
    report.ok = report.dynamics_ok && report.robustness_consistent;
    return report;
}

} // namespace tlopt
