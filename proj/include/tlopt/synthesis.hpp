#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tlopt/encode.hpp"
#include "tlopt/formula.hpp"
#include "tlopt/milp/bnb.hpp"
#include "tlopt/trace.hpp"

namespace tlopt {

struct Saturation {
    enum class Norm { L1, Linf };
    Norm norm = Norm::Linf;
    double limit = 1.0;
};

// Discrete-time LTI system s(k+1) = A s(k) + B u(k) + D, y(k) = C s(k).
// Formula signals bind to state components by name.
struct LtiSystem {
    Eigen::MatrixXd A;   // n x n
    Eigen::MatrixXd B;   // n x m
    Eigen::MatrixXd C;   // p x n
    Eigen::VectorXd D;   // n (drift, added every step)
    std::vector<std::string> state_names;
    std::vector<std::string> input_names;
    VarBounds state_bounds;
    VarBounds input_bounds;
    Eigen::VectorXd initial_state;
    int horizon = 1;
    std::optional<Saturation> saturation;

    int num_states() const { return static_cast<int>(state_names.size()); }
    int num_inputs() const { return static_cast<int>(input_names.size()); }
    void validate() const;   // DimensionError / BadBoundsError on violations
};

// J = lambda * rho - alpha . |s|_1 - beta . |u|_1, all weights >= 0.
struct CostWeights {
    double lambda = 1.0;
    Eigen::VectorXd alpha;   // per state; empty means zeros
    Eigen::VectorXd beta;    // per input; empty means zeros
};

enum class SynthLogic { Stl, Wstl };

struct SynthesisResult {
    milp::SolveStatus status = milp::SolveStatus::Infeasible;
    Trace states;
    Trace inputs;    // steps 0..K-1 (control runs only)
    Trace outputs;   // y = C s, computed from the state trace
    double milp_robustness = 0.0;      // rho* (STL) or root r* (wSTL)
    double monitor_robustness = 0.0;   // recomputed on the extracted trace
    double objective = 0.0;
    long nodes = 0;
    double solve_seconds = 0.0;
    SynthLogic logic = SynthLogic::Stl;
    WeightTable weights;                 // wSTL table used, kept for checking
    std::optional<LtiSystem> system;     // present for synth_control results

    bool optimal() const { return status == milp::SolveStatus::Optimal; }
};

struct SynthOptions {
    milp::BnbOptions solver;
    std::optional<int> horizon;   // encoding horizon override (trajectory)
};

// Model builders behind the synth_* calls, exposed so the complete MILP can
// be exported before solving. Deterministic: building twice with the same
// arguments yields byte-identical LP exports.
EncodedSpec build_trajectory_problem(const Formula& f, const VarBounds& bounds,
                                     const std::map<std::string, double>& initial,
                                     SynthLogic logic,
                                     const WeightTable& weights = {},
                                     std::optional<int> horizon = {});
EncodedSpec build_control_problem(const Formula& f, const LtiSystem& sys,
                                  const CostWeights& costs, SynthLogic logic,
                                  const WeightTable& weights = {});

// Trajectory optimization: encode (robust STL / wSTL), pin initial values,
// solve, extract. No dynamics constraints.
SynthesisResult synth_trajectory(const Formula& f, const VarBounds& bounds,
                                 const std::map<std::string, double>& initial,
                                 SynthLogic logic,
                                 const WeightTable& weights = {},
                                 const SynthOptions& options = {});

// Open-loop control synthesis over sys.horizon: dynamics equalities,
// initial state pin, optional saturation, and the regularized objective
// lambda*rho - sum alpha_i |s_i(k)| - sum beta_j |u_j(k)| built from exact
// absolute-value links.
SynthesisResult synth_control(const Formula& f, const LtiSystem& sys,
                              const CostWeights& costs, SynthLogic logic,
                              const WeightTable& weights = {},
                              const SynthOptions& options = {});

struct CheckReport {
    double max_dynamics_residual = 0.0;
    double monitor_robustness = 0.0;
    bool boolean_satisfied = false;
    bool robustness_consistent = false;   // monitor >= milp rho* - 1e-6
    bool dynamics_ok = false;
    bool ok = false;
};

// Independent cross-validation of a synthesis result: recomputes dynamics
// residuals, monitor robustness, and Boolean satisfaction.
CheckReport check_result(const SynthesisResult& result, const Formula& f);

} // namespace tlopt
