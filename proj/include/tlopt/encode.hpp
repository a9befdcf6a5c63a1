#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tlopt/formula.hpp"
#include "tlopt/milp/bnb.hpp"
#include "tlopt/milp/model.hpp"
#include "tlopt/ops.hpp"
#include "tlopt/trace.hpp"

namespace tlopt {

// A formula translated into MILP variables and constraints. The model stays
// open: callers may add dynamics constraints, pin initial values, or replace
// the objective before solving. The stored formula is the PNF form that was
// encoded; node_vars is keyed by its node pointers.
struct EncodedSpec {
    milp::Model model;
    Formula formula;
    int horizon = 0;
    std::vector<std::string> signal_names;   // first-appearance order
    std::map<std::pair<const FormulaNode*, int>, int> node_vars;
    std::map<std::pair<std::string, int>, int> signal_vars;
    int root_var = -1;
    std::optional<int> robustness_var;   // rho (STL robust) or root r (wSTL)
    std::map<const FormulaNode*, double> predicate_big_m;

    // Var id of a signal at a step; throws UnknownSignalError.
    int signal_var(const std::string& name, int step) const;
};

// STL encoding: a binary z per (node, time). Predicates use big-M rows with
// M = max(|ub-c|, |lb-c|) + 1; in robust mode every predicate is tightened
// by one global shift variable rho in [-rho_max, rho_max] which the
// objective maximizes, delta = 1e-4 separates the violated side. And/Or/G/F
// use the standard z-inequalities; Until expands into one conjunction
// binary per step of its window, disjoined at the node.
EncodedSpec encode_stl(const Formula& f, const VarBounds& bounds, bool robust,
                       bool satisfaction,
                       std::optional<int> horizon_override = {});

// MTL encoding: one shared binary per (proposition, step) over the whole
// horizon, left free for external coupling; negated atoms read 1 - z.
EncodedSpec encode_mtl(const Formula& f, bool satisfaction = true,
                       std::optional<int> horizon_override = {});

// wSTL encoding: a continuous robustness variable r per (node, time);
// weighted And/Or (and their temporal forms) encode the exact minimum /
// maximum of {w_i * r_i} with selector binaries. The objective maximizes the
// root r; satisfaction adds r_root >= 0.
EncodedSpec encode_wstl(const Formula& f, const WeightTable& weights,
                        const VarBounds& bounds, bool satisfaction);

// Equality constraint fixing a signal's step-0 variable.
int pin_initial(EncodedSpec& spec, const std::string& signal, double value);

// Trace of all signal variables over steps 0..horizon.
Trace extract_trace(const EncodedSpec& spec, const milp::Solution& solution);

} // namespace tlopt
