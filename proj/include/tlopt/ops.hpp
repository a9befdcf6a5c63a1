#pragma once

#include <vector>

#include "tlopt/formula.hpp"
#include "tlopt/trace.hpp"

namespace tlopt {

// Number of future steps the truth of f at time t can depend on:
// 0 for leaves, b plus the children's horizon for temporal operators.
int horizon(const Formula& f);

// Positive normal form: no Not nodes remain. Negation is absorbed into
// predicates (>= flips to <=; atoms toggle their negation marker), pushed
// through And/Or by De Morgan and through G/F by duality; weights are kept
// unchanged when dualizing. Throws UnsupportedNegationError when a negation
// reaches an Until node.
Formula pnf(const Formula& f);

// pnf applied to the negation of f.
Formula negate(const Formula& f);

// Boolean satisfaction at step t. Linear predicates compare non-strictly;
// MTL atoms read 0/1 signals (value > 0.5 is true). Weight tags are ignored.
bool evaluate_bool(const Formula& f, const Trace& trace, int t = 0);

// Traditional quantitative semantics: margin of predicates, min/max over
// And/Or and the temporal windows. MTL formulas return +1/-1 from Boolean
// satisfaction. Positive robustness implies evaluate_bool is true.
double robustness(const Formula& f, const Trace& trace, int t = 0);

// Arithmetic-geometric-mean robustness, normalized to [-1, 1] using the
// per-signal bounds. Until is not supported.
double agm_robustness(const Formula& f, const Trace& trace, int t,
                      const VarBounds& bounds);

// Weighted robustness for wSTL: And/Or aggregate min_i w_i*r_i / max_i
// w_i*r_i, G/F the time-indexed analogues with temporal weights. With
// all-ones weights this coincides exactly with robustness().
double wstl_robustness(const Formula& f, const WeightTable& weights,
                       const Trace& trace, int t = 0);

enum class RobustnessMethod { Classic, Agm };

// Element i is the single-trace method applied to traces[i] at t = 0.
// Per-trace failures are rethrown as BatchError with the trace index.
std::vector<double> batch_robustness(const Formula& f,
                                     const std::vector<Trace>& traces,
                                     RobustnessMethod method,
                                     const VarBounds* bounds = nullptr);

} // namespace tlopt
