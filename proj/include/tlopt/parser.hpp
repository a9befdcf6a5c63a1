#pragma once

#include <string_view>

#include "tlopt/formula.hpp"

namespace tlopt {

// Recursive-descent parsers for the three specification languages.
//
// Precedence, weakest to tightest: || < && < U < {!, F, G}; parentheses
// override. Infix && / || chains collapse into one n-ary node. Temporal
// operators require an explicit [a,b] interval with nonnegative integer
// bounds. Comparisons normalize > to >= and < to <=; = / == are rejected.
Formula parse_stl(std::string_view text);

// Same grammar with bare identifiers as leaves; comparisons are rejected.
Formula parse_mtl(std::string_view text);

// Adds the weighted forms `&&^p(f1, f2, ...)`, `||^p(...)`, `G^w[a,b] f`,
// `F^w[a,b] f`. Weight names must resolve in `weights` and their vector
// length must match the operand count (logical) or interval width
// (temporal). Unweighted operators mean an implicit all-ones weight.
Formula parse_wstl(std::string_view text, const WeightTable& weights);

Formula parse(std::string_view text, Logic logic, const WeightTable& weights = {});

} // namespace tlopt
