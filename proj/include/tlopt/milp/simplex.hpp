#pragma once

#include <vector>

#include "tlopt/milp/model.hpp"

namespace tlopt::milp {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    std::vector<double> values;   // by model var id
    double objective = 0.0;       // in the model's objective sense
};

struct BoundOverride {
    int var = -1;
    double lower = 0.0;
    double upper = 0.0;
};

// Solves the LP relaxation (binaries relaxed to their bounds) with a dense
// bounded-variable primal simplex: Dantzig pricing with smallest-index
// tie-breaks, switching to Bland's rule after a degenerate stall. The basis
// is refactorized through an LU decomposition before optimality is claimed,
// so the returned point satisfies the residual and reduced-cost tolerances
// honestly. Deterministic given (model, overrides).
LpResult solve_lp(const Model& model,
                  const std::vector<BoundOverride>& overrides = {});

} // namespace tlopt::milp
