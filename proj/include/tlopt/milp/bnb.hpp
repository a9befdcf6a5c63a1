#pragma once

#include <optional>

#include "tlopt/milp/model.hpp"
#include "tlopt/milp/simplex.hpp"

namespace tlopt::milp {

struct BnbOptions {
    double int_tol = 1e-6;        // binary considered integral within this
    double gap = 1e-6;            // relative gap target
    long node_limit = 100000;
    std::optional<double> time_limit_s;   // reported as NodeLimit when hit
};

// Best-first branch-and-bound over the binary variables. Node selection is
// by best LP bound with FIFO tie-break; branching picks the most fractional
// binary (smallest id on ties) and fixes it to 0 and 1. After every node LP
// a round-to-nearest candidate is kept as incumbent when it passes a full
// feasibility re-check, which closes the equal-bound plateaus created by
// binaries the LP leaves undetermined. Deterministic and single-threaded.
Solution solve_milp(const Model& model, const BnbOptions& options = {});

} // namespace tlopt::milp
