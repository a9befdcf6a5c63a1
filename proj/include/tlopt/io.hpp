#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "tlopt/formula.hpp"
#include "tlopt/synthesis.hpp"
#include "tlopt/trace.hpp"

namespace tlopt {

// JSON problem description consumed by the synth workflow. `system` is only
// present for control synthesis; `initial` pins step-0 values in trajectory
// mode; `weights` feeds wSTL parsing and monitoring.
struct SystemConfig {
    Logic logic = Logic::Stl;
    std::string formula;
    std::optional<int> horizon;
    VarBounds signal_bounds;
    std::map<std::string, double> initial;
    WeightTable weights;
    std::optional<LtiSystem> system;
    CostWeights costs;
};

SystemConfig load_system_config(const std::filesystem::path& path);

// {"name": [values...], ...}
WeightTable load_weight_table(const std::filesystem::path& path);

// {"name": [lower, upper], ...}
VarBounds load_bounds(const std::filesystem::path& path);

// CSV with header "time,<sig1>,<sig2>,..."; the time column must run
// 0,1,...,K with no gaps.
Trace read_trace_csv(const std::filesystem::path& path);

// Writes states (and optionally inputs, padded with 0 on the final row,
// since inputs stop at step K-1).
void write_trace_csv(const std::filesystem::path& path, const Trace& states,
                     const Trace* inputs = nullptr);

} // namespace tlopt
