#pragma once

// Shared test machinery: seeded random formula/trace/MILP generators and the
// independent oracles (brute-force enumeration, trace-grid search) the
// property suites compare against.

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "tlopt/formula.hpp"
#include "tlopt/milp/model.hpp"
#include "tlopt/milp/simplex.hpp"
#include "tlopt/ops.hpp"
#include "tlopt/trace.hpp"

namespace tlopt::testing {

using Rng = std::mt19937;

struct GenOptions {
    Logic logic = Logic::Stl;
    int max_depth = 4;
    int horizon_budget = 8;     // hard cap on the generated formula's horizon
    int num_signals = 2;
    bool allow_until = true;
    bool weighted = false;      // attach wSTL weight tags and fill a table
    std::vector<double> thresholds = {-2, -1, 0, 1, 2};
};

inline int rand_int(Rng& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline double rand_real(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::string signal_name(const GenOptions& opt, Rng& rng) {
    return (opt.logic == Logic::Mtl ? "p" : "s") +
           std::to_string(rand_int(rng, 0, opt.num_signals - 1));
}

inline Formula random_leaf(Rng& rng, const GenOptions& opt) {
    if (opt.logic == Logic::Mtl) return Formula::atom(signal_name(opt, rng));
    double c = opt.thresholds[static_cast<std::size_t>(
        rand_int(rng, 0, static_cast<int>(opt.thresholds.size()) - 1))];
    return Formula::linear(signal_name(opt, rng),
                           rand_int(rng, 0, 1) ? CmpSense::Ge : CmpSense::Le, c);
}

// Structured random formula whose horizon never exceeds the budget. Weighted
// mode registers fresh weight vectors in `table` for roughly half the
// operator nodes (the rest keep the implicit all-ones weight).
inline Formula random_formula(Rng& rng, const GenOptions& opt, int depth, int budget,
                              WeightTable* table) {
    if (depth >= opt.max_depth || rand_int(rng, 0, 99) < 25) return random_leaf(rng, opt);

    auto maybe_weight = [&](std::size_t len) -> std::optional<std::string> {
        if (!opt.weighted || !table || rand_int(rng, 0, 1) == 0) return {};
        std::string name = "w" + std::to_string(table->size());
        std::vector<double> w;
        for (std::size_t i = 0; i < len; ++i) w.push_back(rand_real(rng, 0.1, 2.0));
        (*table)[name] = w;
        return name;
    };

    int pick = rand_int(rng, 0, opt.allow_until && budget > 0 ? 5 : 4);
    switch (pick) {
    case 0: {   // Not (kept off wSTL trees so PNF-free encoders can be fed directly)
        if (opt.logic == Logic::Wstl) return random_leaf(rng, opt);
        return Formula::negation(random_formula(rng, opt, depth + 1, budget, table));
    }
    case 1:
    case 2: {   // And / Or
        int n = rand_int(rng, 2, 3);
        std::vector<Formula> children;
        for (int i = 0; i < n; ++i)
            children.push_back(random_formula(rng, opt, depth + 1, budget, table));
        auto w = maybe_weight(children.size());
        // A weighted tag must match the final arity; unweighted children of
        // the same kind would be flattened, so re-wrap those in Not-free
        // logics via a distinct kind when a tag is present.
        if (pick == 1) return Formula::conjunction(std::move(children), w);
        return Formula::disjunction(std::move(children), w);
    }
    case 3:
    case 4: {   // Always / Eventually
        int a = rand_int(rng, 0, std::min(2, budget));
        int b = rand_int(rng, a, std::min(a + 2, budget));
        Formula child = random_formula(rng, opt, depth + 1, budget - b, table);
        auto w = maybe_weight(static_cast<std::size_t>(b - a + 1));
        if (pick == 3) return Formula::always(std::move(child), Interval{a, b}, w);
        return Formula::eventually(std::move(child), Interval{a, b}, w);
    }
    default: {   // Until
        int a = rand_int(rng, 0, std::min(2, budget));
        int b = rand_int(rng, a, std::min(a + 2, budget));
        Formula lhs = random_formula(rng, opt, depth + 1, budget - b, table);
        Formula rhs = random_formula(rng, opt, depth + 1, budget - b, table);
        return Formula::until(std::move(lhs), std::move(rhs), Interval{a, b});
    }
    }
}

inline Formula random_formula(Rng& rng, const GenOptions& opt,
                              WeightTable* table = nullptr) {
    return random_formula(rng, opt, 0, opt.horizon_budget, table);
}

// Trace covering the formula's horizon; MTL mode yields 0/1 signals.
inline Trace random_trace(Rng& rng, const GenOptions& opt, int length) {
    Trace t;
    for (int i = 0; i < opt.num_signals; ++i) {
        std::vector<double> samples;
        samples.reserve(static_cast<std::size_t>(length));
        for (int k = 0; k < length; ++k)
            samples.push_back(opt.logic == Logic::Mtl
                                  ? static_cast<double>(rand_int(rng, 0, 1))
                                  : rand_real(rng, -4.0, 4.0));
        t.add_signal((opt.logic == Logic::Mtl ? "p" : "s") + std::to_string(i), samples);
    }
    return t;
}

// ---- MILP enumeration oracle -------------------------------------------

struct EnumResult {
    milp::LpStatus status = milp::LpStatus::Infeasible;
    double objective = 0.0;
};

// Brute force over all 2^B binary assignments, each followed by an LP solve;
// the reference for solve_milp.
inline EnumResult enumerate_milp(const milp::Model& model) {
    std::vector<int> binaries;
    for (const auto& v : model.vars())
        if (v.kind == milp::VarKind::Binary) binaries.push_back(v.id);
    bool maximize = model.objective().sense == milp::ObjSense::Maximize;
    EnumResult best;
    for (std::uint64_t mask = 0; mask < (1ull << binaries.size()); ++mask) {
        std::vector<milp::BoundOverride> fix;
        for (std::size_t i = 0; i < binaries.size(); ++i) {
            double v = (mask >> i) & 1 ? 1.0 : 0.0;
            fix.push_back({binaries[i], v, v});
        }
        milp::LpResult lp = milp::solve_lp(model, fix);
        if (lp.status != milp::LpStatus::Optimal) continue;
        if (best.status != milp::LpStatus::Optimal ||
            (maximize ? lp.objective > best.objective
                      : lp.objective < best.objective)) {
            best.status = milp::LpStatus::Optimal;
            best.objective = lp.objective;
        }
    }
    return best;
}

// Random mixed MILP with bounded variables (never unbounded by construction).
inline milp::Model random_milp(Rng& rng, int max_binaries = 8,
                               int max_continuous = 6, int max_constraints = 12) {
    milp::Model m;
    int nb = rand_int(rng, 1, max_binaries);
    int nc = rand_int(rng, 0, max_continuous);
    std::vector<int> ids;
    for (int i = 0; i < nb; ++i)
        ids.push_back(m.add_var("z" + std::to_string(i), milp::VarKind::Binary, 0, 1));
    for (int i = 0; i < nc; ++i) {
        double lo = rand_real(rng, -10.0, 0.0);
        double hi = lo + rand_real(rng, 0.0, 15.0);
        ids.push_back(
            m.add_var("x" + std::to_string(i), milp::VarKind::Continuous, lo, hi));
    }
    int rows = rand_int(rng, 1, max_constraints);
    for (int r = 0; r < rows; ++r) {
        std::vector<milp::Term> terms;
        for (int id : ids)
            if (rand_int(rng, 0, 2) != 0)
                terms.push_back({double(rand_int(rng, -5, 5)), id});
        if (terms.empty()) terms.push_back({1.0, ids[0]});
        double rhs = double(rand_int(rng, -10, 10));
        auto sense = static_cast<milp::ConstrSense>(rand_int(rng, 0, 2));
        m.add_constr(std::move(terms), sense, rhs);
    }
    std::vector<milp::Term> obj;
    for (int id : ids) obj.push_back({double(rand_int(rng, -5, 5)), id});
    m.set_objective(rand_int(rng, 0, 1) ? milp::ObjSense::Maximize
                                        : milp::ObjSense::Minimize,
                    std::move(obj));
    return m;
}

// ---- trace-grid satisfiability oracle ------------------------------------

// Distinct per-signal grid values that hit every region the formula's
// thresholds cut out of [bounds]; valid because predicates only compare
// against those thresholds.
inline std::vector<double> grid_values(const std::vector<double>& thresholds,
                                       double lo, double hi) {
    std::vector<double> cuts{lo};
    for (double t : thresholds)
        if (t > lo && t < hi) cuts.push_back(t);
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> points;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        points.push_back((cuts[i] + cuts[i + 1]) / 2.0);
    return points;
}

inline void collect_thresholds(const Formula& f, const std::string& signal,
                               std::vector<double>& out) {
    if (f.kind() == NodeKind::Predicate) {
        const Predicate& p = f.predicate();
        if (p.kind == Predicate::Kind::Linear && p.name == signal)
            out.push_back(p.threshold);
        return;
    }
    for (const auto& c : f.children()) collect_thresholds(c, signal, out);
}

// Exhaustive search for a satisfying trace over the grid.
inline bool grid_satisfiable(const Formula& f, const VarBounds& bounds, int horizon_k) {
    std::vector<std::string> signals = collect_signals(f);
    std::vector<std::vector<double>> per_signal;
    std::vector<double> thresholds;
    for (const auto& name : signals) {
        thresholds.clear();
        collect_thresholds(f, name, thresholds);
        const Bounds& b = bounds.at(name);
        per_signal.push_back(grid_values(thresholds, b.lower, b.upper));
    }
    const int steps = horizon_k + 1;
    const int cells = static_cast<int>(signals.size()) * steps;
    std::vector<std::size_t> digits(static_cast<std::size_t>(cells), 0);
    while (true) {
        Trace trace;
        int cell = 0;
        for (std::size_t s = 0; s < signals.size(); ++s) {
            std::vector<double> samples;
            for (int k = 0; k < steps; ++k)
                samples.push_back(per_signal[s][digits[static_cast<std::size_t>(cell++)]]);
            trace.add_signal(signals[s], std::move(samples));
        }
        if (evaluate_bool(f, trace, 0)) return true;
        int i = 0;
        for (; i < cells; ++i) {
            std::size_t radix = per_signal[static_cast<std::size_t>(i) /
                                           static_cast<std::size_t>(steps)].size();
            if (++digits[static_cast<std::size_t>(i)] < radix) break;
            digits[static_cast<std::size_t>(i)] = 0;
        }
        if (i == cells) return false;
    }
}

} // namespace tlopt::testing
