#include "tlopt/encode.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace tlopt {

using milp::ConstrSense;
using milp::ObjSense;
using milp::Term;
using milp::VarKind;

namespace {

constexpr double kDelta = 1e-4;   // separation of the violated side

// Deterministic per-node indices for variable naming, preorder.
void index_nodes(const Formula& f,
                 std::unordered_map<const FormulaNode*, int>& idx) {
    if (idx.count(f.node())) return;
    int id = static_cast<int>(idx.size());
    idx.emplace(f.node(), id);
    for (const auto& c : f.children()) index_nodes(c, idx);
}

class BoolEncoder {
public:
    BoolEncoder(EncodedSpec& spec, bool robust, int rho_var)
        : spec_(spec), robust_(robust), rho_(rho_var) {
        index_nodes(spec_.formula, node_index_);
    }

    // And-pattern: z <= z_i for all i, z >= sum z_i - (n-1).
    void bind_and(int z, const std::vector<int>& children) {
        std::vector<Term> sum{{-1.0, z}};
        for (int zi : children) {
            spec_.model.add_constr({{1.0, z}, {-1.0, zi}}, ConstrSense::Le, 0.0);
            sum.push_back({1.0, zi});
        }
        spec_.model.add_constr(std::move(sum), ConstrSense::Le,
                               static_cast<double>(children.size()) - 1.0);
    }

    // Or-pattern: z >= z_i for all i, z <= sum z_i.
    void bind_or(int z, const std::vector<int>& children) {
        std::vector<Term> sum{{1.0, z}};
        for (int zi : children) {
            spec_.model.add_constr({{1.0, z}, {-1.0, zi}}, ConstrSense::Ge, 0.0);
            sum.push_back({-1.0, zi});
        }
        spec_.model.add_constr(std::move(sum), ConstrSense::Le, 0.0);
    }

    int encode(const Formula& f, int t) {
        auto key = std::make_pair(f.node(), t);
        auto found = spec_.node_vars.find(key);
        if (found != spec_.node_vars.end()) return found->second;
        int z = encode_fresh(f, t);
        spec_.node_vars.emplace(key, z);
        return z;
    }

private:
    std::string var_name(const Formula& f, int t, const char* prefix = "z") {
        return std::string(prefix) + std::to_string(node_index_.at(f.node())) + "_" +
               std::to_string(t);
    }

    int fresh_binary(const std::string& name) {
        return spec_.model.add_var(name, VarKind::Binary, 0.0, 1.0);
    }

    int encode_fresh(const Formula& f, int t) {
        switch (f.kind()) {
        case NodeKind::Predicate:
            return f.predicate().kind == Predicate::Kind::Linear
                       ? encode_linear(f, t)
                       : encode_atom(f, t);
        case NodeKind::BoolConst: {
            int z = fresh_binary(var_name(f, t));
            spec_.model.add_constr({{1.0, z}}, ConstrSense::Eq,
                                   f.const_value() ? 1.0 : 0.0);
            return z;
        }
        case NodeKind::Not:
            throw SemanticError("encoder expects PNF input (Not node left)");
        case NodeKind::And:
        case NodeKind::Or: {
            std::vector<int> children;
            children.reserve(f.arity());
            for (const auto& c : f.children()) children.push_back(encode(c, t));
            int z = fresh_binary(var_name(f, t));
            f.kind() == NodeKind::And ? bind_and(z, children) : bind_or(z, children);
            return z;
        }
        case NodeKind::Always:
        case NodeKind::Eventually: {
            std::vector<int> children;
            children.reserve(static_cast<std::size_t>(f.interval().width()));
            for (int tau = t + f.interval().lo; tau <= t + f.interval().hi; ++tau)
                children.push_back(encode(f.child(), tau));
            int z = fresh_binary(var_name(f, t));
            f.kind() == NodeKind::Always ? bind_and(z, children) : bind_or(z, children);
            return z;
        }
        case NodeKind::Until: {
            // d_tau = And(z2(tau), z1(t..tau)); z = Or over the d_tau.
            std::vector<int> disjuncts;
            for (int tau = t + f.interval().lo; tau <= t + f.interval().hi; ++tau) {
                std::vector<int> parts{encode(f.child(1), tau)};
                for (int u = t; u <= tau; ++u) parts.push_back(encode(f.child(0), u));
                int d = fresh_binary(var_name(f, t) + "_d" + std::to_string(tau));
                bind_and(d, parts);
                disjuncts.push_back(d);
            }
            int z = fresh_binary(var_name(f, t));
            bind_or(z, disjuncts);
            return z;
        }
        }
        throw SemanticError("invalid formula node");
    }

    int encode_linear(const Formula& f, int t) {
        const Predicate& p = f.predicate();
        int sig = spec_.signal_var(p.name, t);
        double big_m = spec_.predicate_big_m.at(f.node());
        int z = fresh_binary(var_name(f, t));
        double c = p.threshold;
        if (p.sense == CmpSense::Ge) {
            // s - c >= rho - M(1-z)  and  s - c <= rho - delta + M z
            std::vector<Term> lo{{1.0, sig}, {-big_m, z}};
            std::vector<Term> hi{{1.0, sig}, {-big_m, z}};
            if (robust_) { lo.push_back({-1.0, rho_}); hi.push_back({-1.0, rho_}); }
            spec_.model.add_constr(std::move(lo), ConstrSense::Ge, c - big_m);
            spec_.model.add_constr(std::move(hi), ConstrSense::Le, c - kDelta);
        } else {
            // c - s >= rho - M(1-z)  and  c - s <= rho - delta + M z
            std::vector<Term> lo{{1.0, sig}, {big_m, z}};
            std::vector<Term> hi{{1.0, sig}, {big_m, z}};
            if (robust_) { lo.push_back({1.0, rho_}); hi.push_back({1.0, rho_}); }
            spec_.model.add_constr(std::move(lo), ConstrSense::Le, c + big_m);
            spec_.model.add_constr(std::move(hi), ConstrSense::Ge, c + kDelta);
        }
        return z;
    }

    int encode_atom(const Formula& f, int t) {
        const Predicate& p = f.predicate();
        int shared = spec_.signal_var(p.name, t);
        if (!p.negated) return shared;
        int z = fresh_binary(var_name(f, t));
        spec_.model.add_constr({{1.0, z}, {1.0, shared}}, ConstrSense::Eq, 1.0);
        return z;
    }

    EncodedSpec& spec_;
    bool robust_;
    int rho_;
    std::unordered_map<const FormulaNode*, int> node_index_;
};

int resolve_horizon(const Formula& f, std::optional<int> override_value) {
    int h = horizon(f);
    if (!override_value) return h;
    if (*override_value < h) throw HorizonOverrideError(*override_value, h);
    return *override_value;
}

double predicate_big_m(const Predicate& p, const Bounds& b) {
    return std::max(std::abs(b.upper - p.threshold),
                    std::abs(b.lower - p.threshold)) + 1.0;
}

void collect_big_m(const Formula& f, const VarBounds& bounds, EncodedSpec& spec) {
    if (f.kind() == NodeKind::Predicate) {
        const Predicate& p = f.predicate();
        if (p.kind == Predicate::Kind::Linear)
            spec.predicate_big_m.emplace(f.node(), predicate_big_m(p, bounds.at(p.name)));
        return;
    }
    for (const auto& c : f.children()) collect_big_m(c, bounds, spec);
}

} // namespace

int EncodedSpec::signal_var(const std::string& name, int step) const {
    auto it = signal_vars.find({name, step});
    if (it == signal_vars.end())
        throw UnknownSignalError(name + "_" + std::to_string(step));
    return it->second;
}

EncodedSpec encode_stl(const Formula& f, const VarBounds& bounds, bool robust,
                       bool satisfaction, std::optional<int> horizon_override) {
    EncodedSpec spec;
    spec.formula = pnf(f);
    if (has_atoms(spec.formula))
        throw UnsupportedOperatorError("encode_stl expects linear predicates; use encode_mtl");
    spec.horizon = resolve_horizon(spec.formula, horizon_override);
    spec.signal_names = collect_signals(spec.formula);

    for (const auto& name : spec.signal_names) {
        const Bounds& b = bounds.at(name);
        for (int t = 0; t <= spec.horizon; ++t)
            spec.signal_vars.emplace(
                std::make_pair(name, t),
                spec.model.add_var(name + "_" + std::to_string(t),
                                   VarKind::Continuous, b.lower, b.upper));
    }

    collect_big_m(spec.formula, bounds, spec);
    int rho = -1;
    if (robust) {
        double rho_max = 1.0;
        for (const auto& [node, m] : spec.predicate_big_m) rho_max = std::max(rho_max, m);
        rho = spec.model.add_var("rho", VarKind::Continuous, -rho_max, rho_max);
        spec.robustness_var = rho;
    }

    BoolEncoder enc(spec, robust, rho);
    spec.root_var = enc.encode(spec.formula, 0);
    if (satisfaction)
        spec.model.add_constr({{1.0, spec.root_var}}, ConstrSense::Eq, 1.0, "root_sat");
    spec.model.set_objective(ObjSense::Maximize,
                             robust ? std::vector<Term>{{1.0, rho}} : std::vector<Term>{});
    return spec;
}

EncodedSpec encode_mtl(const Formula& f, bool satisfaction,
                       std::optional<int> horizon_override) {
    EncodedSpec spec;
    spec.formula = pnf(f);
    spec.horizon = resolve_horizon(spec.formula, horizon_override);
    spec.signal_names = collect_signals(spec.formula);

    for (const auto& name : spec.signal_names)
        for (int t = 0; t <= spec.horizon; ++t)
            spec.signal_vars.emplace(
                std::make_pair(name, t),
                spec.model.add_var(name + "_" + std::to_string(t), VarKind::Binary,
                                   0.0, 1.0));

    BoolEncoder enc(spec, /*robust=*/false, -1);
    spec.root_var = enc.encode(spec.formula, 0);
    if (satisfaction)
        spec.model.add_constr({{1.0, spec.root_var}}, ConstrSense::Eq, 1.0, "root_sat");
    spec.model.set_objective(ObjSense::Maximize, {});
    return spec;
}

namespace {

struct Range {
    double lo = 0.0;
    double hi = 0.0;
};

class WstlEncoder {
public:
    WstlEncoder(EncodedSpec& spec, const WeightTable& weights, const VarBounds& bounds)
        : spec_(spec), weights_(weights), bounds_(bounds) {
        index_nodes(spec_.formula, node_index_);
    }

    // Returns the robustness variable of (f, t) and its exact value range.
    std::pair<int, Range> encode(const Formula& f, int t) {
        auto key = std::make_pair(f.node(), t);
        auto found = spec_.node_vars.find(key);
        if (found != spec_.node_vars.end()) return {found->second, ranges_.at(key)};
        auto [var, range] = encode_fresh(f, t);
        spec_.node_vars.emplace(key, var);
        ranges_.emplace(key, range);
        return {var, range};
    }

private:
    std::string var_name(const Formula& f, int t) {
        return "r" + std::to_string(node_index_.at(f.node())) + "_" + std::to_string(t);
    }

    const std::vector<double>* weight_of(const Formula& f, std::size_t expected) {
        if (!f.weight()) return nullptr;
        auto it = weights_.find(*f.weight());
        if (it == weights_.end()) throw UnknownWeightError(*f.weight());
        if (it->second.size() != expected)
            throw WeightArityError(*f.weight(), expected, it->second.size());
        for (double w : it->second)
            if (!(w > 0.0))
                throw SemanticError("weight '" + *f.weight() + "' has a non-positive entry");
        return &it->second;
    }

    // Exact minimum (or maximum) of {w_i * r_i} through selector binaries:
    // min:  r <= w_i r_i,  r >= w_i r_i - M_i (1 - sigma_i),  sum sigma = 1.
    std::pair<int, Range> bind_minmax(const std::string& name, bool is_min,
                                      const std::vector<std::pair<int, Range>>& terms,
                                      const std::vector<double>* weights) {
        std::vector<double> scaled_lo, scaled_hi;
        for (std::size_t i = 0; i < terms.size(); ++i) {
            double w = weights ? (*weights)[i] : 1.0;
            scaled_lo.push_back(w * terms[i].second.lo);
            scaled_hi.push_back(w * terms[i].second.hi);
        }
        Range range;
        if (is_min) {
            range.lo = *std::min_element(scaled_lo.begin(), scaled_lo.end());
            range.hi = *std::min_element(scaled_hi.begin(), scaled_hi.end());
        } else {
            range.lo = *std::max_element(scaled_lo.begin(), scaled_lo.end());
            range.hi = *std::max_element(scaled_hi.begin(), scaled_hi.end());
        }
        int r = spec_.model.add_var(name, VarKind::Continuous, range.lo, range.hi);
        std::vector<Term> selector_sum;
        for (std::size_t i = 0; i < terms.size(); ++i) {
            double w = weights ? (*weights)[i] : 1.0;
            int ri = terms[i].first;
            int sigma = spec_.model.add_var(name + "_sel" + std::to_string(i),
                                            VarKind::Binary, 0.0, 1.0);
            selector_sum.push_back({1.0, sigma});
            if (is_min) {
                spec_.model.add_constr({{1.0, r}, {-w, ri}}, ConstrSense::Le, 0.0);
                double big_m = scaled_hi[i] - range.lo;
                spec_.model.add_constr({{1.0, r}, {-w, ri}, {-big_m, sigma}},
                                       ConstrSense::Ge, -big_m);
            } else {
                spec_.model.add_constr({{1.0, r}, {-w, ri}}, ConstrSense::Ge, 0.0);
                double big_m = range.hi - scaled_lo[i];
                spec_.model.add_constr({{1.0, r}, {-w, ri}, {big_m, sigma}},
                                       ConstrSense::Le, big_m);
            }
        }
        spec_.model.add_constr(std::move(selector_sum), ConstrSense::Eq, 1.0);
        return {r, range};
    }

    std::pair<int, Range> encode_fresh(const Formula& f, int t) {
        switch (f.kind()) {
        case NodeKind::Predicate: {
            const Predicate& p = f.predicate();
            if (p.kind != Predicate::Kind::Linear)
                throw UnsupportedOperatorError("wSTL encoding expects linear predicates");
            int sig = spec_.signal_var(p.name, t);
            const Bounds& b = bounds_.at(p.name);
            Range range;
            int r;
            if (p.sense == CmpSense::Ge) {
                range = Range{b.lower - p.threshold, b.upper - p.threshold};
                r = spec_.model.add_var(var_name(f, t), VarKind::Continuous,
                                        range.lo, range.hi);
                spec_.model.add_constr({{1.0, r}, {-1.0, sig}}, ConstrSense::Eq,
                                       -p.threshold);
            } else {
                range = Range{p.threshold - b.upper, p.threshold - b.lower};
                r = spec_.model.add_var(var_name(f, t), VarKind::Continuous,
                                        range.lo, range.hi);
                spec_.model.add_constr({{1.0, r}, {1.0, sig}}, ConstrSense::Eq,
                                       p.threshold);
            }
            return {r, range};
        }
        case NodeKind::BoolConst:
            throw UnsupportedOperatorError(
                "wSTL encoding does not support Boolean constants");
        case NodeKind::Not:
            throw SemanticError("encoder expects PNF input (Not node left)");
        case NodeKind::And:
        case NodeKind::Or: {
            const auto* w = weight_of(f, f.arity());
            std::vector<std::pair<int, Range>> terms;
            terms.reserve(f.arity());
            for (const auto& c : f.children()) terms.push_back(encode(c, t));
            return bind_minmax(var_name(f, t), f.kind() == NodeKind::And, terms, w);
        }
        case NodeKind::Always:
        case NodeKind::Eventually: {
            const Interval& iv = f.interval();
            const auto* w = weight_of(f, static_cast<std::size_t>(iv.width()));
            std::vector<std::pair<int, Range>> terms;
            for (int tau = t + iv.lo; tau <= t + iv.hi; ++tau)
                terms.push_back(encode(f.child(), tau));
            return bind_minmax(var_name(f, t), f.kind() == NodeKind::Always, terms, w);
        }
        case NodeKind::Until: {
            const Interval& iv = f.interval();
            std::vector<std::pair<int, Range>> disjuncts;
            for (int tau = t + iv.lo; tau <= t + iv.hi; ++tau) {
                std::vector<std::pair<int, Range>> parts{encode(f.child(1), tau)};
                for (int u = t; u <= tau; ++u) parts.push_back(encode(f.child(0), u));
                disjuncts.push_back(bind_minmax(
                    var_name(f, t) + "_d" + std::to_string(tau), true, parts, nullptr));
            }
            return bind_minmax(var_name(f, t), false, disjuncts, nullptr);
        }
        }
        throw SemanticError("invalid formula node");
    }

    EncodedSpec& spec_;
    const WeightTable& weights_;
    const VarBounds& bounds_;
    std::unordered_map<const FormulaNode*, int> node_index_;
    std::map<std::pair<const FormulaNode*, int>, Range> ranges_;
};

} // namespace

EncodedSpec encode_wstl(const Formula& f, const WeightTable& weights,
                        const VarBounds& bounds, bool satisfaction) {
    EncodedSpec spec;
    spec.formula = pnf(f);
    if (has_atoms(spec.formula))
        throw UnsupportedOperatorError("encode_wstl expects linear predicates");
    spec.horizon = resolve_horizon(spec.formula, {});
    spec.signal_names = collect_signals(spec.formula);

    for (const auto& name : spec.signal_names) {
        const Bounds& b = bounds.at(name);
        for (int t = 0; t <= spec.horizon; ++t)
            spec.signal_vars.emplace(
                std::make_pair(name, t),
                spec.model.add_var(name + "_" + std::to_string(t),
                                   VarKind::Continuous, b.lower, b.upper));
    }

    WstlEncoder enc(spec, weights, bounds);
    auto [root, range] = enc.encode(spec.formula, 0);
    (void)range;
    spec.root_var = root;
    spec.robustness_var = root;
    if (satisfaction)
        spec.model.add_constr({{1.0, root}}, ConstrSense::Ge, 0.0, "root_sat");
    spec.model.set_objective(ObjSense::Maximize, {{1.0, root}});
    return spec;
}

int pin_initial(EncodedSpec& spec, const std::string& signal, double value) {
    int var = spec.signal_var(signal, 0);
    return spec.model.add_constr({{1.0, var}}, ConstrSense::Eq, value,
                                 signal + "_init");
}

Trace extract_trace(const EncodedSpec& spec, const milp::Solution& solution) {
    if (solution.status != milp::SolveStatus::Optimal) throw NotOptimalError();
    Trace trace;
    for (const auto& name : spec.signal_names) {
        std::vector<double> samples;
        samples.reserve(static_cast<std::size_t>(spec.horizon) + 1);
        for (int t = 0; t <= spec.horizon; ++t)
            samples.push_back(
                solution.values[static_cast<std::size_t>(spec.signal_var(name, t))]);
        trace.add_signal(name, std::move(samples));
    }
    return trace;
}

} // namespace tlopt
