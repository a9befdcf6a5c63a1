#include "tlopt/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tlopt {

int horizon(const Formula& f) {
    switch (f.kind()) {
    case NodeKind::Predicate:
    case NodeKind::BoolConst:
        return 0;
    case NodeKind::Not:
        return horizon(f.child());
    case NodeKind::And:
    case NodeKind::Or: {
        int h = 0;
        for (const auto& c : f.children()) h = std::max(h, horizon(c));
        return h;
    }
    case NodeKind::Always:
    case NodeKind::Eventually:
        return f.interval().hi + horizon(f.child());
    case NodeKind::Until:
        return f.interval().hi + std::max(horizon(f.child(0)), horizon(f.child(1)));
    }
    return 0;
}

namespace {

Formula pnf_rec(const Formula& f, bool neg) {
    switch (f.kind()) {
    case NodeKind::Predicate: {
        const Predicate& p = f.predicate();
        if (!neg) return f;
        if (p.kind == Predicate::Kind::Linear) {
            CmpSense flipped = p.sense == CmpSense::Ge ? CmpSense::Le : CmpSense::Ge;
            return Formula::linear(p.name, flipped, p.threshold, f.span());
        }
        return p.negated ? Formula::atom(p.name, f.span())
                         : Formula::negated_atom(p.name, f.span());
    }
    case NodeKind::BoolConst:
        return neg ? Formula::bool_const(!f.const_value(), f.span()) : f;
    case NodeKind::Not:
        return pnf_rec(f.child(), !neg);
    case NodeKind::And:
    case NodeKind::Or: {
        std::vector<Formula> children;
        children.reserve(f.arity());
        for (const auto& c : f.children()) children.push_back(pnf_rec(c, neg));
        bool conj = (f.kind() == NodeKind::And) != neg;
        // Structure preserved: flattening would change the operand counts
        // that AGM robustness averages over.
        return conj
            ? Formula::conjunction_exact(std::move(children), f.weight(), f.span())
            : Formula::disjunction_exact(std::move(children), f.weight(), f.span());
    }
    case NodeKind::Always:
    case NodeKind::Eventually: {
        Formula child = pnf_rec(f.child(), neg);
        bool always = (f.kind() == NodeKind::Always) != neg;
        return always
            ? Formula::always(std::move(child), f.interval(), f.weight(), f.span())
            : Formula::eventually(std::move(child), f.interval(), f.weight(), f.span());
    }
    case NodeKind::Until:
        if (neg) throw UnsupportedNegationError();
        return Formula::until(pnf_rec(f.child(0), false), pnf_rec(f.child(1), false),
                              f.interval(), f.span());
    }
    throw SemanticError("invalid formula node");
}

} // namespace

Formula pnf(const Formula& f) { return pnf_rec(f, false); }

Formula negate(const Formula& f) { return pnf_rec(f, true); }

namespace {

void check_trace_length(const Formula& f, const Trace& trace, int t) {
    int needed = t + horizon(f);
    if (t < 0 || needed > trace.last_step())
        throw TraceTooShortError(needed, trace.last_step());
}

bool eval_rec(const Formula& f, const Trace& trace, int t) {
    switch (f.kind()) {
    case NodeKind::Predicate: {
        const Predicate& p = f.predicate();
        if (p.kind == Predicate::Kind::Linear) {
            double v = trace.value(p.name, t);
            return p.sense == CmpSense::Ge ? v >= p.threshold : v <= p.threshold;
        }
        bool v = trace.value(p.name, t) > 0.5;
        return p.negated ? !v : v;
    }
    case NodeKind::BoolConst:
        return f.const_value();
    case NodeKind::Not:
        return !eval_rec(f.child(), trace, t);
    case NodeKind::And:
        for (const auto& c : f.children())
            if (!eval_rec(c, trace, t)) return false;
        return true;
    case NodeKind::Or:
        for (const auto& c : f.children())
            if (eval_rec(c, trace, t)) return true;
        return false;
    case NodeKind::Always:
        for (int tau = t + f.interval().lo; tau <= t + f.interval().hi; ++tau)
            if (!eval_rec(f.child(), trace, tau)) return false;
        return true;
    case NodeKind::Eventually:
        for (int tau = t + f.interval().lo; tau <= t + f.interval().hi; ++tau)
            if (eval_rec(f.child(), trace, tau)) return true;
        return false;
    case NodeKind::Until:
        for (int tau = t + f.interval().lo; tau <= t + f.interval().hi; ++tau) {
            if (!eval_rec(f.child(1), trace, tau)) continue;
            bool hold = true;
            for (int u = t; u <= tau && hold; ++u)
                hold = eval_rec(f.child(0), trace, u);
            if (hold) return true;
        }
        return false;
    }
    throw SemanticError("invalid formula node");
}

double rob_rec(const Formula& f, const Trace& trace, int t) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    switch (f.kind()) {
    case NodeKind::Predicate: {
        const Predicate& p = f.predicate();
        if (p.kind == Predicate::Kind::Linear) {
            double v = trace.value(p.name, t);
            return p.sense == CmpSense::Ge ? v - p.threshold : p.threshold - v;
        }
        // Boolean atoms admit no finer margin than +-1.
        return eval_rec(f, trace, t) ? 1.0 : -1.0;
    }
    case NodeKind::BoolConst:
        return f.const_value() ? inf : -inf;
    case NodeKind::Not:
        return -rob_rec(f.child(), trace, t);
    case NodeKind::And: {
        double r = inf;
        for (const auto& c : f.children()) r = std::min(r, rob_rec(c, trace, t));
        return r;
    }
    case NodeKind::Or: {
        double r = -inf;
        for (const auto& c : f.children()) r = std::max(r, rob_rec(c, trace, t));
        return r;
    }
    case NodeKind::Always: {
        double r = inf;
        for (int tau = t + f.interval().lo; tau <= t + f.interval().hi; ++tau)
            r = std::min(r, rob_rec(f.child(), trace, tau));
        return r;
    }
    case NodeKind::Eventually: {
        double r = -inf;
        for (int tau = t + f.interval().lo; tau <= t + f.interval().hi; ++tau)
            r = std::max(r, rob_rec(f.child(), trace, tau));
        return r;
    }
    case NodeKind::Until: {
        double best = -inf;
        for (int tau = t + f.interval().lo; tau <= t + f.interval().hi; ++tau) {
            double r = rob_rec(f.child(1), trace, tau);
            for (int u = t; u <= tau; ++u)
                r = std::min(r, rob_rec(f.child(0), trace, u));
            best = std::max(best, r);
        }
        return best;
    }
    }
    throw SemanticError("invalid formula node");
}

double agm_and(const std::vector<double>& vals) {
    bool all_positive = true;
    for (double v : vals) all_positive = all_positive && v > 0.0;
    const double n = static_cast<double>(vals.size());
    if (all_positive) {
        double prod = 1.0;
        for (double v : vals) prod *= 1.0 + v;
        return std::pow(prod, 1.0 / n) - 1.0;
    }
    double sum = 0.0;
    for (double v : vals)
        if (v <= 0.0) sum += v;
    return sum / n;
}

double agm_or(const std::vector<double>& vals) {
    bool all_negative = true;
    for (double v : vals) all_negative = all_negative && v < 0.0;
    const double n = static_cast<double>(vals.size());
    if (all_negative) {
        double prod = 1.0;
        for (double v : vals) prod *= 1.0 - v;
        return 1.0 - std::pow(prod, 1.0 / n);
    }
    double sum = 0.0;
    for (double v : vals)
        if (v >= 0.0) sum += v;
    return sum / n;
}

double agm_rec(const Formula& f, const Trace& trace, int t, const VarBounds& bounds) {
    switch (f.kind()) {
    case NodeKind::Predicate: {
        const Predicate& p = f.predicate();
        if (p.kind != Predicate::Kind::Linear)
            throw UnsupportedOperatorError("AGM robustness is defined for STL formulas only");
        const Bounds& b = bounds.at(p.name);
        double scale = std::max(std::abs(b.upper - p.threshold),
                                std::abs(b.lower - p.threshold));
        if (scale == 0.0) return 0.0;
        double v = trace.value(p.name, t);
        double margin = p.sense == CmpSense::Ge ? v - p.threshold : p.threshold - v;
        return std::clamp(margin / scale, -1.0, 1.0);
    }
    case NodeKind::BoolConst:
        return f.const_value() ? 1.0 : -1.0;
    case NodeKind::Not:
        return -agm_rec(f.child(), trace, t, bounds);
    case NodeKind::And:
    case NodeKind::Or: {
        std::vector<double> vals;
        vals.reserve(f.arity());
        for (const auto& c : f.children()) vals.push_back(agm_rec(c, trace, t, bounds));
        return f.kind() == NodeKind::And ? agm_and(vals) : agm_or(vals);
    }
    case NodeKind::Always:
    case NodeKind::Eventually: {
        std::vector<double> vals;
        vals.reserve(static_cast<std::size_t>(f.interval().width()));
        for (int tau = t + f.interval().lo; tau <= t + f.interval().hi; ++tau)
            vals.push_back(agm_rec(f.child(), trace, tau, bounds));
        return f.kind() == NodeKind::Always ? agm_and(vals) : agm_or(vals);
    }
    case NodeKind::Until:
        throw UnsupportedOperatorError("AGM robustness does not support Until");
    }
    throw SemanticError("invalid formula node");
}

// Returns the weight vector for a node or nullptr for the implicit all-ones
// weight; validates length and positivity against the runtime table.
const std::vector<double>* resolve_weight(const FormulaNode* node,
                                          const WeightTable& table,
                                          std::size_t expected_len) {
    if (!node->weight) return nullptr;
    auto it = table.find(*node->weight);
    if (it == table.end()) throw UnknownWeightError(*node->weight);
    if (it->second.size() != expected_len)
        throw WeightArityError(*node->weight, expected_len, it->second.size());
    for (double w : it->second)
        if (!(w > 0.0))
            throw SemanticError("weight '" + *node->weight + "' has a non-positive entry");
    return &it->second;
}

double wstl_rec(const Formula& f, const WeightTable& table, const Trace& trace, int t) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    switch (f.kind()) {
    case NodeKind::Predicate:
    case NodeKind::BoolConst:
        return rob_rec(f, trace, t);
    case NodeKind::Not:
        return -wstl_rec(f.child(), table, trace, t);
    case NodeKind::And:
    case NodeKind::Or: {
        const auto* w = resolve_weight(f.node(), table, f.arity());
        bool conj = f.kind() == NodeKind::And;
        double r = conj ? inf : -inf;
        for (std::size_t i = 0; i < f.arity(); ++i) {
            double ri = wstl_rec(f.child(i), table, trace, t);
            if (w) ri = (*w)[i] * ri;
            r = conj ? std::min(r, ri) : std::max(r, ri);
        }
        return r;
    }
    case NodeKind::Always:
    case NodeKind::Eventually: {
        const Interval& iv = f.interval();
        const auto* w = resolve_weight(f.node(), table,
                                       static_cast<std::size_t>(iv.width()));
        bool conj = f.kind() == NodeKind::Always;
        double r = conj ? inf : -inf;
        for (int tau = t + iv.lo; tau <= t + iv.hi; ++tau) {
            double ri = wstl_rec(f.child(), table, trace, tau);
            if (w) ri = (*w)[static_cast<std::size_t>(tau - t - iv.lo)] * ri;
            r = conj ? std::min(r, ri) : std::max(r, ri);
        }
        return r;
    }
    case NodeKind::Until: {
        // Until carries no weight; unit semantics, as in robustness().
        double best = -inf;
        for (int tau = t + f.interval().lo; tau <= t + f.interval().hi; ++tau) {
            double r = wstl_rec(f.child(1), table, trace, tau);
            for (int u = t; u <= tau; ++u)
                r = std::min(r, wstl_rec(f.child(0), table, trace, u));
            best = std::max(best, r);
        }
        return best;
    }
    }
    throw SemanticError("invalid formula node");
}

} // namespace

bool evaluate_bool(const Formula& f, const Trace& trace, int t) {
    check_trace_length(f, trace, t);
    return eval_rec(f, trace, t);
}

double robustness(const Formula& f, const Trace& trace, int t) {
    check_trace_length(f, trace, t);
    return rob_rec(f, trace, t);
}

double agm_robustness(const Formula& f, const Trace& trace, int t,
                      const VarBounds& bounds) {
    check_trace_length(f, trace, t);
    return agm_rec(f, trace, t, bounds);
}

double wstl_robustness(const Formula& f, const WeightTable& weights,
                       const Trace& trace, int t) {
    check_trace_length(f, trace, t);
    return wstl_rec(f, weights, trace, t);
}

std::vector<double> batch_robustness(const Formula& f,
                                     const std::vector<Trace>& traces,
                                     RobustnessMethod method,
                                     const VarBounds* bounds) {
    if (method == RobustnessMethod::Agm && !bounds) throw MissingBoundError();
    std::vector<double> out;
    out.reserve(traces.size());
    for (std::size_t i = 0; i < traces.size(); ++i) {
        try {
            out.push_back(method == RobustnessMethod::Classic
                              ? robustness(f, traces[i], 0)
                              : agm_robustness(f, traces[i], 0, *bounds));
        } catch (const Error& e) {
            throw BatchError(i, e.what());
        }
    }
    return out;
}

} // namespace tlopt
