#include "tlopt/milp/bnb.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <memory>
#include <queue>

namespace tlopt::milp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPruneTol = 1e-9;

struct FixChain {
    std::shared_ptr<const FixChain> parent;
    int var = -1;
    int value = 0;
};

std::vector<BoundOverride> collect_fixings(const FixChain* chain) {
    std::vector<BoundOverride> out;
    for (const FixChain* c = chain; c && c->var >= 0; c = c->parent.get())
        out.push_back(BoundOverride{c->var, double(c->value), double(c->value)});
    return out;
}

struct Node {
    double bound_s = 0.0;   // LP bound in internal max-sense
    long seq = 0;
    int branch_var = -1;
    std::shared_ptr<const FixChain> fixings;
};

struct NodeWorse {
    bool operator()(const Node& a, const Node& b) const {
        if (a.bound_s != b.bound_s) return a.bound_s < b.bound_s;
        return a.seq > b.seq;   // FIFO among equal bounds
    }
};

class BranchAndBound {
public:
    BranchAndBound(const Model& model, const BnbOptions& opts)
        : model_(model), opts_(opts),
          start_(std::chrono::steady_clock::now()) {
        sign_ = 1.0;
        if (model.has_objective() &&
            model.objective().sense == ObjSense::Minimize)
            sign_ = -1.0;
        for (const Var& v : model.vars())
            if (v.kind == VarKind::Binary) binaries_.push_back(v.id);
        obj_coef_.assign(static_cast<std::size_t>(model.num_vars()), 0.0);
        if (model.has_objective())
            for (const Term& t : model.objective().terms)
                obj_coef_[static_cast<std::size_t>(t.var)] += t.coef;
    }

    Solution run() {
        Solution sol;
        long seq = 0;

        if (!expand(nullptr, sol, seq))
            return finalize(sol, SolveStatus::Unbounded);
        while (!queue_.empty()) {
            if (sol.nodes >= opts_.node_limit || time_up())
                return finalize(sol, SolveStatus::NodeLimit);
            Node node = queue_.top();
            queue_.pop();
            if (has_incumbent_) {
                double bound = node.bound_s;
                if (bound - incumbent_s_ <= kPruneTol)
                    return finalize(sol, SolveStatus::Optimal);
                double gap = (bound - incumbent_s_) / std::max(1.0, std::abs(incumbent_s_));
                if (gap <= opts_.gap) {
                    last_bound_s_ = bound;
                    return finalize(sol, SolveStatus::GapLimit);
                }
            }
            for (int value = 0; value <= 1; ++value) {
                auto child = std::make_shared<const FixChain>(
                    FixChain{node.fixings, node.branch_var, value});
                if (!expand(std::move(child), sol, seq))
                    return finalize(sol, SolveStatus::Unbounded);
            }
        }
        return finalize(sol, has_incumbent_ ? SolveStatus::Optimal
                                            : SolveStatus::Infeasible);
    }

private:
    bool time_up() const {
        if (!opts_.time_limit_s) return false;
        auto elapsed = std::chrono::duration<double>(
                           std::chrono::steady_clock::now() - start_)
                           .count();
        return elapsed > *opts_.time_limit_s;
    }

    double objective_of(const std::vector<double>& x) const {
        double obj = 0.0;
        for (std::size_t j = 0; j < obj_coef_.size(); ++j) obj += obj_coef_[j] * x[j];
        return sign_ * obj;
    }

    // Solves the LP at a node, harvesting incumbents and pushing the node
    // when it stays open. Returns false only on an unbounded relaxation.
    bool expand(std::shared_ptr<const FixChain> chain, Solution& sol, long& seq) {
        ++sol.nodes;
        LpResult lp = solve_lp(model_, collect_fixings(chain.get()));
        if (lp.status == LpStatus::Unbounded) return chain != nullptr;
        if (lp.status == LpStatus::Infeasible) return true;

        double bound_s = sign_ * lp.objective;
        if (has_incumbent_ && bound_s - incumbent_s_ <= kPruneTol) return true;

        int branch_var = most_fractional(lp.values);
        if (branch_var < 0) {
            offer_incumbent(lp.values, bound_s);
            return true;
        }
        try_rounding(lp.values);
        if (has_incumbent_ && bound_s - incumbent_s_ <= kPruneTol) return true;

        Node node;
        node.bound_s = bound_s;
        node.seq = seq++;
        node.branch_var = branch_var;
        node.fixings = std::move(chain);
        queue_.push(std::move(node));
        return true;
    }

    // Most fractional binary = largest distance to the nearest integer,
    // smallest id on ties.
    int most_fractional(const std::vector<double>& x) const {
        int best = -1;
        double best_dist = opts_.int_tol;
        for (int id : binaries_) {
            double v = x[static_cast<std::size_t>(id)];
            double dist = std::abs(v - std::round(v));
            if (dist > best_dist + 1e-15) {
                best = id;
                best_dist = dist;
            }
        }
        return best;
    }

    void offer_incumbent(const std::vector<double>& x, double obj_s) {
        if (!has_incumbent_ || obj_s > incumbent_s_ + 0.0) {
            incumbent_ = x;
            incumbent_s_ = obj_s;
            has_incumbent_ = true;
        }
    }

    // Round every binary to the nearest integer and keep the point only if
    // it passes a full feasibility re-check against the original model.
    void try_rounding(const std::vector<double>& x) {
        std::vector<double> cand = x;
        for (int id : binaries_)
            cand[static_cast<std::size_t>(id)] = std::round(cand[static_cast<std::size_t>(id)]);
        for (const Var& v : model_.vars()) {
            double val = cand[static_cast<std::size_t>(v.id)];
            if (val < v.lower - 1e-9 || val > v.upper + 1e-9) return;
        }
        for (const LinConstraint& c : model_.constraints()) {
            double lhs = 0.0;
            double scale = std::abs(c.rhs);
            for (const Term& t : c.terms) {
                lhs += t.coef * cand[static_cast<std::size_t>(t.var)];
                scale = std::max(scale, std::abs(t.coef));
            }
            double tol = 1e-7 * std::max(1.0, scale);
            switch (c.sense) {
            case ConstrSense::Le: if (lhs > c.rhs + tol) return; break;
            case ConstrSense::Ge: if (lhs < c.rhs - tol) return; break;
            case ConstrSense::Eq: if (std::abs(lhs - c.rhs) > tol) return; break;
            }
        }
        offer_incumbent(cand, objective_of(cand));
    }

    Solution finalize(Solution sol, SolveStatus status) {
        double bound_s;
        switch (status) {
        case SolveStatus::Optimal:
            bound_s = incumbent_s_;
            break;
        case SolveStatus::GapLimit:
            bound_s = last_bound_s_;
            break;
        default:
            bound_s = queue_.empty() ? (has_incumbent_ ? incumbent_s_ : -kInf)
                                     : std::max(queue_.top().bound_s,
                                                has_incumbent_ ? incumbent_s_ : -kInf);
            break;
        }
        if (status == SolveStatus::NodeLimit && !has_incumbent_) {
            sol.status = SolveStatus::NodeLimit;
            sol.bound = sign_ * bound_s;
            return sol;
        }
        if (!has_incumbent_) {
            sol.status = status;   // Infeasible or Unbounded
            return sol;
        }
        sol.status = status;
        sol.values = incumbent_;
        sol.objective = sign_ * incumbent_s_;
        sol.bound = sign_ * bound_s;
        sol.gap = std::max(0.0, (bound_s - incumbent_s_) /
                                    std::max(1.0, std::abs(incumbent_s_)));
        return sol;
    }

    const Model& model_;
    BnbOptions opts_;
    std::chrono::steady_clock::time_point start_;
    double sign_ = 1.0;
    std::vector<int> binaries_;
    std::vector<double> obj_coef_;
    std::priority_queue<Node, std::vector<Node>, NodeWorse> queue_;
    std::vector<double> incumbent_;
    double incumbent_s_ = -kInf;
    bool has_incumbent_ = false;
    double last_bound_s_ = kInf;
};

} // namespace

Solution solve_milp(const Model& model, const BnbOptions& options) {
    BranchAndBound solver(model, options);
    return solver.run();
}

} // namespace tlopt::milp
