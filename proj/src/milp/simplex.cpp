#include "tlopt/milp/simplex.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

namespace tlopt::milp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotTol = 1e-9;     // pivot candidates below this are zero
constexpr double kDualTol = 1e-9;      // reduced-cost optimality tolerance
constexpr double kPrimalTol = 1e-7;    // feasibility residual tolerance
constexpr int kStallLimit = 100;       // degenerate steps before Bland's rule

enum class VarState : std::uint8_t { Basic, AtLower, AtUpper, FreeZero };

// Equality-form LP: A z = b with per-column bounds, minimize cost . z.
// Columns are the model variables followed by one slack per row; artificials
// are appended by the solver when the initial slack basis is infeasible.
struct CanonicalLp {
    Eigen::MatrixXd a;
    Eigen::VectorXd b;
    Eigen::VectorXd cost;
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;
    int num_structural = 0;
    double obj_sign = 1.0;   // +1 minimize, -1 when the model maximizes
};

CanonicalLp build_canonical(const Model& model,
                            const std::vector<BoundOverride>& overrides) {
    const int n = model.num_vars();
    const int m = model.num_constraints();
    CanonicalLp lp;
    lp.num_structural = n;
    lp.a = Eigen::MatrixXd::Zero(m, n + m);
    lp.b = Eigen::VectorXd::Zero(m);
    lp.cost = Eigen::VectorXd::Zero(n + m);
    lp.lower = Eigen::VectorXd::Zero(n + m);
    lp.upper = Eigen::VectorXd::Zero(n + m);

    for (int j = 0; j < n; ++j) {
        lp.lower[j] = model.var(j).lower;
        lp.upper[j] = model.var(j).upper;
    }
    for (const BoundOverride& o : overrides) {
        if (o.var < 0 || o.var >= n) throw UnknownVarError(o.var);
        lp.lower[o.var] = o.lower;
        lp.upper[o.var] = o.upper;
    }

    const auto& rows = model.constraints();
    for (int i = 0; i < m; ++i) {
        for (const Term& t : rows[static_cast<std::size_t>(i)].terms)
            lp.a(i, t.var) += t.coef;
        lp.b[i] = rows[static_cast<std::size_t>(i)].rhs;
        int slack = n + i;
        lp.a(i, slack) = 1.0;
        switch (rows[static_cast<std::size_t>(i)].sense) {
        case ConstrSense::Le: lp.lower[slack] = 0.0; lp.upper[slack] = kInf; break;
        case ConstrSense::Ge: lp.lower[slack] = -kInf; lp.upper[slack] = 0.0; break;
        case ConstrSense::Eq: lp.lower[slack] = 0.0; lp.upper[slack] = 0.0; break;
        }
    }

    if (model.has_objective()) {
        const Objective& obj = model.objective();
        lp.obj_sign = obj.sense == ObjSense::Maximize ? -1.0 : 1.0;
        for (const Term& t : obj.terms) lp.cost[t.var] += lp.obj_sign * t.coef;
    }
    return lp;
}

class Simplex {
public:
    explicit Simplex(CanonicalLp lp) : lp_(std::move(lp)) {}

    LpResult solve() {
        init();
        if (!phase_one()) return finish(LpStatus::Infeasible);
        if (!phase_two()) return finish(LpStatus::Unbounded);
        return finish(LpStatus::Optimal);
    }

private:
    int rows() const { return static_cast<int>(lp_.a.rows()); }
    int cols() const { return static_cast<int>(cols_); }

    double nonbasic_value(int j) const {
        switch (state_[static_cast<std::size_t>(j)]) {
        case VarState::AtLower: return lp_.lower[j];
        case VarState::AtUpper: return lp_.upper[j];
        case VarState::FreeZero: return 0.0;
        case VarState::Basic: break;
        }
        return x_basic_[pos_in_basis_[static_cast<std::size_t>(j)]];
    }

    void init() {
        const int m = rows();
        const int n_plus_m = static_cast<int>(lp_.a.cols());
        cols_ = n_plus_m;
        state_.assign(static_cast<std::size_t>(n_plus_m), VarState::AtLower);
        pos_in_basis_.assign(static_cast<std::size_t>(n_plus_m), -1);
        basis_.assign(static_cast<std::size_t>(m), -1);
        x_basic_ = Eigen::VectorXd::Zero(m);

        for (int j = 0; j < n_plus_m; ++j) {
            if (std::isfinite(lp_.lower[j])) state_[static_cast<std::size_t>(j)] = VarState::AtLower;
            else if (std::isfinite(lp_.upper[j])) state_[static_cast<std::size_t>(j)] = VarState::AtUpper;
            else state_[static_cast<std::size_t>(j)] = VarState::FreeZero;
        }

        // Residual each slack would have to absorb given nonbasic values.
        Eigen::VectorXd residual = lp_.b;
        for (int j = 0; j < lp_.num_structural; ++j) {
            double v = nonbasic_value(j);
            if (v != 0.0) residual -= lp_.a.col(j) * v;
        }

        std::vector<double> art_cols;   // (row, sign) pairs, flattened
        std::vector<int> art_rows;
        for (int i = 0; i < m; ++i) {
            int slack = lp_.num_structural + i;
            double r = residual[i];
            if (r >= lp_.lower[slack] - kPrimalTol && r <= lp_.upper[slack] + kPrimalTol) {
                make_basic(slack, i, std::clamp(r, lp_.lower[slack], lp_.upper[slack]));
            } else {
                double s0 = std::clamp(r, lp_.lower[slack], lp_.upper[slack]);
                state_[static_cast<std::size_t>(slack)] =
                    s0 == lp_.lower[slack] ? VarState::AtLower : VarState::AtUpper;
                art_rows.push_back(i);
                art_cols.push_back(r - s0 > 0 ? 1.0 : -1.0);
            }
        }

        num_artificial_ = static_cast<int>(art_rows.size());
        if (num_artificial_ > 0) {
            lp_.a.conservativeResize(Eigen::NoChange, n_plus_m + num_artificial_);
            lp_.a.rightCols(num_artificial_).setZero();
            lp_.cost.conservativeResize(n_plus_m + num_artificial_);
            lp_.lower.conservativeResize(n_plus_m + num_artificial_);
            lp_.upper.conservativeResize(n_plus_m + num_artificial_);
            state_.resize(static_cast<std::size_t>(n_plus_m + num_artificial_));
            pos_in_basis_.resize(static_cast<std::size_t>(n_plus_m + num_artificial_), -1);
            cols_ = n_plus_m + num_artificial_;
            for (int k = 0; k < num_artificial_; ++k) {
                int col = n_plus_m + k;
                int row = art_rows[static_cast<std::size_t>(k)];
                double sign = art_cols[static_cast<std::size_t>(k)];
                lp_.a(row, col) = sign;
                lp_.cost[col] = 0.0;
                lp_.lower[col] = 0.0;
                lp_.upper[col] = kInf;
                int slack = lp_.num_structural + row;
                double s0 = nonbasic_value(slack);
                make_basic(col, row, std::abs(residual[row] - s0));
            }
        }

        tableau_ = lp_.a;
        // B is diagonal +-1 here, so B^{-1}A only flips rows with negative
        // artificial coefficients.
        for (int i = 0; i < m; ++i)
            if (lp_.a(i, basis_[static_cast<std::size_t>(i)]) < 0.0) tableau_.row(i) = -tableau_.row(i);
    }

    void make_basic(int col, int row, double value) {
        basis_[static_cast<std::size_t>(row)] = col;
        state_[static_cast<std::size_t>(col)] = VarState::Basic;
        pos_in_basis_[static_cast<std::size_t>(col)] = row;
        x_basic_[row] = value;
    }

    bool phase_one() {
        if (num_artificial_ == 0) return true;
        phase_cost_ = Eigen::VectorXd::Zero(cols());
        for (int k = 0; k < num_artificial_; ++k)
            phase_cost_[cols() - num_artificial_ + k] = 1.0;
        active_cost_ = &phase_cost_;
        recompute_duals();
        if (!iterate()) return false;   // cannot happen: phase 1 is bounded
        double infeasibility = 0.0;
        for (int k = 0; k < num_artificial_; ++k)
            infeasibility += current_value(cols() - num_artificial_ + k);
        if (infeasibility > 1e-7) return false;
        // Pin artificials to zero for phase 2; basic ones may stay at 0.
        for (int k = 0; k < num_artificial_; ++k) {
            int col = cols() - num_artificial_ + k;
            lp_.upper[col] = 0.0;
            if (state_[static_cast<std::size_t>(col)] != VarState::Basic)
                state_[static_cast<std::size_t>(col)] = VarState::AtLower;
        }
        return true;
    }

    bool phase_two() {
        active_cost_ = &lp_.cost;
        recompute_duals();
        return iterate();
    }

    double current_value(int j) const {
        return state_[static_cast<std::size_t>(j)] == VarState::Basic
                   ? x_basic_[pos_in_basis_[static_cast<std::size_t>(j)]]
                   : nonbasic_value(j);
    }

    void recompute_duals() {
        const Eigen::VectorXd& cost = *active_cost_;
        d_ = cost;
        for (int i = 0; i < rows(); ++i) {
            double cb = cost[basis_[static_cast<std::size_t>(i)]];
            if (cb != 0.0) d_ -= cb * tableau_.row(i).transpose();
        }
        for (int i = 0; i < rows(); ++i) d_[basis_[static_cast<std::size_t>(i)]] = 0.0;
    }

    bool eligible(int j, double& dir) const {
        VarState st = state_[static_cast<std::size_t>(j)];
        if (st == VarState::Basic) return false;
        if (lp_.lower[j] == lp_.upper[j]) return false;   // fixed
        double dj = d_[j];
        if (st == VarState::AtLower && dj < -kDualTol) { dir = 1.0; return true; }
        if (st == VarState::AtUpper && dj > kDualTol) { dir = -1.0; return true; }
        if (st == VarState::FreeZero && std::abs(dj) > kDualTol) {
            dir = dj < 0 ? 1.0 : -1.0;
            return true;
        }
        return false;
    }

    int pick_entering(double& dir) const {
        int best = -1;
        double best_score = kDualTol;
        for (int j = 0; j < cols(); ++j) {
            double dj_dir;
            if (!eligible(j, dj_dir)) continue;
            if (bland_) { dir = dj_dir; return j; }
            double score = std::abs(d_[j]);
            if (score > best_score + 1e-15) {
                best = j;
                best_score = score;
                dir = dj_dir;
            }
        }
        return best;
    }

    // Returns false on unboundedness.
    bool iterate() {
        long iterations = 0;
        int stall = 0;
        const long hard_cap = 2000000;
        while (true) {
            if (++iterations > hard_cap)
                throw Error("simplex iteration cap exceeded");
            double dir = 0.0;
            int q = pick_entering(dir);
            if (q < 0) {
                if (verify_and_refactor()) return true;
                continue;   // refactorization exposed more work
            }

            Eigen::VectorXd w = tableau_.col(q);
            double limit = lp_.upper[q] - lp_.lower[q];   // bound-flip step
            double best_t = std::isfinite(limit) ? limit : kInf;
            int leave_row = -1;
            bool leave_to_upper = false;
            for (int i = 0; i < rows(); ++i) {
                double rate = dir * w[i];   // x_basic[i] decreases at this rate
                if (std::abs(rate) <= kPivotTol) continue;
                int bi = basis_[static_cast<std::size_t>(i)];
                double t;
                bool to_upper;
                if (rate > 0) {
                    if (!std::isfinite(lp_.lower[bi])) continue;
                    t = (x_basic_[i] - lp_.lower[bi]) / rate;
                    to_upper = false;
                } else {
                    if (!std::isfinite(lp_.upper[bi])) continue;
                    t = (lp_.upper[bi] - x_basic_[i]) / (-rate);
                    to_upper = true;
                }
                if (t < 0) t = 0;
                if (t < best_t - 1e-12 ||
                    (t < best_t + 1e-12 && leave_row >= 0 && better_leaver(i, leave_row, w))) {
                    best_t = t;
                    leave_row = i;
                    leave_to_upper = to_upper;
                }
            }

            if (!std::isfinite(best_t)) return false;   // unbounded ray
            stall = best_t <= 1e-10 ? stall + 1 : 0;
            if (stall > kStallLimit) bland_ = true;

            if (leave_row < 0) {
                // Bound flip: the entering variable traverses its whole range.
                x_basic_ -= w * (dir * best_t);
                state_[static_cast<std::size_t>(q)] =
                    state_[static_cast<std::size_t>(q)] == VarState::AtLower ? VarState::AtUpper
                                                                             : VarState::AtLower;
                continue;
            }

            double enter_value = nonbasic_value(q) + dir * best_t;
            x_basic_ -= w * (dir * best_t);
            int leaving = basis_[static_cast<std::size_t>(leave_row)];
            state_[static_cast<std::size_t>(leaving)] =
                leave_to_upper ? VarState::AtUpper : VarState::AtLower;
            pos_in_basis_[static_cast<std::size_t>(leaving)] = -1;
            make_basic(q, leave_row, enter_value);

            double piv = tableau_(leave_row, q);
            tableau_.row(leave_row) /= piv;
            for (int i = 0; i < rows(); ++i) {
                if (i == leave_row) continue;
                double f = tableau_(i, q);
                if (f != 0.0) tableau_.row(i) -= f * tableau_.row(leave_row);
            }
            double dq = d_[q];
            if (dq != 0.0) d_ -= dq * tableau_.row(leave_row).transpose();
            d_[q] = 0.0;
            if (iterations % 512 == 0) recompute_duals();
        }
    }

    // Deterministic ratio-test tie-break: Bland prefers the smallest basis
    // index, otherwise the largest pivot magnitude (then smallest index).
    bool better_leaver(int candidate, int incumbent, const Eigen::VectorXd& w) const {
        int cv = basis_[static_cast<std::size_t>(candidate)];
        int iv = basis_[static_cast<std::size_t>(incumbent)];
        if (bland_) return cv < iv;
        double cw = std::abs(w[candidate]);
        double iw = std::abs(w[incumbent]);
        if (cw != iw) return cw > iw;
        return cv < iv;
    }

    // Rebuilds the basic values and reduced costs exactly from the basis via
    // an LU factorization. Returns true when primal and dual tolerances hold;
    // otherwise the rebuilt (consistent) state is iterated further.
    bool verify_and_refactor() {
        const int m = rows();
        Eigen::MatrixXd basis_mat(m, m);
        for (int i = 0; i < m; ++i)
            basis_mat.col(i) = lp_.a.col(basis_[static_cast<std::size_t>(i)]);
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis_mat);

        Eigen::VectorXd rhs = lp_.b;
        for (int j = 0; j < cols(); ++j) {
            if (state_[static_cast<std::size_t>(j)] == VarState::Basic) continue;
            double v = nonbasic_value(j);
            if (v != 0.0) rhs -= lp_.a.col(j) * v;
        }
        Eigen::VectorXd xb = lu.solve(rhs);

        const Eigen::VectorXd& cost = *active_cost_;
        Eigen::VectorXd cb(m);
        for (int i = 0; i < m; ++i) cb[i] = cost[basis_[static_cast<std::size_t>(i)]];
        Eigen::VectorXd y = lu.transpose().solve(cb);
        Eigen::VectorXd d_exact = cost - lp_.a.transpose() * y;
        for (int i = 0; i < m; ++i) d_exact[basis_[static_cast<std::size_t>(i)]] = 0.0;

        bool primal_ok = true;
        for (int i = 0; i < m && primal_ok; ++i) {
            int bi = basis_[static_cast<std::size_t>(i)];
            primal_ok = xb[i] >= lp_.lower[bi] - kPrimalTol &&
                        xb[i] <= lp_.upper[bi] + kPrimalTol;
        }

        x_basic_ = xb;
        d_ = d_exact;
        if (++refactor_count_ > 16) return true;   // accept; avoids livelock
        if (!primal_ok) {
            // Accumulated drift broke feasibility; rebuild the tableau and let
            // the caller keep iterating from the exact state.
            tableau_ = lu.solve(lp_.a);
            bland_ = true;
            return false;
        }
        double dir;
        for (int j = 0; j < cols(); ++j) {
            if (eligible(j, dir)) {
                tableau_ = lu.solve(lp_.a);
                return false;
            }
        }
        return true;
    }

    LpResult finish(LpStatus status) {
        LpResult res;
        res.status = status;
        if (status != LpStatus::Optimal) return res;
        res.values.resize(static_cast<std::size_t>(lp_.num_structural));
        double obj = 0.0;
        for (int j = 0; j < cols(); ++j) {
            double v = current_value(j);
            if (j < lp_.num_structural) {
                v = std::clamp(v, lp_.lower[j], lp_.upper[j]);
                res.values[static_cast<std::size_t>(j)] = v;
            }
            obj += lp_.cost[j] * v;
        }
        res.objective = lp_.obj_sign * obj;
        return res;
    }

    CanonicalLp lp_;
    Eigen::MatrixXd tableau_;
    Eigen::VectorXd x_basic_;
    Eigen::VectorXd d_;
    Eigen::VectorXd phase_cost_;
    const Eigen::VectorXd* active_cost_ = nullptr;
    std::vector<int> basis_;
    std::vector<int> pos_in_basis_;
    std::vector<VarState> state_;
    std::ptrdiff_t cols_ = 0;
    int num_artificial_ = 0;
    int refactor_count_ = 0;
    bool bland_ = false;
};

} // namespace

LpResult solve_lp(const Model& model, const std::vector<BoundOverride>& overrides) {
    if (model.num_constraints() == 0) {
        // Degenerate but legal: optimize each variable at a bound.
        LpResult res;
        res.status = LpStatus::Optimal;
        res.values.resize(static_cast<std::size_t>(model.num_vars()));
        Eigen::VectorXd cost = Eigen::VectorXd::Zero(model.num_vars());
        double sign = 1.0;
        if (model.has_objective()) {
            sign = model.objective().sense == ObjSense::Maximize ? -1.0 : 1.0;
            for (const Term& t : model.objective().terms) cost[t.var] += sign * t.coef;
        }
        double obj = 0.0;
        for (int j = 0; j < model.num_vars(); ++j) {
            double lo = model.var(j).lower, hi = model.var(j).upper;
            for (const BoundOverride& o : overrides)
                if (o.var == j) { lo = o.lower; hi = o.upper; }
            double v;
            if (cost[j] > 0) v = lo;
            else if (cost[j] < 0) v = hi;
            else v = std::isfinite(lo) ? lo : (std::isfinite(hi) ? hi : 0.0);
            if (cost[j] != 0.0 && !std::isfinite(v)) {
                res.status = LpStatus::Unbounded;
                res.values.clear();
                return res;
            }
            if (!std::isfinite(v)) v = 0.0;
            if (lo > hi) {
                res.status = LpStatus::Infeasible;
                res.values.clear();
                return res;
            }
            res.values[static_cast<std::size_t>(j)] = v;
            obj += cost[j] * v;
        }
        res.objective = sign * obj;
        return res;
    }
    Simplex solver(build_canonical(model, overrides));
    return solver.solve();
}

} // namespace tlopt::milp
