#pragma once

#include <array>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "tlopt/errors.hpp"

namespace tlopt::milp {

enum class VarKind { Continuous, Binary };
enum class ConstrSense { Le, Ge, Eq };
enum class ObjSense { Maximize, Minimize };

struct Var {
    int id = -1;
    std::string name;
    VarKind kind = VarKind::Continuous;
    double lower = 0.0;
    double upper = 0.0;
};

struct Term {
    double coef = 0.0;
    int var = -1;
};

struct LinConstraint {
    std::vector<Term> terms;   // coalesced, sorted by var id
    ConstrSense sense = ConstrSense::Le;
    double rhs = 0.0;
    std::string name;
};

struct Objective {
    ObjSense sense = ObjSense::Maximize;
    std::vector<Term> terms;   // coalesced, sorted by var id
};

enum class SolveStatus { Optimal, Infeasible, Unbounded, GapLimit, NodeLimit };

const char* status_name(SolveStatus status);

struct Solution {
    SolveStatus status = SolveStatus::Infeasible;
    std::vector<double> values;   // by var id; empty when no incumbent exists
    double objective = 0.0;
    double bound = 0.0;           // best proven bound on the optimum
    double gap = 0.0;             // |bound - objective| / max(1, |objective|)
    long nodes = 0;
    double solve_seconds = 0.0;
};

struct AbsLink {
    std::array<int, 4> constraints{};  // two >= and two <= rows
    int sigma = -1;                    // selector binary
};

// Mutable while being built; solving and export take it by const reference.
class Model {
public:
    // Fresh dense id; names must be unique, bounds ordered, binaries within [0,1].
    int add_var(const std::string& name, VarKind kind, double lower, double upper);

    // Duplicate variable ids in `terms` are coalesced by summing coefficients.
    // An empty name is auto-filled with "c<index>".
    int add_constr(std::vector<Term> terms, ConstrSense sense, double rhs,
                   std::string name = {});

    // Enforces aux == |source| exactly: aux >= source, aux >= -source, and two
    // big-M upper cuts switched by a fresh binary, M = max(|lb|,|ub|) of source.
    AbsLink add_abs_link(int source, int aux);

    void set_objective(ObjSense sense, std::vector<Term> terms);

    int num_vars() const { return static_cast<int>(vars_.size()); }
    int num_constraints() const { return static_cast<int>(constraints_.size()); }
    int num_binaries() const;
    const Var& var(int id) const;
    const std::vector<Var>& vars() const { return vars_; }
    const std::vector<LinConstraint>& constraints() const { return constraints_; }
    bool has_objective() const { return objective_.has_value(); }
    const Objective& objective() const;
    std::optional<int> find_var(const std::string& name) const;

    // CPLEX LP text format with a fixed layout; deterministic byte-for-byte.
    std::string export_lp() const;

private:
    std::vector<Term> coalesce(std::vector<Term> terms) const;

    std::vector<Var> vars_;
    std::vector<LinConstraint> constraints_;
    std::optional<Objective> objective_;
    std::unordered_map<std::string, int> names_;
};

} // namespace tlopt::milp
