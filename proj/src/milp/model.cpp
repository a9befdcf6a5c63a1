#include "tlopt/milp/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace tlopt::milp {

const char* status_name(SolveStatus status) {
    switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::GapLimit: return "gap_limit";
    case SolveStatus::NodeLimit: return "node_limit";
    }
    return "?";
}

int Model::add_var(const std::string& name, VarKind kind, double lower, double upper) {
    if (names_.count(name)) throw DuplicateNameError(name);
    if (name.empty()) throw ModelError("variable name must not be empty");
    if (!(lower <= upper))
        throw BadBoundsError("variable '" + name + "' has lower > upper");
    if (kind == VarKind::Binary && (lower < 0.0 || upper > 1.0))
        throw BadBoundsError("binary '" + name + "' must have bounds within [0,1]");
    int id = static_cast<int>(vars_.size());
    vars_.push_back(Var{id, name, kind, lower, upper});
    names_.emplace(name, id);
    return id;
}

std::vector<Term> Model::coalesce(std::vector<Term> terms) const {
    for (const Term& t : terms) {
        if (t.var < 0 || t.var >= num_vars()) throw UnknownVarError(t.var);
        if (!std::isfinite(t.coef))
            throw ModelError("non-finite coefficient on variable '" +
                             vars_[static_cast<std::size_t>(t.var)].name + "'");
    }
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return a.var < b.var; });
    std::vector<Term> out;
    out.reserve(terms.size());
    for (const Term& t : terms) {
        if (!out.empty() && out.back().var == t.var)
            out.back().coef += t.coef;
        else
            out.push_back(t);
    }
    std::erase_if(out, [](const Term& t) { return t.coef == 0.0; });
    return out;
}

int Model::add_constr(std::vector<Term> terms, ConstrSense sense, double rhs,
                      std::string name) {
    if (!std::isfinite(rhs)) throw ModelError("non-finite right-hand side");
    int id = static_cast<int>(constraints_.size());
    if (name.empty()) name = "c" + std::to_string(id);
    constraints_.push_back(LinConstraint{coalesce(std::move(terms)), sense, rhs,
                                         std::move(name)});
    return id;
}

AbsLink Model::add_abs_link(int source, int aux) {
    // Copy what is needed up front: adding the selector may reallocate vars_.
    const Var src = var(source);
    const std::string aux_name = var(aux).name;
    if (!std::isfinite(src.lower) || !std::isfinite(src.upper))
        throw UnboundedSourceError(src.name);
    if (var(aux).lower < 0.0)
        throw BadBoundsError("abs-link aux '" + aux_name + "' needs lower bound >= 0");
    double big_m = std::max(std::abs(src.lower), std::abs(src.upper));
    int sigma = add_var(aux_name + "_sel", VarKind::Binary, 0.0, 1.0);
    AbsLink link;
    link.sigma = sigma;
    link.constraints[0] = add_constr({{1.0, aux}, {-1.0, source}}, ConstrSense::Ge, 0.0,
                                     aux_name + "_lo_pos");
    link.constraints[1] = add_constr({{1.0, aux}, {1.0, source}}, ConstrSense::Ge, 0.0,
                                     aux_name + "_lo_neg");
    // aux <= source + 2M(1-sigma)  and  aux <= -source + 2M*sigma
    link.constraints[2] = add_constr({{1.0, aux}, {-1.0, source}, {2.0 * big_m, sigma}},
                                     ConstrSense::Le, 2.0 * big_m, aux_name + "_up_pos");
    link.constraints[3] = add_constr({{1.0, aux}, {1.0, source}, {-2.0 * big_m, sigma}},
                                     ConstrSense::Le, 0.0, aux_name + "_up_neg");
    return link;
}

void Model::set_objective(ObjSense sense, std::vector<Term> terms) {
    objective_ = Objective{sense, coalesce(std::move(terms))};
}

int Model::num_binaries() const {
    int n = 0;
    for (const Var& v : vars_) n += v.kind == VarKind::Binary;
    return n;
}

const Var& Model::var(int id) const {
    if (id < 0 || id >= num_vars()) throw UnknownVarError(id);
    return vars_[static_cast<std::size_t>(id)];
}

const Objective& Model::objective() const {
    if (!objective_) throw NoObjectiveError();
    return *objective_;
}

std::optional<int> Model::find_var(const std::string& name) const {
    auto it = names_.find(name);
    if (it == names_.end()) return {};
    return it->second;
}

namespace {

// Up to 12 significant digits, no trailing noise ("%.12g").
std::string lp_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_terms(std::ostream& os, const std::vector<Term>& terms,
                 const std::vector<Var>& vars) {
    bool first = true;
    for (const Term& t : terms) {
        double c = t.coef;
        if (first) {
            if (c < 0) os << "- ";
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        double mag = std::abs(c);
        if (mag != 1.0) os << lp_num(mag) << ' ';
        os << vars[static_cast<std::size_t>(t.var)].name;
        first = false;
    }
}

} // namespace

std::string Model::export_lp() const {
    const Objective& obj = objective();   // NoObjectiveError when absent
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::ostringstream os;
    os << (obj.sense == ObjSense::Maximize ? "Maximize" : "Minimize") << '\n';
    os << " obj:";
    if (!obj.terms.empty()) {
        os << ' ';
        write_terms(os, obj.terms, vars_);
    }
    os << '\n';
    os << "Subject To\n";
    for (const LinConstraint& c : constraints_) {
        os << ' ' << c.name << ": ";
        write_terms(os, c.terms, vars_);
        switch (c.sense) {
        case ConstrSense::Le: os << " <= "; break;
        case ConstrSense::Ge: os << " >= "; break;
        case ConstrSense::Eq: os << " = "; break;
        }
        os << lp_num(c.rhs) << '\n';
    }
    std::ostringstream bounds;
    for (const Var& v : vars_) {
        if (v.kind == VarKind::Binary && v.lower == 0.0 && v.upper == 1.0) continue;
        if (v.lower == 0.0 && v.upper == inf) continue;   // LP default
        if (v.lower == -inf && v.upper == inf) {
            bounds << ' ' << v.name << " free\n";
        } else if (v.upper == inf) {
            bounds << ' ' << v.name << " >= " << lp_num(v.lower) << '\n';
        } else if (v.lower == -inf) {
            bounds << " -inf <= " << v.name << " <= " << lp_num(v.upper) << '\n';
        } else {
            bounds << ' ' << lp_num(v.lower) << " <= " << v.name << " <= "
                   << lp_num(v.upper) << '\n';
        }
    }
    if (!bounds.str().empty()) os << "Bounds\n" << bounds.str();
    std::ostringstream binaries;
    for (const Var& v : vars_)
        if (v.kind == VarKind::Binary) binaries << ' ' << v.name << '\n';
    if (!binaries.str().empty()) os << "Binaries\n" << binaries.str();
    os << "End\n";
    return os.str();
}

} // namespace tlopt::milp
