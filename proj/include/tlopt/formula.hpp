#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tlopt/errors.hpp"

namespace tlopt {

// Which concrete language a string is parsed as. The AST itself is shared:
// STL/wSTL formulas have linear predicates over real signals, MTL formulas
// have named atomic propositions, and wSTL nodes may carry weight tags.
enum class Logic { Stl, Mtl, Wstl };

enum class NodeKind {
    Predicate,
    BoolConst,
    Not,
    And,
    Or,
    Always,
    Eventually,
    Until,
};

bool is_temporal(NodeKind kind);

enum class CmpSense { Ge, Le };

// Leaf of the AST. Linear predicates (`signal >= c` / `signal <= c`) occur in
// STL and wSTL; named atoms occur in MTL. `negated` marks an atom whose
// negation was absorbed by PNF; it is resolved as 1 - z at encoding time.
struct Predicate {
    enum class Kind { Linear, Atom };

    Kind kind = Kind::Linear;
    std::string name;
    CmpSense sense = CmpSense::Ge;   // Linear only
    double threshold = 0.0;          // Linear only
    bool negated = false;            // Atom only

    bool operator==(const Predicate&) const = default;
};

// Closed step interval [lo, hi] of a temporal operator, 0 <= lo <= hi.
struct Interval {
    int lo = 0;
    int hi = 0;

    int width() const { return hi - lo + 1; }
    bool operator==(const Interval&) const = default;
};

// Weight tables map a weight name to a vector of strictly positive reals.
// Logical weights have one entry per operand, temporal weights one entry per
// step of the operator's interval.
using WeightTable = std::map<std::string, std::vector<double>>;

class Formula;

struct FormulaNode {
    NodeKind kind = NodeKind::BoolConst;
    Predicate pred;                      // Predicate only
    bool value = false;                  // BoolConst only
    std::vector<Formula> children;
    std::optional<Interval> interval;    // temporal operators only
    std::optional<std::string> weight;   // wSTL operators only; nullopt = implicit ones
    SourceSpan span;
};

// Immutable formula handle with value semantics; subtrees are shared.
// Equality is structural and ignores source spans.
class Formula {
public:
    Formula() = default;

    static Formula linear(std::string signal, CmpSense sense, double threshold,
                          SourceSpan span = {});
    static Formula atom(std::string name, SourceSpan span = {});
    static Formula negated_atom(std::string name, SourceSpan span = {});
    static Formula bool_const(bool value, SourceSpan span = {});
    static Formula negation(Formula f, SourceSpan span = {});
    // And/Or flatten unweighted children of the same kind, so chains parse to
    // one n-ary node. Weighted nodes never take part in flattening.
    static Formula conjunction(std::vector<Formula> children,
                               std::optional<std::string> weight = {},
                               SourceSpan span = {});
    static Formula disjunction(std::vector<Formula> children,
                               std::optional<std::string> weight = {},
                               SourceSpan span = {});
    // Structure-preserving variants: the child list is kept as given. Used
    // by transforms whose semantics are arity-sensitive (AGM robustness
    // averages over the operand count).
    static Formula conjunction_exact(std::vector<Formula> children,
                                     std::optional<std::string> weight = {},
                                     SourceSpan span = {});
    static Formula disjunction_exact(std::vector<Formula> children,
                                     std::optional<std::string> weight = {},
                                     SourceSpan span = {});
    static Formula always(Formula f, Interval iv,
                          std::optional<std::string> weight = {},
                          SourceSpan span = {});
    static Formula eventually(Formula f, Interval iv,
                              std::optional<std::string> weight = {},
                              SourceSpan span = {});
    static Formula until(Formula lhs, Formula rhs, Interval iv, SourceSpan span = {});

    bool valid() const { return node_ != nullptr; }
    NodeKind kind() const { return node_->kind; }
    const Predicate& predicate() const { return node_->pred; }
    bool const_value() const { return node_->value; }
    const std::vector<Formula>& children() const { return node_->children; }
    const Formula& child(std::size_t i = 0) const { return node_->children[i]; }
    std::size_t arity() const { return node_->children.size(); }
    const Interval& interval() const { return *node_->interval; }
    const std::optional<std::string>& weight() const { return node_->weight; }
    SourceSpan span() const { return node_->span; }

    // Stable identity of the shared node, used as an encoding memo key.
    const FormulaNode* node() const { return node_.get(); }

    bool operator==(const Formula& other) const;
    bool operator!=(const Formula& other) const { return !(*this == other); }

private:
    explicit Formula(std::shared_ptr<const FormulaNode> node) : node_(std::move(node)) {}

    static Formula make(FormulaNode node);

    std::shared_ptr<const FormulaNode> node_;
};

// Canonical text that re-parses (under the matching parser and weight table)
// to a structurally equal AST. Canonical spellings are F, G, U, !, &&, ||.
std::string print_formula(const Formula& f);

// Signal (or proposition) names in first-appearance order.
std::vector<std::string> collect_signals(const Formula& f);

// True if any leaf is a named atom (an MTL formula).
bool has_atoms(const Formula& f);

// True if any node carries a weight tag.
bool has_weights(const Formula& f);

// Shortest decimal text that round-trips to the same double ("2", "0.35").
std::string format_number(double v);

} // namespace tlopt
