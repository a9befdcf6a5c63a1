#include "tlopt/formula.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>
#include <unordered_set>

namespace tlopt {

bool is_temporal(NodeKind kind) {
    return kind == NodeKind::Always || kind == NodeKind::Eventually ||
           kind == NodeKind::Until;
}

namespace {

void check_interval(const Interval& iv) {
    if (iv.lo < 0 || iv.hi < iv.lo)
        throw SemanticError("temporal interval must satisfy 0 <= a <= b, got [" +
                            std::to_string(iv.lo) + "," + std::to_string(iv.hi) + "]");
}

} // namespace

Formula Formula::make(FormulaNode node) {
    return Formula(std::make_shared<const FormulaNode>(std::move(node)));
}

namespace {

FormulaNode nary_node(NodeKind kind, std::vector<Formula> children,
                      std::optional<std::string> weight, SourceSpan span,
                      bool flatten) {
    if (children.size() < 2)
        throw SemanticError("And/Or needs at least 2 operands");
    std::vector<Formula> flat;
    flat.reserve(children.size());
    for (auto& c : children) {
        // Merge unweighted chains of the same operator; a weighted child (or
        // parent) is a distinct operator and stays nested.
        if (flatten && !weight && c.kind() == kind && !c.weight()) {
            for (const auto& gc : c.children()) flat.push_back(gc);
        } else {
            flat.push_back(std::move(c));
        }
    }
    FormulaNode node;
    node.kind = kind;
    node.children = std::move(flat);
    node.weight = std::move(weight);
    node.span = span;
    return node;
}

} // namespace

Formula Formula::linear(std::string signal, CmpSense sense, double threshold,
                        SourceSpan span) {
    FormulaNode node;
    node.kind = NodeKind::Predicate;
    node.pred = Predicate{Predicate::Kind::Linear, std::move(signal), sense, threshold, false};
    node.span = span;
    return make(std::move(node));
}

Formula Formula::atom(std::string name, SourceSpan span) {
    FormulaNode node;
    node.kind = NodeKind::Predicate;
    node.pred = Predicate{Predicate::Kind::Atom, std::move(name), CmpSense::Ge, 0.0, false};
    node.span = span;
    return make(std::move(node));
}

Formula Formula::negated_atom(std::string name, SourceSpan span) {
    FormulaNode node;
    node.kind = NodeKind::Predicate;
    node.pred = Predicate{Predicate::Kind::Atom, std::move(name), CmpSense::Ge, 0.0, true};
    node.span = span;
    return make(std::move(node));
}

Formula Formula::bool_const(bool value, SourceSpan span) {
    FormulaNode node;
    node.kind = NodeKind::BoolConst;
    node.value = value;
    node.span = span;
    return make(std::move(node));
}

Formula Formula::negation(Formula f, SourceSpan span) {
    FormulaNode node;
    node.kind = NodeKind::Not;
    node.children.push_back(std::move(f));
    node.span = span;
    return make(std::move(node));
}

Formula Formula::conjunction(std::vector<Formula> children,
                             std::optional<std::string> weight, SourceSpan span) {
    return make(
        nary_node(NodeKind::And, std::move(children), std::move(weight), span, true));
}

Formula Formula::disjunction(std::vector<Formula> children,
                             std::optional<std::string> weight, SourceSpan span) {
    return make(
        nary_node(NodeKind::Or, std::move(children), std::move(weight), span, true));
}

Formula Formula::conjunction_exact(std::vector<Formula> children,
                                   std::optional<std::string> weight, SourceSpan span) {
    return make(
        nary_node(NodeKind::And, std::move(children), std::move(weight), span, false));
}

Formula Formula::disjunction_exact(std::vector<Formula> children,
                                   std::optional<std::string> weight, SourceSpan span) {
    return make(
        nary_node(NodeKind::Or, std::move(children), std::move(weight), span, false));
}

Formula Formula::always(Formula f, Interval iv, std::optional<std::string> weight,
                        SourceSpan span) {
    check_interval(iv);
    FormulaNode node;
    node.kind = NodeKind::Always;
    node.children.push_back(std::move(f));
    node.interval = iv;
    node.weight = std::move(weight);
    node.span = span;
    return make(std::move(node));
}

Formula Formula::eventually(Formula f, Interval iv, std::optional<std::string> weight,
                            SourceSpan span) {
    check_interval(iv);
    FormulaNode node;
    node.kind = NodeKind::Eventually;
    node.children.push_back(std::move(f));
    node.interval = iv;
    node.weight = std::move(weight);
    node.span = span;
    return make(std::move(node));
}

Formula Formula::until(Formula lhs, Formula rhs, Interval iv, SourceSpan span) {
    check_interval(iv);
    FormulaNode node;
    node.kind = NodeKind::Until;
    node.children.push_back(std::move(lhs));
    node.children.push_back(std::move(rhs));
    node.interval = iv;
    node.span = span;
    return make(std::move(node));
}

bool Formula::operator==(const Formula& other) const {
    if (node_ == other.node_) return true;
    if (!node_ || !other.node_) return false;
    const FormulaNode& a = *node_;
    const FormulaNode& b = *other.node_;
    if (a.kind != b.kind || a.interval != b.interval || a.weight != b.weight)
        return false;
    if (a.kind == NodeKind::Predicate && !(a.pred == b.pred)) return false;
    if (a.kind == NodeKind::BoolConst && a.value != b.value) return false;
    if (a.children.size() != b.children.size()) return false;
    for (std::size_t i = 0; i < a.children.size(); ++i)
        if (a.children[i] != b.children[i]) return false;
    return true;
}

std::string format_number(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

void print_interval(std::ostream& os, const FormulaNode& node) {
    if (node.weight) os << '^' << *node.weight;
    os << '[' << node.interval->lo << ',' << node.interval->hi << ']';
}

// Every operand is parenthesized, which keeps the text unambiguous under the
// parser's precedence rules regardless of context.
void print_rec(std::ostream& os, const Formula& f) {
    const FormulaNode& node = *f.node();
    switch (f.kind()) {
    case NodeKind::Predicate: {
        const Predicate& p = f.predicate();
        if (p.kind == Predicate::Kind::Atom) {
            if (p.negated) os << '!';
            os << p.name;
        } else {
            os << p.name << (p.sense == CmpSense::Ge ? " >= " : " <= ")
               << format_number(p.threshold);
        }
        break;
    }
    case NodeKind::BoolConst:
        os << (f.const_value() ? "true" : "false");
        break;
    case NodeKind::Not:
        os << "!(";
        print_rec(os, f.child());
        os << ')';
        break;
    case NodeKind::And:
    case NodeKind::Or: {
        const char* op = f.kind() == NodeKind::And ? "&&" : "||";
        if (node.weight) {
            os << op << '^' << *node.weight << '(';
            for (std::size_t i = 0; i < f.arity(); ++i) {
                if (i) os << ", ";
                print_rec(os, f.child(i));
            }
            os << ')';
        } else {
            for (std::size_t i = 0; i < f.arity(); ++i) {
                if (i) os << ' ' << op << ' ';
                os << '(';
                print_rec(os, f.child(i));
                os << ')';
            }
        }
        break;
    }
    case NodeKind::Always:
    case NodeKind::Eventually:
        os << (f.kind() == NodeKind::Always ? 'G' : 'F');
        print_interval(os, node);
        os << " (";
        print_rec(os, f.child());
        os << ')';
        break;
    case NodeKind::Until:
        os << '(';
        print_rec(os, f.child(0));
        os << ") U";
        print_interval(os, node);
        os << " (";
        print_rec(os, f.child(1));
        os << ')';
        break;
    }
}

} // namespace

std::string print_formula(const Formula& f) {
    std::ostringstream os;
    print_rec(os, f);
    return os.str();
}

namespace {

void collect_rec(const Formula& f, std::vector<std::string>& out,
                 std::unordered_set<std::string>& seen) {
    if (f.kind() == NodeKind::Predicate) {
        if (seen.insert(f.predicate().name).second) out.push_back(f.predicate().name);
        return;
    }
    for (const auto& c : f.children()) collect_rec(c, out, seen);
}

} // namespace

std::vector<std::string> collect_signals(const Formula& f) {
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    collect_rec(f, out, seen);
    return out;
}

bool has_atoms(const Formula& f) {
    if (f.kind() == NodeKind::Predicate)
        return f.predicate().kind == Predicate::Kind::Atom;
    for (const auto& c : f.children())
        if (has_atoms(c)) return true;
    return false;
}

bool has_weights(const Formula& f) {
    if (f.node()->weight) return true;
    for (const auto& c : f.children())
        if (has_weights(c)) return true;
    return false;
}

} // namespace tlopt
