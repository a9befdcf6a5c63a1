#include "tlopt/parser.hpp"

#include <cmath>
#include <limits>

#include "tlopt/lexer.hpp"

namespace tlopt {

namespace {

class Parser {
public:
    Parser(std::string_view text, Logic logic, const WeightTable& weights)
        : logic_(logic), weights_(weights), tokens_(tokenize(text, logic)) {}

    Formula run() {
        Formula f = parse_or();
        expect(TokenKind::End, "after the formula");
        return f;
    }

private:
    const Token& peek(std::size_t ahead = 0) const {
        std::size_t i = pos_ + ahead;
        return i < tokens_.size() ? tokens_[i] : tokens_.back();
    }

    const Token& advance() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

    bool match(TokenKind kind) {
        if (peek().kind != kind) return false;
        advance();
        return true;
    }

    const Token& expect(TokenKind kind, const char* context) {
        if (peek().kind != kind)
            fail(std::string("expected ") + token_kind_name(kind) + " " + context +
                 ", got " + token_kind_name(peek().kind));
        return tokens_[pos_++];
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg, peek().span);
    }

    SourceSpan span_from(std::size_t begin) const {
        return SourceSpan{begin, tokens_[pos_ > 0 ? pos_ - 1 : 0].span.end};
    }

    // or := and ('||' and)*
    Formula parse_or() {
        std::size_t begin = peek().span.begin;
        Formula lhs = parse_and();
        if (peek().kind != TokenKind::Or) return lhs;
        std::vector<Formula> operands{std::move(lhs)};
        while (match(TokenKind::Or)) operands.push_back(parse_and());
        return Formula::disjunction(std::move(operands), {}, span_from(begin));
    }

    // and := until ('&&' until)*
    Formula parse_and() {
        std::size_t begin = peek().span.begin;
        Formula lhs = parse_until();
        if (peek().kind != TokenKind::And) return lhs;
        std::vector<Formula> operands{std::move(lhs)};
        while (match(TokenKind::And)) operands.push_back(parse_until());
        return Formula::conjunction(std::move(operands), {}, span_from(begin));
    }

    // until := unary ('U' interval unary)*   (left-associative)
    Formula parse_until() {
        std::size_t begin = peek().span.begin;
        Formula lhs = parse_unary();
        while (peek().kind == TokenKind::Until) {
            advance();
            Interval iv = parse_interval("after 'U'");
            Formula rhs = parse_unary();
            lhs = Formula::until(std::move(lhs), std::move(rhs), iv, span_from(begin));
        }
        return lhs;
    }

    Formula parse_unary() {
        std::size_t begin = peek().span.begin;
        switch (peek().kind) {
        case TokenKind::Not: {
            advance();
            Formula inner = parse_unary();
            return Formula::negation(std::move(inner), span_from(begin));
        }
        case TokenKind::Always:
        case TokenKind::Eventually: {
            bool always = advance().kind == TokenKind::Always;
            std::optional<std::string> weight = parse_weight_tag();
            Interval iv = parse_interval(always ? "after 'G'" : "after 'F'");
            if (weight) check_weight(*weight, static_cast<std::size_t>(iv.width()));
            Formula inner = parse_unary();
            return always
                ? Formula::always(std::move(inner), iv, std::move(weight), span_from(begin))
                : Formula::eventually(std::move(inner), iv, std::move(weight), span_from(begin));
        }
        default:
            return parse_primary();
        }
    }

    Formula parse_primary() {
        std::size_t begin = peek().span.begin;
        switch (peek().kind) {
        case TokenKind::LParen: {
            advance();
            Formula inner = parse_or();
            expect(TokenKind::RParen, "to close '('");
            return inner;
        }
        case TokenKind::And:
        case TokenKind::Or: {
            // wSTL call form: &&^p(f1, f2, ...) / ||^p(...)
            if (logic_ != Logic::Wstl)
                fail(std::string("unexpected ") + token_kind_name(peek().kind) +
                     "; '&&'/'||' are infix outside wSTL");
            bool conj = advance().kind == TokenKind::And;
            std::optional<std::string> weight = parse_weight_tag();
            expect(TokenKind::LParen, conj ? "after '&&'" : "after '||'");
            std::vector<Formula> operands;
            operands.push_back(parse_or());
            while (match(TokenKind::Comma)) operands.push_back(parse_or());
            expect(TokenKind::RParen, "to close the operand list");
            if (operands.size() < 2)
                fail("'&&'/'||' call form needs at least 2 operands");
            if (weight) check_weight(*weight, operands.size());
            return conj
                ? Formula::conjunction(std::move(operands), std::move(weight), span_from(begin))
                : Formula::disjunction(std::move(operands), std::move(weight), span_from(begin));
        }
        case TokenKind::Ident:
            return parse_leaf();
        default:
            fail(std::string("expected a predicate, '(' or an operator, got ") +
                 token_kind_name(peek().kind));
        }
    }

    Formula parse_leaf() {
        const Token& name = expect(TokenKind::Ident, "as a predicate");
        TokenKind next = peek().kind;
        bool comparison = next == TokenKind::CmpGe || next == TokenKind::CmpLe ||
                          next == TokenKind::CmpEq;
        if (logic_ == Logic::Mtl) {
            if (comparison)
                fail("linear predicates not allowed in MTL; leaves are atomic propositions");
            return Formula::atom(name.text, name.span);
        }
        if (!comparison)
            fail("bare atom '" + name.text +
                 "' not allowed here; STL/wSTL predicates have the form 'signal >= c'");
        if (next == TokenKind::CmpEq)
            fail("equality predicates are not supported; use '>=' or '<='");
        CmpSense sense = next == TokenKind::CmpGe ? CmpSense::Ge : CmpSense::Le;
        advance();
        double threshold = parse_signed_number();
        return Formula::linear(name.text, sense, threshold,
                               SourceSpan{name.span.begin, tokens_[pos_ - 1].span.end});
    }

    double parse_signed_number() {
        bool negative = match(TokenKind::Minus);
        const Token& num = expect(TokenKind::Number, "as a threshold");
        return negative ? -num.value : num.value;
    }

    std::optional<std::string> parse_weight_tag() {
        if (logic_ != Logic::Wstl || peek().kind != TokenKind::Caret) return {};
        advance();
        return expect(TokenKind::Ident, "as a weight name").text;
    }

    Interval parse_interval(const char* context) {
        if (peek().kind != TokenKind::LBracket)
            throw MissingIntervalError(
                std::string("missing time interval ") + context +
                "; temporal operators need an explicit [a,b]", peek().span);
        advance();
        int lo = parse_interval_bound();
        expect(TokenKind::Comma, "between interval bounds");
        int hi = parse_interval_bound();
        const Token& close = expect(TokenKind::RBracket, "to close the interval");
        if (lo > hi)
            throw ParseError("interval bounds must satisfy a <= b", close.span);
        return Interval{lo, hi};
    }

    int parse_interval_bound() {
        const Token& num = expect(TokenKind::Number, "as an interval bound");
        if (!num.is_integer || num.value > std::numeric_limits<int>::max())
            throw ParseError("interval bounds must be nonnegative integers", num.span);
        return static_cast<int>(num.value);
    }

    void check_weight(const std::string& name, std::size_t expected_len) const {
        auto it = weights_.find(name);
        if (it == weights_.end()) throw UnknownWeightError(name);
        if (it->second.size() != expected_len)
            throw WeightArityError(name, expected_len, it->second.size());
        for (double w : it->second)
            if (!(w > 0.0))
                throw SemanticError("weight '" + name + "' has a non-positive entry");
    }

    Logic logic_;
    WeightTable weights_;
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

} // namespace

Formula parse_stl(std::string_view text) {
    return Parser(text, Logic::Stl, {}).run();
}

Formula parse_mtl(std::string_view text) {
    return Parser(text, Logic::Mtl, {}).run();
}

Formula parse_wstl(std::string_view text, const WeightTable& weights) {
    return Parser(text, Logic::Wstl, weights).run();
}

Formula parse(std::string_view text, Logic logic, const WeightTable& weights) {
    return Parser(text, logic, weights).run();
}

} // namespace tlopt
