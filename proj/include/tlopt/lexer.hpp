#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tlopt/formula.hpp"

namespace tlopt {

enum class TokenKind {
    Eventually,   // F or <>
    Always,       // G or []
    Until,        // U
    Not,          // ! or ~
    And,          // && or &
    Or,           // || or |
    Caret,        // ^ (wSTL weight marker)
    Minus,
    LBracket,
    RBracket,
    LParen,
    RParen,
    Comma,
    CmpGe,        // >= or >
    CmpLe,        // <= or <
    CmpEq,        // = or == (always rejected by the parsers)
    Number,
    Ident,
    End,
};

const char* token_kind_name(TokenKind kind);

struct Token {
    TokenKind kind;
    SourceSpan span;
    std::string text;
    double value = 0.0;       // Number only
    bool is_integer = false;  // Number written without '.' or exponent
};

// Splits a specification string into tokens. Whitespace is skipped; the
// trailing End token carries the text length. `^` is only a token in wSTL.
std::vector<Token> tokenize(std::string_view text, Logic logic);

} // namespace tlopt
