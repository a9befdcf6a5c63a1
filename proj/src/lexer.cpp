#include "tlopt/lexer.hpp"

#include <cctype>
#include <charconv>

namespace tlopt {

const char* token_kind_name(TokenKind kind) {
    switch (kind) {
    case TokenKind::Eventually: return "'F'";
    case TokenKind::Always: return "'G'";
    case TokenKind::Until: return "'U'";
    case TokenKind::Not: return "'!'";
    case TokenKind::And: return "'&&'";
    case TokenKind::Or: return "'||'";
    case TokenKind::Caret: return "'^'";
    case TokenKind::Minus: return "'-'";
    case TokenKind::LBracket: return "'['";
    case TokenKind::RBracket: return "']'";
    case TokenKind::LParen: return "'('";
    case TokenKind::RParen: return "')'";
    case TokenKind::Comma: return "','";
    case TokenKind::CmpGe: return "'>='";
    case TokenKind::CmpLe: return "'<='";
    case TokenKind::CmpEq: return "'='";
    case TokenKind::Number: return "number";
    case TokenKind::Ident: return "identifier";
    case TokenKind::End: return "end of input";
    }
    return "?";
}

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

} // namespace

std::vector<Token> tokenize(std::string_view text, Logic logic) {
    std::vector<Token> out;
    std::size_t i = 0;
    const std::size_t n = text.size();

    auto push = [&](TokenKind kind, std::size_t begin, std::size_t end) {
        out.push_back(Token{kind, SourceSpan{begin, end},
                            std::string(text.substr(begin, end - begin))});
    };

    while (i < n) {
        char c = text[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            ++i;
            continue;
        }
        std::size_t start = i;
        switch (c) {
        case '(': push(TokenKind::LParen, start, ++i); continue;
        case ')': push(TokenKind::RParen, start, ++i); continue;
        case ',': push(TokenKind::Comma, start, ++i); continue;
        case ']': push(TokenKind::RBracket, start, ++i); continue;
        case '-': push(TokenKind::Minus, start, ++i); continue;
        case '!':
        case '~': push(TokenKind::Not, start, ++i); continue;
        case '[':
            if (i + 1 < n && text[i + 1] == ']') {
                i += 2;
                push(TokenKind::Always, start, i);
            } else {
                push(TokenKind::LBracket, start, ++i);
            }
            continue;
        case '<':
            if (i + 1 < n && text[i + 1] == '>') {
                i += 2;
                push(TokenKind::Eventually, start, i);
            } else if (i + 1 < n && text[i + 1] == '=') {
                i += 2;
                push(TokenKind::CmpLe, start, i);
            } else {
                push(TokenKind::CmpLe, start, ++i);
            }
            continue;
        case '>':
            i += (i + 1 < n && text[i + 1] == '=') ? 2 : 1;
            push(TokenKind::CmpGe, start, i);
            continue;
        case '=':
            i += (i + 1 < n && text[i + 1] == '=') ? 2 : 1;
            push(TokenKind::CmpEq, start, i);
            continue;
        case '&':
            i += (i + 1 < n && text[i + 1] == '&') ? 2 : 1;
            push(TokenKind::And, start, i);
            continue;
        case '|':
            i += (i + 1 < n && text[i + 1] == '|') ? 2 : 1;
            push(TokenKind::Or, start, i);
            continue;
        case '^':
            if (logic != Logic::Wstl)
                throw LexError("'^' weight marker is only valid in wSTL", start);
            push(TokenKind::Caret, start, ++i);
            continue;
        default:
            break;
        }

        if (digit(c)) {
            std::size_t j = i;
            bool is_integer = true;
            while (j < n && digit(text[j])) ++j;
            if (j < n && text[j] == '.' && j + 1 < n && digit(text[j + 1])) {
                is_integer = false;
                ++j;
                while (j < n && digit(text[j])) ++j;
            }
            if (j < n && (text[j] == 'e' || text[j] == 'E')) {
                std::size_t k = j + 1;
                if (k < n && (text[k] == '+' || text[k] == '-')) ++k;
                if (k < n && digit(text[k])) {
                    is_integer = false;
                    j = k;
                    while (j < n && digit(text[j])) ++j;
                }
            }
            Token tok{TokenKind::Number, SourceSpan{i, j},
                      std::string(text.substr(i, j - i))};
            std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), tok.value);
            tok.is_integer = is_integer;
            out.push_back(std::move(tok));
            i = j;
            continue;
        }

        if (ident_start(c)) {
            std::size_t j = i;
            while (j < n && ident_char(text[j])) ++j;
            std::string_view word = text.substr(i, j - i);
            TokenKind kind = TokenKind::Ident;
            if (word == "F") kind = TokenKind::Eventually;
            else if (word == "G") kind = TokenKind::Always;
            else if (word == "U") kind = TokenKind::Until;
            push(kind, i, j);
            i = j;
            continue;
        }

        throw LexError("unrecognized character", start);
    }

    push(TokenKind::End, n, n);
    return out;
}

} // namespace tlopt
