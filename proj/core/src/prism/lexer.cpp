#include "lexer.hpp"

#include <cctype>

#include "parley/prism/parser.hpp"

namespace parley::prism::detail {

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

} // namespace

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> out;
    std::size_t i = 0;
    int line = 1;
    int col = 1;

    auto advance = [&](std::size_t n = 1) {
        for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    auto peek = [&](std::size_t off = 0) -> char { return i + off < text.size() ? text[i + off] : '\0'; };

    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance();
            continue;
        }
        if (c == '/' && peek(1) == '/') {
            while (i < text.size() && text[i] != '\n') advance();
            continue;
        }
        Token tok;
        tok.pos = {line, col};
        if (is_ident_start(c)) {
            std::size_t start = i;
            while (i < text.size() && is_ident_char(text[i])) advance();
            tok.kind = Tok::Ident;
            tok.text = std::string(text.substr(start, i - start));
            out.push_back(std::move(tok));
            continue;
        }
        if (is_digit(c) || (c == '.' && is_digit(peek(1)))) {
            std::size_t start = i;
            bool is_double = false;
            while (is_digit(peek())) advance();
            // `0..N` is a range, not a fraction.
            if (peek() == '.' && is_digit(peek(1))) {
                is_double = true;
                advance();
                while (is_digit(peek())) advance();
            }
            if (peek() == 'e' || peek() == 'E') {
                std::size_t off = 1;
                if (peek(1) == '+' || peek(1) == '-') off = 2;
                if (is_digit(peek(off))) {
                    is_double = true;
                    advance(off);
                    while (is_digit(peek())) advance();
                }
            }
            tok.kind = is_double ? Tok::Double : Tok::Int;
            tok.text = std::string(text.substr(start, i - start));
            out.push_back(std::move(tok));
            continue;
        }
        if (c == '"') {
            advance();
            std::size_t start = i;
            while (i < text.size() && text[i] != '"' && text[i] != '\n') advance();
            if (peek() != '"') throw SyntaxError(tok.pos.line, tok.pos.col, "unterminated string literal");
            tok.kind = Tok::String;
            tok.text = std::string(text.substr(start, i - start));
            advance();
            out.push_back(std::move(tok));
            continue;
        }
        auto two = [&](char a, char b) { return c == a && peek(1) == b; };
        std::size_t len = 1;
        if (two('-', '>')) {
            tok.kind = Tok::Arrow;
            len = 2;
        } else if (two('.', '.')) {
            tok.kind = Tok::DotDot;
            len = 2;
        } else if (two('!', '=')) {
            tok.kind = Tok::Ne;
            len = 2;
        } else if (two('<', '=')) {
            tok.kind = Tok::Le;
            len = 2;
        } else if (two('>', '=')) {
            tok.kind = Tok::Ge;
            len = 2;
        } else {
            switch (c) {
                case '[': tok.kind = Tok::LBracket; break;
                case ']': tok.kind = Tok::RBracket; break;
                case '(': tok.kind = Tok::LParen; break;
                case ')': tok.kind = Tok::RParen; break;
                case '{': tok.kind = Tok::LBrace; break;
                case '}': tok.kind = Tok::RBrace; break;
                case ';': tok.kind = Tok::Semi; break;
                case ':': tok.kind = Tok::Colon; break;
                case ',': tok.kind = Tok::Comma; break;
                case '\'': tok.kind = Tok::Prime; break;
                case '=': tok.kind = Tok::Assign; break;
                case '<': tok.kind = Tok::Lt; break;
                case '>': tok.kind = Tok::Gt; break;
                case '&': tok.kind = Tok::And; break;
                case '|': tok.kind = Tok::Or; break;
                case '!': tok.kind = Tok::Not; break;
                case '+': tok.kind = Tok::Plus; break;
                case '-': tok.kind = Tok::Minus; break;
                case '*': tok.kind = Tok::Star; break;
                case '/': tok.kind = Tok::Slash; break;
                case '?': tok.kind = Tok::Question; break;
                default:
                    throw SyntaxError(line, col, std::string("unexpected character '") + c + "'");
            }
        }
        tok.text = std::string(text.substr(i, len));
        advance(len);
        out.push_back(std::move(tok));
    }
    Token end;
    end.kind = Tok::End;
    end.pos = {line, col};
    out.push_back(end);
    return out;
}

const char* describe(Tok kind) {
    switch (kind) {
        case Tok::Ident: return "identifier";
        case Tok::Int: return "integer";
        case Tok::Double: return "number";
        case Tok::String: return "string";
        case Tok::LBracket: return "'['";
        case Tok::RBracket: return "']'";
        case Tok::LParen: return "'('";
        case Tok::RParen: return "')'";
        case Tok::LBrace: return "'{'";
        case Tok::RBrace: return "'}'";
        case Tok::Semi: return "';'";
        case Tok::Colon: return "':'";
        case Tok::Comma: return "','";
        case Tok::Prime: return "'''";
        case Tok::Assign: return "'='";
        case Tok::Ne: return "'!='";
        case Tok::Lt: return "'<'";
        case Tok::Le: return "'<='";
        case Tok::Gt: return "'>'";
        case Tok::Ge: return "'>='";
        case Tok::And: return "'&'";
        case Tok::Or: return "'|'";
        case Tok::Not: return "'!'";
        case Tok::Plus: return "'+'";
        case Tok::Minus: return "'-'";
        case Tok::Star: return "'*'";
        case Tok::Slash: return "'/'";
        case Tok::Arrow: return "'->'";
        case Tok::DotDot: return "'..'";
        case Tok::Question: return "'?'";
        case Tok::End: return "end of input";
    }
    return "token";
}

} // namespace parley::prism::detail
