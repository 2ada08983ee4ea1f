#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "parley/prism/ast.hpp"

namespace parley::prism::detail {

enum class Tok {
    Ident,
    Int,
    Double,
    String,
    LBracket,
    RBracket,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Semi,
    Colon,
    Comma,
    Prime,
    Assign,  // =
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    And,
    Or,
    Not,
    Plus,
    Minus,
    Star,
    Slash,
    Arrow,
    DotDot,
    Question,
    End,
};

struct Token {
    Tok kind = Tok::End;
    std::string text;
    SourcePos pos;
};

/// Splits source into tokens; `//` comments run to end of line.
/// Throws SyntaxError on stray characters.
std::vector<Token> tokenize(std::string_view text);

const char* describe(Tok kind);

} // namespace parley::prism::detail
