#pragma once

#include <string>
#include <string_view>

#include "parley/error.hpp"
#include "parley/prism/ast.hpp"

namespace parley::prism {

class SyntaxError : public ModelError {
public:
    SyntaxError(int line, int col, std::string message, std::string file = {});

    [[nodiscard]] int line() const noexcept { return line_; }
    [[nodiscard]] int col() const noexcept { return col_; }
    [[nodiscard]] const std::string& message() const noexcept { return message_; }
    [[nodiscard]] const std::string& file() const noexcept { return file_; }

private:
    int line_;
    int col_;
    std::string message_;
    std::string file_;
};

/// A recognised PRISM construct outside the supported subset
/// (`mdp`, `ctmc`, `formula`, state rewards, module renaming, ...).
class UnsupportedConstruct : public ModelError {
public:
    UnsupportedConstruct(std::string construct, int line, int col);

    [[nodiscard]] const std::string& construct() const noexcept { return construct_; }
    [[nodiscard]] int line() const noexcept { return line_; }
    [[nodiscard]] int col() const noexcept { return col_; }

private:
    std::string construct_;
    int line_;
    int col_;
};

/// Parses a `.prism` source text. Throws SyntaxError or UnsupportedConstruct.
Model parse(std::string_view text);

/// Parses a single expression (used for property strings and tests).
Expr parse_expression(std::string_view text);

/// Reads and parses a file; errors carry the file name in their message.
Model parse_file(const std::string& path);

} // namespace parley::prism
