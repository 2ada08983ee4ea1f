#pragma once

#include <string>

#include "parley/prism/ast.hpp"

namespace parley::prism {

/// Renders a model as PRISM source. The output parses back to a
/// structurally equal model (constants first, then modules, labels and
/// reward structures).
std::string print(const Model& model);

/// Renders an expression with the minimum parentheses needed to preserve
/// its tree shape. A `Neg` applied directly to a literal reparses as a
/// negative literal.
std::string print(const Expr& expr);

/// Formats a double so that it reparses to the same binary64 value as a
/// floating-point literal.
std::string format_double(double value);

} // namespace parley::prism
