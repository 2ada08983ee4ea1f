#pragma once

#include <map>
#include <optional>
#include <string>

#include "parley/error.hpp"
#include "parley/prism/ast.hpp"

namespace parley::prism {

class UnknownConstant : public ModelError {
public:
    explicit UnknownConstant(const std::string& name);
    [[nodiscard]] const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

class KindMismatch : public ModelError {
public:
    using ModelError::ModelError;
};

using ConstantValues = std::map<std::string, double, std::less<>>;

/// Values of every constant whose definition resolves without reference to
/// an unbound constant. Cyclic definitions are left out.
ConstantValues evaluate_constants(const Model& model);

/// Evaluates an expression over constants only; nullopt if it mentions
/// anything else (variables, unbound constants) or divides by zero.
std::optional<double> evaluate_constant_expr(const Expr& expr, const ConstantValues& constants);

/// Returns a copy of `model` in which each named constant is given the
/// supplied value. Already-bound constants are overridden. Throws
/// UnknownConstant for names that are not constants and KindMismatch when a
/// non-integral value is bound to an `int` constant.
Model bind_constants(const Model& model, const std::map<std::string, double>& bindings);

} // namespace parley::prism
