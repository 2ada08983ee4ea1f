#include "parley/prism/constants.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

namespace parley::prism {

UnknownConstant::UnknownConstant(const std::string& name)
    : ModelError(fmt::format("unknown constant '{}'", name)), name_(name) {}

namespace {

std::optional<double> eval(const Expr& e, const ConstantValues& values) {
    auto arg = [&](std::size_t i) { return eval(e.args[i], values); };
    switch (e.kind) {
        case ExprKind::IntLit: return static_cast<double>(e.int_value);
        case ExprKind::DoubleLit: return e.double_value;
        case ExprKind::BoolLit: return e.bool_value ? 1.0 : 0.0;
        case ExprKind::Ident: {
            auto it = values.find(e.name);
            if (it == values.end()) return std::nullopt;
            return it->second;
        }
        case ExprKind::Not: {
            auto a = arg(0);
            if (!a) return std::nullopt;
            return *a != 0.0 ? 0.0 : 1.0;
        }
        case ExprKind::Neg: {
            auto a = arg(0);
            if (!a) return std::nullopt;
            return -*a;
        }
        case ExprKind::Min:
        case ExprKind::Max: {
            std::optional<double> acc;
            for (std::size_t i = 0; i < e.args.size(); ++i) {
                auto a = arg(i);
                if (!a) return std::nullopt;
                if (!acc) {
                    acc = a;
                } else {
                    acc = e.kind == ExprKind::Min ? std::min(*acc, *a) : std::max(*acc, *a);
                }
            }
            return acc;
        }
        default: break;
    }
    auto a = arg(0);
    auto b = arg(1);
    if (!a || !b) return std::nullopt;
    switch (e.kind) {
        case ExprKind::Add: return *a + *b;
        case ExprKind::Sub: return *a - *b;
        case ExprKind::Mul: return *a * *b;
        case ExprKind::Div:
            if (*b == 0.0) return std::nullopt;
            return *a / *b;
        case ExprKind::Lt: return *a < *b ? 1.0 : 0.0;
        case ExprKind::Le: return *a <= *b ? 1.0 : 0.0;
        case ExprKind::Gt: return *a > *b ? 1.0 : 0.0;
        case ExprKind::Ge: return *a >= *b ? 1.0 : 0.0;
        case ExprKind::Eq: return *a == *b ? 1.0 : 0.0;
        case ExprKind::Ne: return *a != *b ? 1.0 : 0.0;
        case ExprKind::And: return (*a != 0.0 && *b != 0.0) ? 1.0 : 0.0;
        case ExprKind::Or: return (*a != 0.0 || *b != 0.0) ? 1.0 : 0.0;
        default: return std::nullopt;
    }
}

} // namespace

std::optional<double> evaluate_constant_expr(const Expr& expr, const ConstantValues& constants) {
    return eval(expr, constants);
}

ConstantValues evaluate_constants(const Model& model) {
    ConstantValues values;
    // Fixed-point over declaration order; constants may refer to later ones.
    bool progress = true;
    std::set<std::string> done;
    while (progress) {
        progress = false;
        for (const auto& c : model.constants) {
            if (!c.value || done.count(c.name)) continue;
            auto v = eval(*c.value, values);
            if (!v) continue;
            if (c.kind == ConstKind::Int) v = std::trunc(*v);
            values[c.name] = *v;
            done.insert(c.name);
            progress = true;
        }
    }
    return values;
}

Model bind_constants(const Model& model, const std::map<std::string, double>& bindings) {
    Model out = model;
    for (const auto& [name, value] : bindings) {
        ConstantDecl* decl = out.find_constant(name);
        if (!decl) throw UnknownConstant(name);
        if (decl->kind == ConstKind::Int) {
            if (!std::isfinite(value) || std::floor(value) != value) {
                throw KindMismatch(fmt::format("constant '{}' is int but bound to {}", name, value));
            }
            decl->value = Expr::integer(static_cast<std::int64_t>(value));
        } else {
            decl->value = Expr::real(value);
        }
    }
    return out;
}

} // namespace parley::prism
