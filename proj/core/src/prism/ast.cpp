#include "parley/prism/ast.hpp"

#include <algorithm>
#include <utility>

namespace parley::prism {

Expr Expr::integer(std::int64_t v, SourcePos pos) {
    Expr e;
    e.kind = ExprKind::IntLit;
    e.int_value = v;
    e.pos = pos;
    return e;
}

Expr Expr::real(double v, SourcePos pos) {
    Expr e;
    e.kind = ExprKind::DoubleLit;
    e.double_value = v;
    e.pos = pos;
    return e;
}

Expr Expr::boolean(bool v, SourcePos pos) {
    Expr e;
    e.kind = ExprKind::BoolLit;
    e.bool_value = v;
    e.pos = pos;
    return e;
}

Expr Expr::ident(std::string name, SourcePos pos) {
    Expr e;
    e.kind = ExprKind::Ident;
    e.name = std::move(name);
    e.pos = pos;
    return e;
}

Expr Expr::unary(ExprKind kind, Expr operand, SourcePos pos) {
    Expr e;
    e.kind = kind;
    e.args.push_back(std::move(operand));
    e.pos = pos;
    return e;
}

Expr Expr::binary(ExprKind kind, Expr lhs, Expr rhs, SourcePos pos) {
    Expr e;
    e.kind = kind;
    e.args.reserve(2);
    e.args.push_back(std::move(lhs));
    e.args.push_back(std::move(rhs));
    e.pos = pos;
    return e;
}

Expr Expr::call(ExprKind kind, std::vector<Expr> args, SourcePos pos) {
    Expr e;
    e.kind = kind;
    e.args = std::move(args);
    e.pos = pos;
    return e;
}

Expr operator&&(Expr lhs, Expr rhs) {
    if (lhs.kind == ExprKind::BoolLit && lhs.bool_value) return rhs;
    if (rhs.kind == ExprKind::BoolLit && rhs.bool_value) return lhs;
    return Expr::binary(ExprKind::And, std::move(lhs), std::move(rhs));
}

Expr operator||(Expr lhs, Expr rhs) {
    if (lhs.kind == ExprKind::BoolLit && !lhs.bool_value) return rhs;
    if (rhs.kind == ExprKind::BoolLit && !rhs.bool_value) return lhs;
    return Expr::binary(ExprKind::Or, std::move(lhs), std::move(rhs));
}

Expr operator!(Expr operand) { return Expr::unary(ExprKind::Not, std::move(operand)); }

Expr eq(Expr lhs, Expr rhs) { return Expr::binary(ExprKind::Eq, std::move(lhs), std::move(rhs)); }

const ConstantDecl* Model::find_constant(std::string_view name) const {
    auto it = std::find_if(constants.begin(), constants.end(), [&](const auto& c) { return c.name == name; });
    return it == constants.end() ? nullptr : &*it;
}

ConstantDecl* Model::find_constant(std::string_view name) {
    auto it = std::find_if(constants.begin(), constants.end(), [&](const auto& c) { return c.name == name; });
    return it == constants.end() ? nullptr : &*it;
}

const ModuleDef* Model::find_module(std::string_view name) const {
    auto it = std::find_if(modules.begin(), modules.end(), [&](const auto& m) { return m.name == name; });
    return it == modules.end() ? nullptr : &*it;
}

const VariableDecl* Model::find_variable(std::string_view name, int* module_index) const {
    for (std::size_t m = 0; m < modules.size(); ++m) {
        for (const auto& v : modules[m].variables) {
            if (v.name == name) {
                if (module_index) *module_index = static_cast<int>(m);
                return &v;
            }
        }
    }
    return nullptr;
}

std::vector<std::string> Model::unbound_constants() const {
    std::vector<std::string> out;
    for (const auto& c : constants) {
        if (!c.value) out.push_back(c.name);
    }
    return out;
}

std::vector<std::string> Model::action_labels() const {
    std::vector<std::string> out;
    for (const auto& m : modules) {
        for (const auto& c : m.commands) {
            if (!c.action.empty() && std::find(out.begin(), out.end(), c.action) == out.end()) {
                out.push_back(c.action);
            }
        }
    }
    return out;
}

} // namespace parley::prism
