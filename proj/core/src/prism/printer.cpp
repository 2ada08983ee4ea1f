#include "parley/prism/printer.hpp"

#include <fmt/format.h>

namespace parley::prism {

namespace {

int precedence(const Expr& e) {
    switch (e.kind) {
        case ExprKind::Or: return 1;
        case ExprKind::And: return 2;
        case ExprKind::Not: return 3;
        case ExprKind::Lt:
        case ExprKind::Le:
        case ExprKind::Gt:
        case ExprKind::Ge:
        case ExprKind::Eq:
        case ExprKind::Ne: return 4;
        case ExprKind::Add:
        case ExprKind::Sub: return 5;
        case ExprKind::Mul:
        case ExprKind::Div: return 6;
        case ExprKind::Neg: return 7;
        default: return 8;
    }
}

const char* op_text(ExprKind kind) {
    switch (kind) {
        case ExprKind::Or: return " | ";
        case ExprKind::And: return " & ";
        case ExprKind::Lt: return "<";
        case ExprKind::Le: return "<=";
        case ExprKind::Gt: return ">";
        case ExprKind::Ge: return ">=";
        case ExprKind::Eq: return "=";
        case ExprKind::Ne: return "!=";
        case ExprKind::Add: return "+";
        case ExprKind::Sub: return "-";
        case ExprKind::Mul: return "*";
        case ExprKind::Div: return "/";
        default: return "?";
    }
}

void emit(std::string& out, const Expr& e, int min_prec);

void emit_child(std::string& out, const Expr& e, int min_prec) {
    if (precedence(e) < min_prec) {
        out += '(';
        emit(out, e, 0);
        out += ')';
    } else {
        emit(out, e, min_prec);
    }
}

void emit(std::string& out, const Expr& e, int /*min_prec*/) {
    switch (e.kind) {
        case ExprKind::IntLit: out += fmt::format("{}", e.int_value); return;
        case ExprKind::DoubleLit: out += format_double(e.double_value); return;
        case ExprKind::BoolLit: out += e.bool_value ? "true" : "false"; return;
        case ExprKind::Ident: out += e.name; return;
        case ExprKind::Not:
            out += '!';
            emit_child(out, e.args[0], 3);
            return;
        case ExprKind::Neg:
            out += '-';
            // A literal or another minus directly after '-' would fold or lex as '--'.
            if (e.args[0].is_literal() || e.args[0].kind == ExprKind::Neg) {
                out += '(';
                emit(out, e.args[0], 0);
                out += ')';
            } else {
                emit_child(out, e.args[0], 7);
            }
            return;
        case ExprKind::Min:
        case ExprKind::Max: {
            out += e.kind == ExprKind::Min ? "min(" : "max(";
            for (std::size_t i = 0; i < e.args.size(); ++i) {
                if (i) out += ", ";
                emit(out, e.args[i], 0);
            }
            out += ')';
            return;
        }
        default: {
            int p = precedence(e);
            bool relational = p == 4;
            emit_child(out, e.args[0], relational ? p + 1 : p);
            out += op_text(e.kind);
            emit_child(out, e.args[1], p + 1);
            return;
        }
    }
}

void emit_update(std::string& out, const Update& u, bool with_probability) {
    if (with_probability && u.probability) {
        emit(out, *u.probability, 0);
        out += ':';
    }
    if (u.assignments.empty()) {
        out += "true";
        return;
    }
    for (std::size_t i = 0; i < u.assignments.size(); ++i) {
        if (i) out += " & ";
        out += fmt::format("({}'=", u.assignments[i].variable);
        emit(out, u.assignments[i].value, 0);
        out += ')';
    }
}

} // namespace

std::string format_double(double value) {
    std::string s = fmt::format("{}", value);
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
}

std::string print(const Expr& expr) {
    std::string out;
    emit(out, expr, 0);
    return out;
}

std::string print(const Model& model) {
    std::string out = model.model_kind + "\n";
    if (!model.constants.empty()) out += '\n';
    for (const auto& c : model.constants) {
        out += fmt::format("const {} {}", c.kind == ConstKind::Int ? "int" : "double", c.name);
        if (c.value) out += " = " + print(*c.value);
        out += ";\n";
    }
    for (const auto& m : model.modules) {
        out += fmt::format("\nmodule {}\n", m.name);
        for (const auto& v : m.variables) {
            out += fmt::format("  {} : ", v.name);
            if (v.kind == VarKind::Bool) {
                out += "bool";
            } else {
                out += fmt::format("[{}..{}]", print(*v.low), print(*v.high));
            }
            if (v.init) out += " init " + print(*v.init);
            out += ";\n";
        }
        if (!m.variables.empty() && !m.commands.empty()) out += '\n';
        for (const auto& c : m.commands) {
            out += fmt::format("  [{}] {} -> ", c.action, print(c.guard));
            bool with_prob = c.updates.size() > 1 || (c.updates.size() == 1 && c.updates[0].probability);
            for (std::size_t i = 0; i < c.updates.size(); ++i) {
                if (i) out += " + ";
                emit_update(out, c.updates[i], with_prob);
            }
            out += ";\n";
        }
        out += "endmodule\n";
    }
    if (!model.labels.empty()) out += '\n';
    for (const auto& l : model.labels) {
        out += fmt::format("label \"{}\" = {};\n", l.name, print(l.expr));
    }
    for (const auto& r : model.rewards) {
        out += fmt::format("\nrewards \"{}\"\n", r.name);
        for (const auto& item : r.items) {
            out += fmt::format("  [{}] {} : {};\n", item.action, print(item.guard), print(item.value));
        }
        out += "endrewards\n";
    }
    return out;
}

} // namespace parley::prism
