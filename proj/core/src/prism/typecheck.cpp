#include "parley/prism/typecheck.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

#include <fmt/format.h>

#include "parley/prism/constants.hpp"

namespace parley::prism {

namespace {

enum class Ty { Int, Double, Bool, Bad };

const char* ty_name(Ty t) {
    switch (t) {
        case Ty::Int: return "int";
        case Ty::Double: return "double";
        case Ty::Bool: return "bool";
        case Ty::Bad: break;
    }
    return "<error>";
}

bool numeric(Ty t) { return t == Ty::Int || t == Ty::Double; }

struct VarInfo {
    VarKind kind;
    int module;
    std::optional<double> low, high;
};

class Checker {
public:
    explicit Checker(const Model& m) : model_(m), consts_(evaluate_constants(m)) {}

    std::vector<Diagnostic> run() {
        if (model_.model_kind != "dtmc") {
            error({1, 1}, fmt::format("model type '{}' is not supported", model_.model_kind));
        }
        if (model_.modules.empty()) error({1, 1}, "model declares no modules");
        collect_names();
        for (const auto& c : model_.constants) check_constant(c);
        for (std::size_t mi = 0; mi < model_.modules.size(); ++mi) check_module(model_.modules[mi], static_cast<int>(mi));
        for (const auto& l : model_.labels) {
            Ty t = type_of(l.expr);
            if (t != Ty::Bad && t != Ty::Bool) error(l.pos, fmt::format("label \"{}\" must be boolean, found {}", l.name, ty_name(t)));
        }
        check_rewards();
        std::stable_sort(diags_.begin(), diags_.end(), [](const Diagnostic& a, const Diagnostic& b) {
            return std::tie(a.line, a.col, a.message) < std::tie(b.line, b.col, b.message);
        });
        diags_.erase(std::unique(diags_.begin(), diags_.end()), diags_.end());
        return diags_;
    }

private:
    const Model& model_;
    ConstantValues consts_;
    std::map<std::string, ConstKind> const_kinds_;
    std::map<std::string, VarInfo> vars_;
    std::vector<Diagnostic> diags_;

    void error(SourcePos p, std::string msg) { diags_.push_back({p.line, p.col, Severity::Error, std::move(msg)}); }
    void warn(SourcePos p, std::string msg) { diags_.push_back({p.line, p.col, Severity::Warning, std::move(msg)}); }

    void collect_names() {
        std::map<std::string, std::string> seen;  // name -> what
        auto claim = [&](const std::string& name, const char* what, SourcePos pos) {
            auto [it, fresh] = seen.emplace(name, what);
            if (!fresh) error(pos, fmt::format("{} '{}' clashes with {} of the same name", what, name, it->second));
            return fresh;
        };
        for (const auto& c : model_.constants) {
            if (claim(c.name, "constant", c.pos)) const_kinds_[c.name] = c.kind;
        }
        for (std::size_t mi = 0; mi < model_.modules.size(); ++mi) {
            const auto& m = model_.modules[mi];
            claim(m.name, "module", m.pos);
            for (const auto& v : m.variables) {
                if (!claim(v.name, "variable", v.pos)) continue;
                VarInfo info{v.kind, static_cast<int>(mi), {}, {}};
                if (v.kind == VarKind::Bool) {
                    info.low = 0.0;
                    info.high = 1.0;
                } else {
                    if (v.low) info.low = evaluate_constant_expr(*v.low, consts_);
                    if (v.high) info.high = evaluate_constant_expr(*v.high, consts_);
                }
                vars_[v.name] = info;
            }
        }
        std::set<std::string> labels, rewards;
        for (const auto& l : model_.labels) {
            if (!labels.insert(l.name).second) error(l.pos, fmt::format("label \"{}\" defined twice", l.name));
        }
        for (const auto& r : model_.rewards) {
            if (!rewards.insert(r.name).second) error(r.pos, fmt::format("reward structure \"{}\" defined twice", r.name));
        }
    }

    Ty type_of(const Expr& e) {
        switch (e.kind) {
            case ExprKind::IntLit: return Ty::Int;
            case ExprKind::DoubleLit: return Ty::Double;
            case ExprKind::BoolLit: return Ty::Bool;
            case ExprKind::Ident: {
                if (auto it = vars_.find(e.name); it != vars_.end()) return it->second.kind == VarKind::Bool ? Ty::Bool : Ty::Int;
                if (auto it = const_kinds_.find(e.name); it != const_kinds_.end()) return it->second == ConstKind::Int ? Ty::Int : Ty::Double;
                error(e.pos, fmt::format("unknown identifier '{}'", e.name));
                return Ty::Bad;
            }
            case ExprKind::Not: {
                Ty t = type_of(e.args[0]);
                if (t == Ty::Bad) return t;
                if (t != Ty::Bool) {
                    error(e.pos, fmt::format("operand of '!' must be bool, found {}", ty_name(t)));
                    return Ty::Bad;
                }
                return Ty::Bool;
            }
            case ExprKind::Neg: {
                Ty t = type_of(e.args[0]);
                if (t == Ty::Bad) return t;
                if (!numeric(t)) {
                    error(e.pos, "operand of unary '-' must be numeric");
                    return Ty::Bad;
                }
                return t;
            }
            case ExprKind::And:
            case ExprKind::Or: {
                Ty a = type_of(e.args[0]);
                Ty b = type_of(e.args[1]);
                if (a == Ty::Bad || b == Ty::Bad) return Ty::Bad;
                if (a != Ty::Bool || b != Ty::Bool) {
                    error(e.pos, fmt::format("operands of '{}' must be bool", e.kind == ExprKind::And ? "&" : "|"));
                    return Ty::Bad;
                }
                return Ty::Bool;
            }
            case ExprKind::Eq:
            case ExprKind::Ne: {
                Ty a = type_of(e.args[0]);
                Ty b = type_of(e.args[1]);
                if (a == Ty::Bad || b == Ty::Bad) return Ty::Bad;
                if ((a == Ty::Bool) != (b == Ty::Bool)) {
                    error(e.pos, fmt::format("cannot compare {} with {}", ty_name(a), ty_name(b)));
                    return Ty::Bad;
                }
                return Ty::Bool;
            }
            case ExprKind::Lt:
            case ExprKind::Le:
            case ExprKind::Gt:
            case ExprKind::Ge: {
                Ty a = type_of(e.args[0]);
                Ty b = type_of(e.args[1]);
                if (a == Ty::Bad || b == Ty::Bad) return Ty::Bad;
                if (!numeric(a) || !numeric(b)) {
                    error(e.pos, "relational operands must be numeric");
                    return Ty::Bad;
                }
                return Ty::Bool;
            }
            default: break;
        }
        // Add Sub Mul Div Min Max
        Ty out = Ty::Int;
        bool bad = false;
        for (const auto& a : e.args) {
            Ty t = type_of(a);
            if (t == Ty::Bad) {
                bad = true;
            } else if (!numeric(t)) {
                error(a.pos, fmt::format("arithmetic operand must be numeric, found {}", ty_name(t)));
                bad = true;
            } else if (t == Ty::Double) {
                out = Ty::Double;
            }
        }
        if (bad) return Ty::Bad;
        if (e.kind == ExprKind::Div) return Ty::Double;
        return out;
    }

    void check_constant(const ConstantDecl& c) {
        if (!c.value) {
            if (c.kind != ConstKind::Int) error(c.pos, fmt::format("unbound constant '{}' must be of kind int", c.name));
            return;
        }
        Ty t = type_of(*c.value);
        if (t == Ty::Bad) return;
        if (!numeric(t)) {
            error(c.pos, fmt::format("constant '{}' must have a numeric value", c.name));
        } else if (c.kind == ConstKind::Int && t == Ty::Double) {
            error(c.pos, fmt::format("int constant '{}' given a double value", c.name));
        }
        if (!consts_.count(c.name) && model_.find_constant(c.name) == &c) {
            // Depends on a parameter or is cyclic: warn only when cyclic-looking.
            bool mentions_unbound = false;
            for (const auto& u : model_.unbound_constants()) mentions_unbound |= mentions(*c.value, u);
            if (!mentions_unbound) error(c.pos, fmt::format("constant '{}' cannot be evaluated", c.name));
        }
    }

    static bool mentions(const Expr& e, const std::string& name) {
        if (e.kind == ExprKind::Ident && e.name == name) return true;
        return std::any_of(e.args.begin(), e.args.end(), [&](const Expr& a) { return mentions(a, name); });
    }

    void check_module(const ModuleDef& m, int mi) {
        for (const auto& v : m.variables) check_variable(v);
        for (const auto& cmd : m.commands) check_command(cmd, mi);
    }

    void check_variable(const VariableDecl& v) {
        auto bound_ty = [&](const std::optional<Expr>& b, const char* which) {
            if (!b) return;
            Ty t = type_of(*b);
            if (t != Ty::Bad && t != Ty::Int) error(b->pos, fmt::format("{} bound of '{}' must be int", which, v.name));
        };
        if (v.kind == VarKind::Int) {
            bound_ty(v.low, "lower");
            bound_ty(v.high, "upper");
            if (!v.low || !v.high) error(v.pos, fmt::format("variable '{}' needs a range", v.name));
        }
        auto it = vars_.find(v.name);
        if (it == vars_.end()) return;
        const VarInfo& info = it->second;
        if (info.low && info.high && *info.low > *info.high) {
            error(v.pos, fmt::format("variable '{}' has empty range [{}..{}]", v.name, *info.low, *info.high));
        }
        if (v.init) {
            Ty t = type_of(*v.init);
            Ty want = v.kind == VarKind::Bool ? Ty::Bool : Ty::Int;
            if (t != Ty::Bad && t != want) {
                error(v.init->pos, fmt::format("initial value of '{}' must be {}, found {}", v.name, ty_name(want), ty_name(t)));
            } else if (auto val = evaluate_constant_expr(*v.init, consts_); val && info.low && info.high) {
                if (*val < *info.low || *val > *info.high) {
                    error(v.init->pos, fmt::format("initial value {} of '{}' outside range [{}..{}]", *val, v.name, *info.low, *info.high));
                }
            }
        }
    }

    void check_command(const Command& cmd, int mi) {
        Ty g = type_of(cmd.guard);
        if (g != Ty::Bad && g != Ty::Bool) error(cmd.guard.pos, fmt::format("guard must be bool, found {}", ty_name(g)));
        if (cmd.updates.empty()) error(cmd.pos, "command has no updates");
        double psum = 0.0;
        bool all_known = true;
        for (const auto& u : cmd.updates) {
            if (!u.probability) {
                if (cmd.updates.size() > 1) {
                    error(cmd.pos, "probability missing on a branch of a multi-branch command");
                    all_known = false;
                } else {
                    psum += 1.0;
                }
            } else {
                Ty t = type_of(*u.probability);
                if (t != Ty::Bad && !numeric(t)) error(u.probability->pos, "probability must be numeric");
                auto p = evaluate_constant_expr(*u.probability, consts_);
                if (!p) {
                    all_known = false;
                } else {
                    if (*p < 0.0 || *p > 1.0) error(u.probability->pos, fmt::format("probability {} outside [0,1]", *p));
                    psum += *p;
                }
            }
            std::set<std::string> assigned;
            for (const auto& a : u.assignments) check_assignment(a, mi, assigned);
        }
        if (all_known && !cmd.updates.empty() && std::abs(psum - 1.0) > 1e-9) {
            error(cmd.pos, fmt::format("probabilities sum to {} rather than 1", psum));
        }
    }

    void check_assignment(const Assignment& a, int mi, std::set<std::string>& assigned) {
        if (!assigned.insert(a.variable).second) error(a.pos, fmt::format("variable '{}' assigned twice in one update", a.variable));
        Ty t = type_of(a.value);
        auto it = vars_.find(a.variable);
        if (it == vars_.end()) {
            error(a.pos, fmt::format("assignment to undeclared variable '{}'", a.variable));
            return;
        }
        const VarInfo& info = it->second;
        if (info.module != mi) {
            error(a.pos, fmt::format("variable '{}' belongs to module {} and cannot be assigned here", a.variable,
                                     model_.modules[info.module].name));
        }
        Ty want = info.kind == VarKind::Bool ? Ty::Bool : Ty::Int;
        if (t != Ty::Bad && t != want) {
            error(a.pos, fmt::format("'{}' is {} but assigned a {} value", a.variable, ty_name(want), ty_name(t)));
            return;
        }
        if (a.value.is_literal() || (a.value.kind == ExprKind::Ident && consts_.count(a.value.name))) {
            auto v = evaluate_constant_expr(a.value, consts_);
            if (v && info.low && info.high && (*v < *info.low || *v > *info.high)) {
                error(a.pos, fmt::format("value {} assigned to '{}' outside range [{}..{}]", *v, a.variable, *info.low, *info.high));
            }
        }
    }

    void check_rewards() {
        std::set<std::string> actions;
        for (const auto& a : model_.action_labels()) actions.insert(a);
        for (const auto& r : model_.rewards) {
            for (const auto& item : r.items) {
                Ty g = type_of(item.guard);
                if (g != Ty::Bad && g != Ty::Bool) error(item.guard.pos, "reward guard must be bool");
                Ty v = type_of(item.value);
                if (v != Ty::Bad && !numeric(v)) error(item.value.pos, "reward value must be numeric");
                if (auto val = evaluate_constant_expr(item.value, consts_); val && *val < 0.0) {
                    error(item.value.pos, fmt::format("reward value {} is negative", *val));
                }
                if (!item.action.empty() && !actions.count(item.action)) {
                    warn(item.pos, fmt::format("reward item refers to action '{}' that no command uses", item.action));
                }
            }
        }
    }
};

} // namespace

std::vector<Diagnostic> typecheck(const Model& model) { return Checker(model).run(); }

bool has_errors(const std::vector<Diagnostic>& diags) {
    return std::any_of(diags.begin(), diags.end(), [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

std::string format_diagnostic(const Diagnostic& d, const std::string& file) {
    const char* sev = d.severity == Severity::Error ? "error" : "warning";
    if (file.empty()) return fmt::format("{}:{}: {}: {}", d.line, d.col, sev, d.message);
    return fmt::format("{}:{}:{}: {}: {}", file, d.line, d.col, sev, d.message);
}

} // namespace parley::prism
