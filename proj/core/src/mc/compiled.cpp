#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <fmt/format.h>

#include "compiled_impl.hpp"
#include "parley/prism/constants.hpp"
#include "parley/prism/typecheck.hpp"

namespace parley::mc {

using detail::Node;
using detail::Op;
using prism::Expr;
using prism::ExprKind;

void detail::throw_division_by_zero() { throw ModelError("division by zero during evaluation"); }

namespace {

Op binary_op(ExprKind k) {
    switch (k) {
        case ExprKind::Add: return Op::Add;
        case ExprKind::Sub: return Op::Sub;
        case ExprKind::Mul: return Op::Mul;
        case ExprKind::Div: return Op::Div;
        case ExprKind::Lt: return Op::Lt;
        case ExprKind::Le: return Op::Le;
        case ExprKind::Gt: return Op::Gt;
        case ExprKind::Ge: return Op::Ge;
        case ExprKind::Eq: return Op::Eq;
        case ExprKind::Ne: return Op::Ne;
        case ExprKind::And: return Op::And;
        case ExprKind::Or: return Op::Or;
        case ExprKind::Min: return Op::Min;
        case ExprKind::Max: return Op::Max;
        default: return Op::Lit;
    }
}

class Compiler {
public:
    Compiler(const prism::Model& model, CompiledModel::Impl& out)
        : model_(model), out_(out), values_(prism::evaluate_constants(model)) {}

    void run() {
        if (model_.model_kind != "dtmc") throw ModelError(fmt::format("unsupported model type '{}'", model_.model_kind));
        auto diags = prism::typecheck(model_);
        if (prism::has_errors(diags)) {
            for (const auto& d : diags) {
                if (d.severity == prism::Severity::Error) throw ModelError(prism::format_diagnostic(d));
            }
        }
        out_.params = model_.unbound_constants();
        for (std::size_t i = 0; i < out_.params.size(); ++i) param_slot_[out_.params[i]] = static_cast<int>(i);

        for (std::size_t mi = 0; mi < model_.modules.size(); ++mi) {
            for (const auto& v : model_.modules[mi].variables) {
                var_index_[v.name] = static_cast<int>(out_.vars.size());
                detail::VarSpec spec;
                spec.name = v.name;
                spec.module = static_cast<int>(mi);
                spec.is_bool = v.kind == prism::VarKind::Bool;
                out_.vars.push_back(spec);
            }
        }
        std::size_t vi = 0;
        for (const auto& m : model_.modules) {
            for (const auto& v : m.variables) {
                auto& spec = out_.vars[vi++];
                if (spec.is_bool) {
                    spec.low = lit(0.0);
                    spec.high = lit(1.0);
                    spec.init = v.init ? compile_const_only(*v.init, v.name) : lit(0.0);
                } else {
                    spec.low = compile_const_only(*v.low, v.name);
                    spec.high = compile_const_only(*v.high, v.name);
                    spec.init = v.init ? compile_const_only(*v.init, v.name) : spec.low;
                }
            }
        }

        for (const auto& a : model_.action_labels()) action_id(a);
        out_.action_modules.assign(out_.action_names.size(), {});
        for (std::size_t mi = 0; mi < model_.modules.size(); ++mi) {
            const auto& m = model_.modules[mi];
            detail::ModuleSpec ms;
            ms.name = m.name;
            for (const auto& c : m.commands) {
                detail::CommandSpec cs;
                cs.action = c.action.empty() ? -1 : action_id(c.action);
                if (cs.action >= 0) {
                    auto& mods = out_.action_modules[static_cast<std::size_t>(cs.action)];
                    if (std::find(mods.begin(), mods.end(), static_cast<int>(mi)) == mods.end()) mods.push_back(static_cast<int>(mi));
                }
                cs.guard = compile(c.guard);
                cs.where = fmt::format("module {} line {}", m.name, c.pos.line);
                for (const auto& u : c.updates) {
                    detail::UpdateSpec us;
                    us.prob = u.probability ? compile(*u.probability) : lit(1.0);
                    for (const auto& a : u.assignments) {
                        us.assigns.emplace_back(static_cast<std::uint32_t>(var_index_.at(a.variable)), compile(a.value));
                    }
                    cs.updates.push_back(std::move(us));
                }
                // Statically dead commands never fire.
                if (out_.prog.is_lit(cs.guard) && out_.prog.nodes[cs.guard].value == 0.0) continue;
                ms.commands.push_back(std::move(cs));
            }
            index_module(ms);
            out_.modules.push_back(std::move(ms));
        }

        for (const auto& r : model_.rewards) {
            detail::RewardSpec rs;
            rs.name = r.name;
            for (const auto& item : r.items) {
                detail::RewardItemSpec is;
                if (item.action.empty()) {
                    is.action = -1;
                } else {
                    auto it = std::find(out_.action_names.begin(), out_.action_names.end(), item.action);
                    // Rewards on actions no command uses can never accrue.
                    if (it == out_.action_names.end()) continue;
                    is.action = static_cast<std::int32_t>(it - out_.action_names.begin());
                }
                is.guard = compile(item.guard);
                is.value = compile(item.value);
                rs.items.push_back(is);
            }
            out_.rewards.push_back(std::move(rs));
        }
        for (const auto& l : model_.labels) out_.labels.push_back({l.name, compile(l.expr)});

        for (const auto& ms : out_.modules) {
            for (const auto& c : ms.commands) {
                out_.roots.push_back(c.guard);
                for (const auto& u : c.updates) {
                    out_.roots.push_back(u.prob);
                    for (auto [v, e] : u.assigns) out_.roots.push_back(e);
                }
            }
        }
        for (const auto& r : out_.rewards) {
            for (const auto& item : r.items) {
                out_.roots.push_back(item.guard);
                out_.roots.push_back(item.value);
            }
        }
        for (const auto& l : out_.labels) out_.roots.push_back(l.expr);
        std::sort(out_.roots.begin(), out_.roots.end());
        out_.roots.erase(std::unique(out_.roots.begin(), out_.roots.end()), out_.roots.end());
    }

private:
    const prism::Model& model_;
    CompiledModel::Impl& out_;
    prism::ConstantValues values_;
    std::map<std::string, int, std::less<>> var_index_;
    std::map<std::string, int, std::less<>> param_slot_;
    std::set<std::string> expanding_;

    std::uint32_t lit(double v) {
        Node n;
        n.op = Op::Lit;
        n.value = v;
        return out_.prog.add(n);
    }

    std::int32_t action_id(const std::string& name) {
        auto it = std::find(out_.action_names.begin(), out_.action_names.end(), name);
        if (it != out_.action_names.end()) return static_cast<std::int32_t>(it - out_.action_names.begin());
        out_.action_names.push_back(name);
        return static_cast<std::int32_t>(out_.action_names.size() - 1);
    }

    std::uint32_t compile_const_only(const Expr& e, const std::string& var) {
        std::uint32_t id = compile(e);
        if (mentions_var(id)) throw ModelError(fmt::format("bounds and initial value of '{}' must not depend on variables", var));
        return id;
    }

    bool mentions_var(std::uint32_t id) const {
        const Node& n = out_.prog.nodes[id];
        switch (n.op) {
            case Op::Var: return true;
            case Op::Lit:
            case Op::Param: return false;
            case Op::Not:
            case Op::Neg: return mentions_var(n.a);
            default: return mentions_var(n.a) || mentions_var(n.b);
        }
    }

    std::uint32_t fold(const Node& n) {
        auto& prog = out_.prog;
        bool unary = n.op == Op::Not || n.op == Op::Neg;
        if (n.op == Op::And || n.op == Op::Or) {
            bool is_and = n.op == Op::And;
            for (std::uint32_t side : {n.a, n.b}) {
                if (!prog.is_lit(side)) continue;
                bool v = prog.nodes[side].value != 0.0;
                if (v != is_and) return lit(is_and ? 0.0 : 1.0);  // absorbing element
                std::uint32_t other = side == n.a ? n.b : n.a;
                return other;
            }
        }
        if (prog.is_lit(n.a) && (unary || prog.is_lit(n.b))) {
            Node tmp = n;
            prog.nodes.push_back(tmp);
            double v = prog.eval(static_cast<std::uint32_t>(prog.nodes.size() - 1), nullptr, nullptr);
            prog.nodes.pop_back();
            return lit(v);
        }
        return prog.add(n);
    }

    std::uint32_t compile(const Expr& e) {
        switch (e.kind) {
            case ExprKind::IntLit: return lit(static_cast<double>(e.int_value));
            case ExprKind::DoubleLit: return lit(e.double_value);
            case ExprKind::BoolLit: return lit(e.bool_value ? 1.0 : 0.0);
            case ExprKind::Ident: return compile_ident(e);
            case ExprKind::Not:
            case ExprKind::Neg: {
                Node n;
                n.op = e.kind == ExprKind::Not ? Op::Not : Op::Neg;
                n.a = compile(e.args[0]);
                return fold(n);
            }
            default: break;
        }
        Node n;
        n.op = binary_op(e.kind);
        n.a = compile(e.args[0]);
        for (std::size_t i = 1; i < e.args.size(); ++i) {
            n.b = compile(e.args[i]);
            if (i + 1 < e.args.size()) {
                n.a = fold(n);
            }
        }
        if (e.kind == ExprKind::Div && out_.prog.is_lit(n.b) && out_.prog.nodes[n.b].value == 0.0) {
            throw ModelError("division by zero");
        }
        return fold(n);
    }

    std::uint32_t compile_ident(const Expr& e) {
        if (auto it = var_index_.find(e.name); it != var_index_.end()) {
            Node n;
            n.op = Op::Var;
            n.ref = it->second;
            return out_.prog.add(n);
        }
        if (auto it = values_.find(e.name); it != values_.end()) return lit(it->second);
        if (auto it = param_slot_.find(e.name); it != param_slot_.end()) {
            Node n;
            n.op = Op::Param;
            n.ref = it->second;
            return out_.prog.add(n);
        }
        const prism::ConstantDecl* c = model_.find_constant(e.name);
        if (!c || !c->value) throw ModelError(fmt::format("unknown identifier '{}'", e.name));
        if (!expanding_.insert(e.name).second) throw ModelError(fmt::format("cyclic definition of constant '{}'", e.name));
        std::uint32_t id = compile(*c->value);
        expanding_.erase(e.name);
        if (c->kind == prism::ConstKind::Int && out_.prog.is_lit(id)) return lit(std::trunc(out_.prog.nodes[id].value));
        return id;
    }

    void conjuncts(std::uint32_t id, std::vector<std::uint32_t>& out) const {
        const Node& n = out_.prog.nodes[id];
        if (n.op == Op::And) {
            conjuncts(n.a, out);
            conjuncts(n.b, out);
        } else {
            out.push_back(id);
        }
    }

    // (variable, value) when the node is `var = literal`.
    std::optional<std::pair<int, std::int64_t>> var_eq(std::uint32_t id) const {
        const auto& nodes = out_.prog.nodes;
        const Node& n = nodes[id];
        if (n.op == Op::Var) {
            if (out_.vars[static_cast<std::size_t>(n.ref)].is_bool) return std::make_pair(n.ref, std::int64_t{1});
            return std::nullopt;
        }
        if (n.op == Op::Not && nodes[n.a].op == Op::Var && out_.vars[static_cast<std::size_t>(nodes[n.a].ref)].is_bool) {
            return std::make_pair(nodes[n.a].ref, std::int64_t{0});
        }
        if (n.op != Op::Eq) return std::nullopt;
        const Node& l = nodes[n.a];
        const Node& r = nodes[n.b];
        const Node* var = nullptr;
        const Node* val = nullptr;
        if (l.op == Op::Var && r.op == Op::Lit) {
            var = &l;
            val = &r;
        } else if (r.op == Op::Var && l.op == Op::Lit) {
            var = &r;
            val = &l;
        }
        if (!var || std::floor(val->value) != val->value) return std::nullopt;
        return std::make_pair(var->ref, static_cast<std::int64_t>(val->value));
    }

    void index_module(detail::ModuleSpec& ms) {
        std::vector<std::map<int, std::int64_t>> eqs(ms.commands.size());
        std::map<int, int> count;
        for (std::size_t ci = 0; ci < ms.commands.size(); ++ci) {
            std::vector<std::uint32_t> parts;
            conjuncts(ms.commands[ci].guard, parts);
            for (auto p : parts) {
                if (auto ve = var_eq(p)) {
                    if (eqs[ci].emplace(ve->first, ve->second).second) ++count[ve->first];
                }
            }
        }
        // Cost of a lookup: unindexed commands plus the largest bucket.
        int best = -1;
        std::size_t best_cost = ms.commands.size();
        for (auto [v, c] : count) {
            if (c < 2) continue;
            std::map<std::int64_t, std::size_t> buckets;
            for (const auto& m : eqs) {
                if (auto it = m.find(v); it != m.end()) ++buckets[it->second];
            }
            std::size_t largest = 0;
            for (auto [val, k] : buckets) largest = std::max(largest, k);
            std::size_t cost = ms.commands.size() - static_cast<std::size_t>(c) + largest;
            if (cost < best_cost) {
                best = v;
                best_cost = cost;
            }
        }
        if (best >= 0) {
            std::int64_t lo = INT64_MAX, hi = INT64_MIN;
            for (const auto& m : eqs) {
                if (auto it = m.find(best); it != m.end()) {
                    lo = std::min(lo, it->second);
                    hi = std::max(hi, it->second);
                }
            }
            if (hi - lo > 1'000'000) best = -1;
            else {
                ms.index_var = best;
                ms.index_min = static_cast<std::int32_t>(lo);
                ms.by_value.assign(static_cast<std::size_t>(hi - lo + 1), {});
            }
        }
        for (std::size_t ci = 0; ci < ms.commands.size(); ++ci) {
            auto it = best >= 0 ? eqs[ci].find(best) : eqs[ci].end();
            if (it == eqs[ci].end()) {
                ms.always.push_back(static_cast<std::uint32_t>(ci));
            } else {
                ms.by_value[static_cast<std::size_t>(it->second - ms.index_min)].push_back(static_cast<std::uint32_t>(ci));
            }
        }
    }
};

} // namespace

CompiledModel::CompiledModel(const prism::Model& model) {
    auto impl = std::make_shared<Impl>();
    Compiler(model, *impl).run();
    impl_ = std::move(impl);
}

const std::vector<std::string>& CompiledModel::parameters() const noexcept { return impl_->params; }

std::size_t CompiledModel::num_variables() const noexcept { return impl_->vars.size(); }

} // namespace parley::mc
