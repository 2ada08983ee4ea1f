#include "parley/urc/augment.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <map>
#include <set>

#include <fmt/format.h>

#include "parley/prism/constants.hpp"

namespace parley::urc {

using prism::Expr;
using prism::ExprKind;
using prism::Model;

namespace {

struct DecisionVar {
    std::string name;
    bool is_bool = false;
    int low = 0;
    int high = 0;
    int init = 0;
};

bool mentions(const Expr& e, const std::string& name) {
    if (e.kind == ExprKind::Ident && e.name == name) return true;
    return std::any_of(e.args.begin(), e.args.end(), [&](const Expr& a) { return mentions(a, name); });
}

int eval_int(const Expr& e, const prism::ConstantValues& values, const std::string& what) {
    auto v = prism::evaluate_constant_expr(e, values);
    if (!v) throw InvalidSpec(fmt::format("{} must be a constant expression", what));
    return static_cast<int>(std::lround(*v));
}

Expr var_is(const DecisionVar& v, int value) {
    if (v.is_bool) return value ? Expr::ident(v.name) : !Expr::ident(v.name);
    return prism::eq(Expr::ident(v.name), Expr::integer(value));
}

} // namespace

std::string value_token(int value) { return value < 0 ? fmt::format("m{}", -static_cast<long long>(value)) : std::to_string(value); }

Model augment(const Model& model, const AugmentSpec& spec) {
    if (spec.pre_labels.empty() || spec.post_labels.empty()) throw InvalidSpec("pre and post label sets must be non-empty");
    for (const auto& l : spec.pre_labels) {
        if (std::find(spec.post_labels.begin(), spec.post_labels.end(), l) != spec.post_labels.end()) {
            throw InvalidSpec(fmt::format("label '{}' is both a pre and a post label", l));
        }
    }
    if (spec.decision_vars.empty()) throw InvalidSpec("at least one decision variable is required");
    if (spec.c_min > spec.c_max) throw RangeError(fmt::format("empty controlled range [{}..{}]", spec.c_min, spec.c_max));

    auto actions = model.action_labels();
    for (const auto* set : {&spec.pre_labels, &spec.post_labels}) {
        for (const auto& l : *set) {
            if (std::find(actions.begin(), actions.end(), l) == actions.end()) {
                throw MissingLabel(fmt::format("action label '{}' does not occur in the model", l));
            }
        }
    }

    const prism::ConstantDecl* c = model.find_constant(spec.controlled_constant);
    if (!c || !c->value || c->kind != prism::ConstKind::Int) {
        throw InvalidSpec(fmt::format("'{}' must be a bound int constant", spec.controlled_constant));
    }
    for (const auto& other : model.constants) {
        if (other.name != c->name && other.value && mentions(*other.value, c->name)) {
            throw InvalidSpec(fmt::format("constant '{}' depends on '{}'", other.name, c->name));
        }
    }
    if (model.find_module(kControllerModule)) throw InvalidSpec(fmt::format("module {} already exists", kControllerModule));
    if (model.find_variable("turn") || model.find_constant("turn")) throw InvalidSpec("name 'turn' is already in use");
    if (model.find_variable(spec.controlled_constant)) {
        throw InvalidSpec(fmt::format("variable named '{}' already exists", spec.controlled_constant));
    }

    const auto values = prism::evaluate_constants(model);
    std::vector<DecisionVar> dvars;
    std::set<std::string> seen;
    for (const auto& name : spec.decision_vars) {
        if (!seen.insert(name).second) throw InvalidSpec(fmt::format("decision variable '{}' listed twice", name));
        int mi = -1;
        const prism::VariableDecl* decl = model.find_variable(name, &mi);
        if (!decl) throw InvalidSpec(fmt::format("decision variable '{}' is not declared", name));
        const std::string& owner = model.modules[static_cast<std::size_t>(mi)].name;
        if (std::find(spec.ground_truth_modules.begin(), spec.ground_truth_modules.end(), owner) !=
            spec.ground_truth_modules.end()) {
            throw GroundTruthLeak(fmt::format("decision variable '{}' belongs to ground-truth module {}", name, owner));
        }
        DecisionVar dv;
        dv.name = name;
        dv.is_bool = decl->kind == prism::VarKind::Bool;
        if (dv.is_bool) {
            dv.low = 0;
            dv.high = 1;
            dv.init = decl->init ? eval_int(*decl->init, values, "initial value of " + name) : 0;
        } else {
            dv.low = eval_int(*decl->low, values, "lower bound of " + name);
            dv.high = eval_int(*decl->high, values, "upper bound of " + name);
            dv.init = decl->init ? eval_int(*decl->init, values, "initial value of " + name) : dv.low;
        }
        dvars.push_back(dv);
    }

    double combos = 1;
    for (const auto& dv : dvars) combos *= dv.high - dv.low + 1;
    if (combos > 1e6) throw InvalidSpec(fmt::format("{} decision parameters is too many", combos));

    Model out = model;
    auto cit = std::find_if(out.constants.begin(), out.constants.end(),
                            [&](const prism::ConstantDecl& d) { return d.name == spec.controlled_constant; });
    out.constants.erase(cit);

    auto param_name = [&](const std::vector<int>& vals) {
        std::string n = "decision";
        for (int v : vals) n += "_" + value_token(v);
        return n;
    };

    prism::ModuleDef urc;
    urc.name = kControllerModule;
    std::vector<int> init_vals;
    for (const auto& dv : dvars) init_vals.push_back(dv.init);

    prism::VariableDecl cvar;
    cvar.name = spec.controlled_constant;
    cvar.low = Expr::integer(spec.c_min);
    cvar.high = Expr::integer(spec.c_max);
    cvar.init = Expr::ident(param_name(init_vals));
    prism::VariableDecl turn;
    turn.name = "turn";
    turn.low = Expr::integer(1);
    turn.high = Expr::integer(3);
    turn.init = Expr::integer(1);
    urc.variables = {cvar, turn};

    auto turn_step = [](const std::string& label, int from, int to) {
        prism::Command cmd;
        cmd.action = label;
        cmd.guard = prism::eq(Expr::ident("turn"), Expr::integer(from));
        prism::Update u;
        u.assignments.push_back({"turn", Expr::integer(to), {}});
        cmd.updates.push_back(u);
        return cmd;
    };
    for (const auto& l : spec.pre_labels) urc.commands.push_back(turn_step(l, 1, 2));

    std::vector<int> vals(dvars.size());
    for (std::size_t i = 0; i < dvars.size(); ++i) vals[i] = dvars[i].low;
    std::vector<prism::ConstantDecl> params;
    while (true) {
        std::string pname = param_name(vals);
        if (model.find_constant(pname) || model.find_variable(pname)) {
            throw InvalidSpec(fmt::format("name '{}' is already in use", pname));
        }
        params.push_back({pname, prism::ConstKind::Int, std::nullopt, {}});

        prism::Command cmd;
        cmd.guard = prism::eq(Expr::ident("turn"), Expr::integer(2));
        for (std::size_t i = 0; i < dvars.size(); ++i) cmd.guard = cmd.guard && var_is(dvars[i], vals[i]);
        prism::Update u;
        u.assignments.push_back({spec.controlled_constant, Expr::ident(pname), {}});
        u.assignments.push_back({"turn", Expr::integer(3), {}});
        cmd.updates.push_back(u);
        urc.commands.push_back(cmd);

        std::size_t k = dvars.size();
        while (k > 0) {
            --k;
            if (vals[k] < dvars[k].high) {
                ++vals[k];
                break;
            }
            vals[k] = dvars[k].low;
            if (k == 0) {
                k = SIZE_MAX;
                break;
            }
        }
        if (k == SIZE_MAX) break;
    }
    for (const auto& l : spec.post_labels) urc.commands.push_back(turn_step(l, 3, 1));

    out.constants.insert(out.constants.end(), params.begin(), params.end());
    out.modules.push_back(std::move(urc));
    return out;
}

std::vector<ParamInfo> enumerate_params(const Model& model) {
    const auto values = prism::evaluate_constants(model);
    std::map<std::string, std::pair<int, int>> range;
    auto note = [&](const std::string& param, const prism::VariableDecl& v) {
        if (range.count(param)) return;
        if (v.kind == prism::VarKind::Bool) {
            range[param] = {0, 1};
            return;
        }
        auto lo = prism::evaluate_constant_expr(*v.low, values);
        auto hi = prism::evaluate_constant_expr(*v.high, values);
        if (lo && hi) range[param] = {static_cast<int>(*lo), static_cast<int>(*hi)};
    };
    for (const auto& m : model.modules) {
        for (const auto& v : m.variables) {
            if (v.init && v.init->kind == ExprKind::Ident) note(v.init->name, v);
        }
        for (const auto& cmd : m.commands) {
            for (const auto& u : cmd.updates) {
                for (const auto& a : u.assignments) {
                    if (a.value.kind != ExprKind::Ident) continue;
                    if (const auto* v = model.find_variable(a.variable)) note(a.value.name, *v);
                }
            }
        }
    }
    std::vector<ParamInfo> out;
    for (const auto& name : model.unbound_constants()) {
        auto it = range.find(name);
        if (it == range.end()) {
            out.push_back({name, INT_MIN, INT_MAX});
        } else {
            out.push_back({name, it->second.first, it->second.second});
        }
    }
    return out;
}

Model instantiate(const Model& model, const Policy& policy) {
    auto params = enumerate_params(model);
    if (params.size() != policy.size()) {
        throw LengthMismatch(fmt::format("policy has {} entries but the model has {} parameters", policy.size(), params.size()));
    }
    std::map<std::string, double> bindings;
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (policy[i] < params[i].low || policy[i] > params[i].high) {
            throw RangeError(fmt::format("value {} for {} outside [{}..{}]", policy[i], params[i].name, params[i].low, params[i].high));
        }
        bindings[params[i].name] = policy[i];
    }
    return prism::bind_constants(model, bindings);
}

} // namespace parley::urc
