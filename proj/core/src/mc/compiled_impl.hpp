#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "parley/mc/build.hpp"

namespace parley::mc {

namespace detail {

enum class Op : std::uint8_t { Lit, Var, Param, Not, Neg, Add, Sub, Mul, Div, Lt, Le, Gt, Ge, Eq, Ne, And, Or, Min, Max };

struct Node {
    Op op = Op::Lit;
    std::uint32_t a = 0;
    std::uint32_t b = 0;
    std::int32_t ref = 0;  // Var index or Param slot
    double value = 0.0;
};

struct Program {
    std::vector<Node> nodes;
    std::map<std::tuple<Op, std::uint32_t, std::uint32_t, std::int32_t, double>, std::uint32_t> interned;

    // Structurally identical nodes share one id.
    std::uint32_t add(const Node& n) {
        auto key = std::make_tuple(n.op, n.a, n.b, n.ref, n.value);
        if (auto it = interned.find(key); it != interned.end()) return it->second;
        nodes.push_back(n);
        auto id = static_cast<std::uint32_t>(nodes.size() - 1);
        interned.emplace(key, id);
        return id;
    }
    [[nodiscard]] bool is_lit(std::uint32_t i) const { return nodes[i].op == Op::Lit; }
    [[nodiscard]] double eval(std::uint32_t root, const std::int32_t* state, const double* params) const {
        return eval_with(root, state, params, [](std::uint32_t, const std::int32_t*, double&) { return false; });
    }

    // `hook(id, state, value)` may answer a node before it is evaluated.
    template <class Hook>
    double eval_with(std::uint32_t root, const std::int32_t* state, const double* params, const Hook& hook) const;
};

[[noreturn]] void throw_division_by_zero();

template <class Hook>
double Program::eval_with(std::uint32_t root, const std::int32_t* state, const double* params, const Hook& hook) const {
    double hv;
    if (hook(root, state, hv)) return hv;
    const Node& n = nodes[root];
    auto sub = [&](std::uint32_t i) { return eval_with(i, state, params, hook); };
    switch (n.op) {
        case Op::Lit: return n.value;
        case Op::Var: return static_cast<double>(state[n.ref]);
        case Op::Param: return params[n.ref];
        case Op::Not: return sub(n.a) != 0.0 ? 0.0 : 1.0;
        case Op::Neg: return -sub(n.a);
        case Op::And: return (sub(n.a) != 0.0 && sub(n.b) != 0.0) ? 1.0 : 0.0;
        case Op::Or: return (sub(n.a) != 0.0 || sub(n.b) != 0.0) ? 1.0 : 0.0;
        default: break;
    }
    const double x = sub(n.a);
    const double y = sub(n.b);
    switch (n.op) {
        case Op::Add: return x + y;
        case Op::Sub: return x - y;
        case Op::Mul: return x * y;
        case Op::Div:
            if (y == 0.0) throw_division_by_zero();
            return x / y;
        case Op::Lt: return x < y ? 1.0 : 0.0;
        case Op::Le: return x <= y ? 1.0 : 0.0;
        case Op::Gt: return x > y ? 1.0 : 0.0;
        case Op::Ge: return x >= y ? 1.0 : 0.0;
        case Op::Eq: return x == y ? 1.0 : 0.0;
        case Op::Ne: return x != y ? 1.0 : 0.0;
        case Op::Min: return x < y ? x : y;
        case Op::Max: return x < y ? y : x;
        default: return 0.0;
    }
}

struct VarSpec {
    std::string name;
    int module = 0;
    bool is_bool = false;
    std::uint32_t low = 0;
    std::uint32_t high = 0;
    std::uint32_t init = 0;
};

struct UpdateSpec {
    std::uint32_t prob = 0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> assigns;  // (variable, expr)
};

struct CommandSpec {
    std::int32_t action = -1;  // -1: private
    std::uint32_t guard = 0;
    std::vector<UpdateSpec> updates;
    std::string where;
};

struct ModuleSpec {
    std::string name;
    std::vector<CommandSpec> commands;
    std::int32_t index_var = -1;
    std::int32_t index_min = 0;
    std::vector<std::vector<std::uint32_t>> by_value;
    std::vector<std::uint32_t> always;
};

struct RewardItemSpec {
    std::int32_t action = -1;
    std::uint32_t guard = 0;
    std::uint32_t value = 0;
};

struct RewardSpec {
    std::string name;
    std::vector<RewardItemSpec> items;
};

struct LabelSpec {
    std::string name;
    std::uint32_t expr = 0;
};

} // namespace detail

struct CompiledModel::Impl {
    detail::Program prog;
    std::vector<std::string> params;
    std::vector<detail::VarSpec> vars;
    std::vector<detail::ModuleSpec> modules;
    std::vector<std::string> action_names;
    std::vector<std::vector<int>> action_modules;  // modules that declare each action
    std::vector<detail::RewardSpec> rewards;
    std::vector<detail::LabelSpec> labels;
    std::vector<std::uint32_t> roots;  // every expression the explorer evaluates
};

} // namespace parley::mc
