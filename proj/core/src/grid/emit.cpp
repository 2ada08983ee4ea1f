#include "parley/grid/emit.hpp"

#include <map>

#include <fmt/format.h>

namespace parley::grid {

using prism::Expr;
using prism::ExprKind;

namespace {

Expr id(const char* name) { return Expr::ident(name); }
Expr num(int v) { return Expr::integer(v); }
Expr add(Expr a, Expr b) { return Expr::binary(ExprKind::Add, std::move(a), std::move(b)); }
Expr sub(Expr a, Expr b) { return Expr::binary(ExprKind::Sub, std::move(a), std::move(b)); }

// x'=min(x+1,N) / x'=max(x-1,0) for a move of `m` on variables (vx, vy).
prism::Assignment step(Move m, const char* vx, const char* vy) {
    switch (m) {
        case Move::East: return {vx, Expr::call(ExprKind::Min, {add(id(vx), num(1)), id("N")}), {}};
        case Move::West: return {vx, Expr::call(ExprKind::Max, {sub(id(vx), num(1)), num(0)}), {}};
        case Move::North: return {vy, Expr::call(ExprKind::Min, {add(id(vy), num(1)), id("N")}), {}};
        case Move::South: return {vy, Expr::call(ExprKind::Max, {sub(id(vy), num(1)), num(0)}), {}};
    }
    return {};
}

// intended, the two perpendicular directions, then the opposite one
std::vector<Move> outcomes(Move m) {
    switch (m) {
        case Move::East: return {Move::East, Move::North, Move::South, Move::West};
        case Move::West: return {Move::West, Move::North, Move::South, Move::East};
        case Move::North: return {Move::North, Move::East, Move::West, Move::South};
        case Move::South: return {Move::South, Move::East, Move::West, Move::North};
    }
    return {};
}

Expr at(const char* vx, const char* vy, Cell c) {
    return prism::eq(id(vx), num(c.x)) && prism::eq(id(vy), num(c.y));
}

Expr crash_expr(const GridMap& map) {
    std::optional<Expr> out;
    for (int x = 0; x < map.n; ++x) {
        std::optional<Expr> col;
        for (int y = 0; y < map.n; ++y) {
            if (!map.is_obstacle(x, y)) continue;
            Expr e = prism::eq(id("y"), num(y));
            col = col ? Expr::binary(ExprKind::Or, std::move(*col), std::move(e)) : std::move(e);
        }
        if (!col) continue;
        Expr term = prism::eq(id("x"), num(x)) && std::move(*col);
        out = out ? Expr::binary(ExprKind::Or, std::move(*out), std::move(term)) : std::move(term);
    }
    return out ? std::move(*out) : Expr::boolean(false);
}

prism::Command command(const std::string& action, Expr guard, std::vector<prism::Update> updates) {
    prism::Command c;
    c.action = action;
    c.guard = std::move(guard);
    c.updates = std::move(updates);
    return c;
}

prism::Update update(std::vector<prism::Assignment> as, std::optional<Expr> prob = std::nullopt) {
    prism::Update u;
    u.probability = std::move(prob);
    u.assignments = std::move(as);
    return u;
}

} // namespace

void validate(const RobotModelCfg& cfg) {
    if (!(cfg.p >= 0.0) || !(3.0 * cfg.p < 1.0)) throw InputError(fmt::format("deviation probability {} needs 0 <= 3p < 1", cfg.p));
    if (cfg.move_cost < 0.0 || cfg.localisation_cost < 0.0) throw InputError("costs must be non-negative");
    if (cfg.c_max < 0) throw InputError("c_max must be positive");
}

prism::Model emit_model(const GridMap& map, const MovementPolicy& controller, const RobotModelCfg& cfg) {
    validate(cfg);
    validate(map);
    const int c_max = cfg.c_max > 0 ? cfg.c_max : map.n;
    if (cfg.c < 1 || cfg.c > c_max) throw InputError(fmt::format("c={} outside [1..{}]", cfg.c, c_max));
    if (controller.n != map.n) throw InputError("controller and map sizes differ");

    prism::Model m;
    m.constants.push_back({"N", prism::ConstKind::Int, num(map.n - 1), {}});
    m.constants.push_back({"p", prism::ConstKind::Double, Expr::real(cfg.p), {}});

    // moves the controller actually issues, in a fixed order
    std::vector<Move> used;
    for (Move mv : {Move::East, Move::North, Move::West, Move::South}) {
        for (const auto& cm : controller.moves) {
            if (cm == mv) {
                used.push_back(mv);
                break;
            }
        }
    }
    if (used.empty()) throw InputError("controller issues no moves");

    const Expr crash = crash_expr(map);
    const Expr p = id("p");
    prism::ModuleDef robot;
    robot.name = "Robot";
    robot.variables.push_back({"x", prism::VarKind::Int, num(0), id("N"), num(map.start.x), {}});
    robot.variables.push_back({"y", prism::VarKind::Int, num(0), id("N"), num(map.start.y), {}});
    for (Move mv : used) {
        auto outs = outcomes(mv);
        std::vector<prism::Update> ups;
        ups.push_back(update({step(outs[0], "x", "y")},
                             sub(num(1), Expr::binary(ExprKind::Mul, num(3), p))));
        for (std::size_t k = 1; k < outs.size(); ++k) ups.push_back(update({step(outs[k], "x", "y")}, p));
        robot.commands.push_back(command(move_label(mv), !Expr(crash), std::move(ups)));
    }

    prism::ModuleDef mape;
    mape.name = "Adaptation_MAPE_Controller";
    for (int y = 0; y < map.n; ++y) {
        for (int x = 0; x < map.n; ++x) {
            auto mv = controller.at(x, y);
            if (!mv) continue;
            mape.commands.push_back(command(move_label(*mv), at("xhat", "yhat", {x, y}), {update({})}));
        }
    }

    m.constants.push_back({"c", prism::ConstKind::Int, num(cfg.c), {}});
    prism::ModuleDef know;
    know.name = "Knowledge";
    know.variables.push_back({"xhat", prism::VarKind::Int, num(0), id("N"), num(map.start.x), {}});
    know.variables.push_back({"yhat", prism::VarKind::Int, num(0), id("N"), num(map.start.y), {}});
    know.variables.push_back({"step", prism::VarKind::Int, num(1), num(c_max), num(1), {}});
    know.variables.push_back({"ready", prism::VarKind::Bool, std::nullopt, std::nullopt, Expr::boolean(true), {}});
    for (Move mv : used) {
        know.commands.push_back(command(move_label(mv), id("ready"),
                                        {update({step(mv, "xhat", "yhat"), {"ready", Expr::boolean(false), {}}})}));
    }
    know.commands.push_back(command(
        "localisation", Expr::binary(ExprKind::Ge, id("step"), id("c")) && !id("ready"),
        {update({{"xhat", id("x"), {}}, {"yhat", id("y"), {}}, {"step", num(1), {}}, {"ready", Expr::boolean(true), {}}})}));
    know.commands.push_back(command("skip", Expr::binary(ExprKind::Lt, id("step"), id("c")) && !id("ready"),
                                    {update({{"step", add(id("step"), num(1)), {}}, {"ready", Expr::boolean(true), {}}})}));
    know.commands.push_back(command("confirm",
                                    at("xhat", "yhat", map.destination) && id("ready") && !at("x", "y", map.destination),
                                    {update({{"xhat", id("x"), {}}, {"yhat", id("y"), {}}, {"step", num(1), {}}})}));

    m.modules = {std::move(robot), std::move(mape), std::move(know)};

    Expr goal = at("x", "y", map.destination) && at("xhat", "yhat", map.destination) && id("ready");
    m.labels.push_back({"goal", goal, {}});
    m.labels.push_back({"crash", crash, {}});
    m.labels.push_back({"done", Expr::binary(ExprKind::Or, goal, crash), {}});

    prism::RewardStruct cost;
    cost.name = "cost";
    for (Move mv : used) cost.items.push_back({move_label(mv), Expr::boolean(true), Expr::real(cfg.move_cost), {}});
    cost.items.push_back({"localisation", Expr::boolean(true), Expr::real(cfg.localisation_cost), {}});
    m.rewards.push_back(std::move(cost));
    return m;
}

urc::AugmentSpec robot_augment_spec(const prism::Model& robot_model, int c_max) {
    urc::AugmentSpec spec;
    auto actions = robot_model.action_labels();
    for (const char* mv : {"east", "north", "west", "south"}) {
        if (std::find(actions.begin(), actions.end(), mv) != actions.end()) spec.pre_labels.emplace_back(mv);
    }
    spec.post_labels = {"localisation", "skip"};
    spec.decision_vars = {"xhat", "yhat"};
    spec.controlled_constant = "c";
    spec.c_min = 1;
    spec.c_max = c_max;
    spec.ground_truth_modules = {"Robot"};
    return spec;
}

} // namespace parley::grid
