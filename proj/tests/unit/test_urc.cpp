#include <doctest.h>

#include <cmath>

#include "parley/grid/controller.hpp"
#include "parley/grid/emit.hpp"
#include "parley/grid/map.hpp"
#include "parley/mc/build.hpp"
#include "parley/mc/check.hpp"
#include "parley/prism/constants.hpp"
#include "parley/prism/parser.hpp"
#include "parley/prism/printer.hpp"
#include "parley/prism/typecheck.hpp"
#include "parley/urc/augment.hpp"
#include "../support/corpus.hpp"

using namespace parley;
using namespace parley::urc;

namespace {

prism::Model robot(int n, std::uint64_t seed, int c = 2) {
    auto map = grid::generate_map(n, seed);
    grid::RobotModelCfg cfg;
    cfg.c = c;
    return grid::emit_model(map, grid::dijkstra_controller(map), cfg);
}

const char* kTwoPhase = R"(dtmc
const int c = 2;
module Sys
  phase : [0..1] init 0;
  k : [0..3] init 0;
  flag : bool init false;
  [work] phase=0 -> 0.9:(k'=min(k+1,3)) & (phase'=1) + 0.1:(phase'=1)&(flag'=!flag);
  [rest] phase=1 & k<3 -> (phase'=0);
endmodule
module Obs
  seen : [-1..1] init 0;
  [work] true -> (seen'=min(seen+1,1));
endmodule
label "goal" = k=3;
rewards "cost"
  [work] true : c;
endrewards
)";

} // namespace

TEST_CASE("augment produces one decision parameter per estimate valuation") {
    auto m = robot(5, 3);
    auto pm = augment(m, grid::robot_augment_spec(m, 5));
    CHECK(pm.find_constant("c") == nullptr);
    CHECK(pm.find_module(kControllerModule) != nullptr);
    auto params = enumerate_params(pm);
    REQUIRE(params.size() == 25);
    CHECK(params.front() == ParamInfo{"decision_0_0", 1, 5});
    CHECK(params[1].name == "decision_0_1");
    CHECK(params[5].name == "decision_1_0");
    CHECK(params.back() == ParamInfo{"decision_4_4", 1, 5});
    CHECK_FALSE(prism::has_errors(prism::typecheck(pm)));
    CHECK(prism::parse(prism::print(pm)) == pm);
    const auto* c = pm.find_variable("c");
    REQUIRE(c != nullptr);
    CHECK(c->init->kind == prism::ExprKind::Ident);
    CHECK(c->init->name == "decision_0_0");
}

TEST_CASE("uniform policy matches the unaugmented model with the same constant") {
    auto map = grid::generate_map(5, 11);
    auto ctl = grid::dijkstra_controller(map);
    auto base = grid::emit_model(map, ctl, {});
    auto pm = augment(base, grid::robot_augment_spec(base, 5));
    mc::CompiledModel cm(pm);
    for (int k = 1; k <= 5; ++k) {
        grid::RobotModelCfg cfg;
        cfg.c = k;
        auto plain = mc::build(grid::emit_model(map, ctl, cfg));
        auto aug = mc::build(instantiate(pm, Policy(25, k)));
        CHECK(std::abs(mc::prob_reach(plain, "goal") - mc::prob_reach(aug, "goal")) <= 1e-9);
        CHECK(std::abs(mc::expected_reward(plain, "cost", "done") - mc::expected_reward(aug, "cost", "done")) <= 1e-9);
        std::vector<double> values(25, k);
        auto fast = cm.build(values);
        CHECK(fast.num_states() == aug.num_states());
        CHECK(mc::prob_reach(fast, "goal") == doctest::Approx(mc::prob_reach(aug, "goal")).epsilon(1e-12));
    }
}

TEST_CASE("augment validates its inputs") {
    auto m = robot(4, 2);
    auto spec = grid::robot_augment_spec(m, 4);

    SUBCASE("missing label") {
        auto s = spec;
        s.pre_labels.push_back("jump");
        CHECK_THROWS_AS(augment(m, s), MissingLabel);
    }
    SUBCASE("ground truth leak") {
        auto s = spec;
        s.decision_vars = {"x", "y"};
        CHECK_THROWS_AS(augment(m, s), GroundTruthLeak);
    }
    SUBCASE("empty range") {
        auto s = spec;
        s.c_min = 5;
        s.c_max = 4;
        CHECK_THROWS_AS(augment(m, s), RangeError);
    }
    SUBCASE("label in both sets") {
        auto s = spec;
        s.post_labels.push_back(s.pre_labels.front());
        CHECK_THROWS_AS(augment(m, s), InvalidSpec);
    }
    SUBCASE("unknown decision variable") {
        auto s = spec;
        s.decision_vars = {"zhat"};
        CHECK_THROWS_AS(augment(m, s), InvalidSpec);
    }
    SUBCASE("controlled constant must be bound") {
        auto s = spec;
        s.controlled_constant = "missing";
        CHECK_THROWS_AS(augment(m, s), InvalidSpec);
    }
    SUBCASE("already augmented") {
        auto pm = augment(m, spec);
        CHECK_THROWS_AS(augment(pm, spec), InvalidSpec);
    }
}

TEST_CASE("instantiate checks policy length and ranges") {
    auto m = robot(4, 5);
    auto pm = augment(m, grid::robot_augment_spec(m, 4));
    CHECK_THROWS_AS(instantiate(pm, Policy(15, 1)), LengthMismatch);
    CHECK_THROWS_AS(instantiate(pm, Policy(16, 0)), RangeError);
    CHECK_THROWS_AS(instantiate(pm, Policy(16, 5)), RangeError);
    auto bound = instantiate(pm, Policy(16, 4));
    CHECK(bound.unbound_constants().empty());
}

TEST_CASE("boolean and negative decision values") {
    auto m = prism::parse(kTwoPhase);
    AugmentSpec spec;
    spec.pre_labels = {"work"};
    spec.post_labels = {"rest"};
    spec.decision_vars = {"flag", "seen"};
    spec.c_min = 1;
    spec.c_max = 3;
    auto pm = augment(m, spec);
    auto params = enumerate_params(pm);
    REQUIRE(params.size() == 6);
    CHECK(params[0].name == "decision_0_m1");
    CHECK(params[1].name == "decision_0_0");
    CHECK(params[2].name == "decision_0_1");
    CHECK(params[3].name == "decision_1_m1");
    CHECK(params[5].name == "decision_1_1");
    CHECK(value_token(-3) == "m3");
    CHECK(value_token(7) == "7");
    CHECK(prism::print(pm).find("turn=2 & !flag & seen=-1") != std::string::npos);
    CHECK(prism::parse(prism::print(pm)) == pm);
    for (int k = 1; k <= 3; ++k) {
        auto plain = mc::build(prism::bind_constants(m, {{"c", k}}), {{"goal"}, true});
        auto aug = mc::build(instantiate(pm, Policy(6, k)), {{"goal"}, true});
        CHECK(mc::prob_reach(aug, "goal") == doctest::Approx(mc::prob_reach(plain, "goal")).epsilon(1e-12));
        CHECK(mc::expected_reward(aug, "cost", "goal") == doctest::Approx(mc::expected_reward(plain, "cost", "goal")).epsilon(1e-12));
    }
}

TEST_CASE("enumerate_params on the hand-written controller") {
    auto m = prism::parse_file(testing::corpus_dir() + "/sync_urc.prism");
    auto params = enumerate_params(m);
    REQUIRE(params.size() == 2);
    CHECK(params[0] == ParamInfo{"decision_0", 1, 2});
    CHECK(params[1] == ParamInfo{"decision_1", 1, 2});
}
