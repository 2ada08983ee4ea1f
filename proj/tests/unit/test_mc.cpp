#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "parley/mc/build.hpp"
#include "parley/mc/check.hpp"
#include "parley/mc/simulate.hpp"
#include "parley/prism/constants.hpp"
#include "parley/prism/parser.hpp"
#include "../support/corpus.hpp"

using namespace parley;
using namespace parley::mc;

namespace {

ExplicitDtmc corpus_dtmc(const std::string& name) {
    return build(prism::parse_file(testing::corpus_dir() + "/" + name));
}

ExplicitDtmc trap_chain() {
    return make_dtmc(3, 0, {{0, 1, 0.5, "a"}, {0, 2, 0.5, "a"}, {1, 1, 1.0, ""}, {2, 2, 1.0, ""}},
                     {{"goal", {1}}, {"done", {1, 2}}}, {{"cost", {1.0, 0.0, 0.0}}});
}

ExplicitDtmc geometric_chain() {
    return make_dtmc(2, 0, {{0, 1, 0.5, "a"}, {0, 0, 0.5, "a"}, {1, 1, 1.0, ""}}, {{"goal", {1}}, {"done", {1}}},
                     {{"cost", {1.0, 0.0}}});
}

// Solves (I - A) x = b restricted to `maybe` states by Gaussian elimination.
std::vector<double> solve_reach(const ExplicitDtmc& d, const std::vector<std::uint8_t>& target) {
    const std::size_t n = d.num_states();
    // states that can reach the target, by fixed point
    std::vector<std::uint8_t> reach = target;
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t s = 0; s < n; ++s) {
            if (reach[s]) continue;
            for (auto k = d.row_start[s]; k < d.row_start[s + 1]; ++k) {
                if (d.probability[k] > 0 && reach[d.column[k]]) {
                    reach[s] = 1;
                    changed = true;
                    break;
                }
            }
        }
    }
    std::vector<std::size_t> idx(n, SIZE_MAX), maybe;
    for (std::size_t s = 0; s < n; ++s) {
        if (reach[s] && !target[s]) {
            idx[s] = maybe.size();
            maybe.push_back(s);
        }
    }
    const std::size_t m = maybe.size();
    std::vector<std::vector<double>> a(m, std::vector<double>(m + 1, 0.0));
    for (std::size_t i = 0; i < m; ++i) {
        std::size_t s = maybe[i];
        a[i][i] = 1.0;
        for (auto k = d.row_start[s]; k < d.row_start[s + 1]; ++k) {
            auto t = d.column[k];
            if (target[t]) {
                a[i][m] += d.probability[k];
            } else if (idx[t] != SIZE_MAX) {
                a[i][idx[t]] -= d.probability[k];
            }
        }
    }
    for (std::size_t c = 0; c < m; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < m; ++r) {
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        }
        std::swap(a[c], a[piv]);
        for (std::size_t r = 0; r < m; ++r) {
            if (r == c) continue;
            double f = a[r][c] / a[c][c];
            for (std::size_t k = c; k <= m; ++k) a[r][k] -= f * a[c][k];
        }
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t s = 0; s < n; ++s) {
        if (target[s]) x[s] = 1.0;
        else if (idx[s] != SIZE_MAX) x[s] = a[idx[s]][m] / a[idx[s]][idx[s]];
    }
    return x;
}

ExplicitDtmc random_chain(std::mt19937_64& rng, std::uint32_t n) {
    std::vector<TransitionSpec> ts;
    std::uniform_int_distribution<std::uint32_t> state(0, n - 1);
    std::uniform_int_distribution<int> fan(1, 4);
    std::uniform_real_distribution<double> w(0.05, 1.0);
    std::vector<std::uint32_t> goal;
    for (std::uint32_t s = 0; s < n; ++s) {
        if (s % 7 == 3) {
            goal.push_back(s);
            ts.push_back({s, s, 1.0, ""});
            continue;
        }
        int k = fan(rng);
        std::vector<double> ws;
        std::vector<std::uint32_t> dst;
        double total = 0;
        for (int i = 0; i < k; ++i) {
            ws.push_back(w(rng));
            dst.push_back(state(rng));
            total += ws.back();
        }
        for (int i = 0; i < k; ++i) ts.push_back({s, dst[static_cast<std::size_t>(i)], ws[static_cast<std::size_t>(i)] / total, "a"});
    }
    return make_dtmc(n, 0, ts, {{"goal", goal}});
}

} // namespace

TEST_CASE("build minimal model") {
    auto m = prism::parse("dtmc module M x:[0..1] init 0; [a] x=0 -> 1.0:(x'=1); endmodule");
    CHECK_THROWS_AS(build(m), DeadlockError);
    BuildOptions opts;
    opts.fix_deadlocks = true;
    ExplicitDtmc d = build(m, opts);
    REQUIRE(d.num_states() == 2);
    CHECK(d.num_transitions() == 2);
    CHECK(d.column[0] == 1);
    CHECK(d.probability[0] == 1.0);
    CHECK(d.action_name(0) == "a");
    CHECK(d.column[1] == 1);
    CHECK(d.action[1] == ExplicitDtmc::kSelfLoop);
}

TEST_CASE("absorbing label gives a self-loop") {
    auto d = build(prism::parse("dtmc module M x:[0..1] init 0; [a] x=0 -> (x'=1); endmodule label \"goal\" = x=1;"));
    CHECK(d.num_states() == 2);
    CHECK(prob_reach(d, "goal") == 1.0);
}

TEST_CASE("synchronised moves in the robot layout") {
    ExplicitDtmc d = corpus_dtmc("robot_small.prism");
    CHECK(max_row_defect(d) < 1e-9);
    // initial state fires east from (0,0)
    CHECK(d.action_name(0) == "east");
    std::map<std::pair<int, int>, double> dist;
    for (auto k = d.row_start[0]; k < d.row_start[1]; ++k) {
        auto st = d.state(d.column[k]);
        dist[{st[0], st[1]}] += d.probability[k];
    }
    CHECK(dist.size() == 3);
    CHECK(dist[{1, 0}] == doctest::Approx(0.97).epsilon(1e-12));
    CHECK(dist[{0, 1}] == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(dist[{0, 0}] == doctest::Approx(0.02).epsilon(1e-12));
    double goal = prob_reach(d, "goal");
    CHECK(goal == doctest::Approx(1.0));
    double cost = expected_reward(d, "cost", "done");
    CHECK(cost > 4.0);
}

TEST_CASE("nondeterminism is rejected") {
    const char* src =
        "dtmc module A x:[0..1] init 0; [e] x=0 -> (x'=1); [n] x=0 -> (x'=1); endmodule label \"goal\" = x=1;";
    try {
        build(prism::parse(src));
        FAIL("expected NondeterminismError");
    } catch (const NondeterminismError& e) {
        CHECK(e.actions().size() == 2);
    }
    // two private commands at once
    CHECK_THROWS_AS(build(prism::parse("dtmc module A x:[0..1]; [] x=0 -> (x'=1); [] x=0 -> (x'=0); endmodule "
                                       "label \"goal\" = x=1;")),
                    NondeterminismError);
    // a shared action blocked by a partner does not count
    auto d = build(prism::parse("dtmc module A x:[0..1]; [e] x=0 -> (x'=1); [n] x=0 -> (x'=1); endmodule "
                                "module B y:[0..1]; [n] y=1 -> (y'=0); endmodule label \"goal\" = x=1;"));
    CHECK(d.action_name(0) == "e");
}

TEST_CASE("update range violations are errors") {
    CHECK_THROWS_AS(build(prism::parse("dtmc module A x:[0..1]; [a] true -> (x'=x+1); endmodule")), ModelError);
}

TEST_CASE("probabilities must sum to one") {
    auto m = prism::parse("dtmc const double q; module A x:[0..1]; [a] x=0 -> q:(x'=1) + 0.5:(x'=0); endmodule");
    m.constants[0].kind = prism::ConstKind::Double;
    m.constants[0].value = prism::Expr::real(0.6);
    CHECK_THROWS_AS(build(m), ModelError);
}

TEST_CASE("prob_reach examples") {
    auto one = make_dtmc(2, 0, {{0, 1, 1.0, "a"}, {1, 1, 1.0, ""}}, {{"goal", {1}}});
    CHECK(prob_reach(one, "goal") == 1.0);
    CHECK(prob_reach(trap_chain(), "goal") == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(prob_reach(geometric_chain(), "goal") == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(check(trap_chain(), Property::reach("goal")) == doctest::Approx(0.5));
    CHECK_THROWS_AS(prob_reach(trap_chain(), "nope"), UnknownLabel);
}

TEST_CASE("geometric chain agrees with simulation") {
    // walk a long single trajectory and count returns to s0
    ExplicitDtmc d = make_dtmc(2, 0, {{0, 1, 0.5, "a"}, {0, 0, 0.5, "a"}, {1, 0, 1.0, "b"}}, {{"goal", {1}}});
    auto trace = simulate(d, 99, 1'000'000);
    std::size_t visits0 = 0, hits = 0;
    for (std::size_t i = 0; i + 1 < trace.size(); ++i) {
        if (trace[i].state == 0) {
            ++visits0;
            if (trace[i + 1].state == 1) ++hits;
        }
    }
    double frac = static_cast<double>(hits) / static_cast<double>(visits0);
    CHECK(std::abs(frac - 0.5) < 3 * std::sqrt(0.25 / static_cast<double>(visits0)));
    CHECK(prob_reach(d, "goal") == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("expected_reward examples") {
    CHECK(expected_reward(geometric_chain(), "cost", "done") == doctest::Approx(2.0).epsilon(1e-9));
    auto five = make_dtmc(2, 0, {{0, 1, 1.0, "a"}, {1, 1, 1.0, ""}}, {{"goal", {1}}}, {{"cost", {5.0, 0.0}}});
    CHECK(expected_reward(five, "cost", "goal") == 5.0);
    CHECK_THROWS_AS(expected_reward(trap_chain(), "cost", "goal"), DivergentReward);
    CHECK(expected_reward(trap_chain(), "cost", "done") == doctest::Approx(1.0));
    CHECK(check(geometric_chain(), Property::expected("cost", "done")) == doctest::Approx(2.0));
    CHECK_THROWS_AS(expected_reward(trap_chain(), "nope", "done"), UnknownReward);

    // simulated mean of the geometric chain
    double sum = 0, sum2 = 0;
    const int runs = 100000;
    for (int i = 0; i < runs; ++i) {
        auto r = sample_run(geometric_chain(), static_cast<std::uint64_t>(i), "done", "cost", 10000);
        sum += r.reward;
        sum2 += r.reward * r.reward;
    }
    double mean = sum / runs;
    double se = std::sqrt((sum2 / runs - mean * mean) / runs);
    CHECK(std::abs(mean - 2.0) < 3 * se);
}

TEST_CASE("corpus chains") {
    auto dice = corpus_dtmc("dice.prism");
    CHECK(prob_reach(dice, "goal") == doctest::Approx(1.0 / 6.0).epsilon(1e-9));
    CHECK(expected_reward(dice, "flips", "done") == doctest::Approx(11.0 / 3.0).epsilon(1e-9));
    auto geo = corpus_dtmc("geometric.prism");
    CHECK(expected_reward(geo, "cost", "done") == doctest::Approx(2.0).epsilon(1e-9));
    auto trap = corpus_dtmc("trap.prism");
    CHECK(prob_reach(trap, "goal") == doctest::Approx(0.5));
    CHECK(expected_reward(trap, "cost", "done") == doctest::Approx(3.0));
}

TEST_CASE("parametric build") {
    auto m = prism::parse_file(testing::corpus_dir() + "/sync_urc.prism");
    CompiledModel cm(m);
    REQUIRE(cm.parameters() == std::vector<std::string>{"decision_0", "decision_1"});
    std::vector<double> a{1, 1}, b{2, 2};
    auto da = cm.build(a);
    auto db = cm.build(b);
    CHECK(prob_reach(da, "goal") == doctest::Approx(1.0));
    double ca = expected_reward(da, "cost", "goal");
    double cb = expected_reward(db, "cost", "goal");
    CHECK(cb > ca);
    // same as binding the constants in the AST
    auto bound = build(prism::bind_constants(m, {{"decision_0", 2}, {"decision_1", 2}}));
    CHECK(expected_reward(bound, "cost", "goal") == doctest::Approx(cb).epsilon(1e-12));
    CHECK(bound.num_states() == db.num_states());
    CHECK_THROWS_AS(cm.build(std::vector<double>{1}), ModelError);
    CHECK_THROWS_AS(cm.build(std::vector<double>{1, 3}), ModelError);
    CHECK_THROWS_AS(build(m), ModelError);
}

TEST_CASE("simulate") {
    auto one = make_dtmc(3, 0, {{0, 1, 1.0, "a"}, {1, 2, 1.0, "b"}, {2, 2, 1.0, ""}}, {{"goal", {2}}});
    auto t = simulate(one, 1, 4);
    REQUIRE(t.size() == 5);
    CHECK(t[0] == TraceStep{0, "a"});
    CHECK(t[1] == TraceStep{1, "b"});
    CHECK(t[2].state == 2);
    CHECK(simulate(one, 1, 10, "goal").size() == 3);
    auto geo = corpus_dtmc("geometric.prism");
    CHECK(simulate(geo, 42, 200) == simulate(geo, 42, 200));

    const int runs = 100000;
    int hits = 0;
    auto trap = trap_chain();
    for (int i = 0; i < runs; ++i) hits += sample_run(trap, static_cast<std::uint64_t>(i) * 7919u, "goal", "", 10).reached;
    double frac = static_cast<double>(hits) / runs;
    CHECK(std::abs(frac - 0.5) <= 3 * std::sqrt(0.25 / runs));
}

TEST_CASE("property: value iteration matches Gaussian elimination") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        auto n = static_cast<std::uint32_t>(2 + trial % 49);
        auto d = random_chain(rng, n);
        auto exact = solve_reach(d, d.labels.at("goal"));
        CHECK(std::abs(prob_reach(d, "goal") - exact[0]) <= 1e-7);
    }
}

TEST_CASE("property: rows are stochastic on every corpus model") {
    BuildOptions opts;
    opts.fix_deadlocks = true;
    for (const auto& f : testing::corpus_files()) {
        auto m = prism::parse(testing::read_file(f));
        if (!m.unbound_constants().empty()) continue;
        CAPTURE(f.string());
        CHECK(max_row_defect(build(m, opts)) <= 1e-9);
    }
}

TEST_CASE("property: an extra edge into the target never lowers prob_reach") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        auto d = random_chain(rng, 20);
        double before = prob_reach(d, "goal");
        // redirect half of a zero-probability state's mass to a goal state
        std::vector<TransitionSpec> ts;
        int changed = -1;
        for (std::uint32_t s = 0; s < d.num_states(); ++s) {
            bool redirect = changed < 0 && !d.labels.at("goal")[s] && solve_reach(d, d.labels.at("goal"))[s] == 0.0;
            if (redirect) changed = static_cast<int>(s);
            for (auto k = d.row_start[s]; k < d.row_start[s + 1]; ++k) {
                ts.push_back({s, d.column[k], redirect ? d.probability[k] / 2 : d.probability[k], d.action_name(s)});
            }
            if (redirect) ts.push_back({s, 3, 0.5, d.action_name(s)});
        }
        std::vector<std::uint32_t> goal;
        for (std::uint32_t s = 0; s < d.num_states(); ++s) {
            if (d.labels.at("goal")[s]) goal.push_back(s);
        }
        auto d2 = make_dtmc(static_cast<std::uint32_t>(d.num_states()), 0, ts, {{"goal", goal}});
        CHECK(prob_reach(d2, "goal") >= before - 1e-12);
    }
}

TEST_CASE("explicit export") {
    std::ostringstream os;
    write_explicit(trap_chain(), os);
    CHECK(os.str() ==
          "STATES 3 INITIAL 0\n0 1 0.5 a\n0 2 0.5 a\n1 1 1\n2 2 1\nLABEL done: 1 2\nLABEL goal: 1\n");
}

TEST_CASE("property parsing") {
    CHECK(Property::parse("P=? [ F \"goal\" ]") == Property::reach("goal"));
    CHECK(Property::parse("R{\"cost\"}=?[F \"done\"]") == Property::expected("cost", "done"));
    CHECK(Property::parse("max:R{\"x\"}=?[F \"done\"]").sense == Sense::Maximize);
    CHECK(Property::parse(Property::expected("cost", "done").to_string()) == Property::expected("cost", "done"));
    CHECK_THROWS_AS(Property::parse("P>0.5 [ G \"x\" ]"), InputError);
}
