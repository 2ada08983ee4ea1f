// Acceptance suite: one PASS/FAIL line per criterion, tolerances pinned below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "cli.hpp"
#include "config.hpp"
#include "experiment.hpp"
#include "parley/grid/controller.hpp"
#include "parley/grid/emit.hpp"
#include "parley/grid/map.hpp"
#include "parley/indicators/indicators.hpp"
#include "parley/mc/build.hpp"
#include "parley/mc/check.hpp"
#include "parley/mc/simulate.hpp"
#include "parley/prism/parser.hpp"
#include "parley/prism/printer.hpp"
#include "parley/synth/evaluator.hpp"
#include "parley/synth/front_io.hpp"
#include "parley/synth/nsga2.hpp"
#include "parley/synth/search.hpp"
#include "parley/urc/augment.hpp"
#include "parley/webapp/webapp.hpp"
#include "support/corpus.hpp"

using namespace parley;
namespace fs = std::filesystem;

namespace {

constexpr double kEquivalenceTol = 1e-9;
constexpr double kSigmas = 3.0;
constexpr int kSimRuns = 100'000;
constexpr std::size_t kSimStateLimit = 5000;
constexpr double kHvRatio = 0.99;
constexpr int kOracleSeedsNeeded = 9;
constexpr std::size_t kStatesLow = 1000, kStatesHigh = 30000;
constexpr double kCheckSeconds = 5.0;
constexpr int kHvMapsNeeded = 6, kSpreadMapsNeeded = 8;
constexpr double kIndicatorTol = 1e-12;
constexpr int kWebappParams = 132;
constexpr std::size_t kFrontRatio = 10;

struct Outcome {
    bool pass;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1
Outcome constant_policy_equivalence() {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    int cases = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto map = grid::generate_map(5, seed);
        auto ctl = grid::dijkstra_controller(map);
        grid::RobotModelCfg cfg;
        auto base = grid::emit_model(map, ctl, cfg);
        auto pm = urc::augment(base, grid::robot_augment_spec(base, 5));
        for (int k = 1; k <= 5; ++k) {
            cfg.c = k;
            auto plain = mc::build(grid::emit_model(map, ctl, cfg));
            auto aug = mc::build(urc::instantiate(pm, urc::Policy(25, k)));
            worst = std::max(worst, std::abs(mc::prob_reach(plain, "goal") - mc::prob_reach(aug, "goal")));
            worst = std::max(worst, std::abs(mc::expected_reward(plain, "cost", "done") - mc::expected_reward(aug, "cost", "done")));
            ++cases;
        }
    }
    const double secs = seconds_since(t0);
    return {worst <= kEquivalenceTol && secs < 120,
            fmt::format("{} map/k cases, max |delta| {:.3g} (tol {:g}), {:.1f} s (limit 120)", cases, worst, kEquivalenceTol, secs)};
}

// 2
Outcome checker_vs_simulation() {
    const auto t0 = std::chrono::steady_clock::now();
    int comparisons = 0, failures = 0, models = 0;
    std::string worst;
    double worst_z = 0.0;
    mc::BuildOptions bo;
    bo.fix_deadlocks = true;
    for (const auto& f : testing::corpus_files()) {
        auto m = prism::parse(testing::read_file(f));
        if (!m.unbound_constants().empty()) {
            auto params = urc::enumerate_params(m);
            urc::Policy lowest;
            for (const auto& p : params) lowest.push_back(p.low);
            m = urc::instantiate(m, lowest);
        }
        auto d = mc::build(m, bo);
        if (d.num_states() > kSimStateLimit) continue;
        ++models;
        auto note = [&](double checked, double estimate, double sd, const std::string& what) {
            ++comparisons;
            const double diff = std::abs(checked - estimate);
            const double z = sd > 0.0 ? diff / sd : (diff <= kEquivalenceTol ? 0.0 : INFINITY);
            if (z > kSigmas) ++failures;
            if (z >= worst_z) {
                worst_z = z;
                worst = fmt::format("{} {}", f.filename().string(), what);
            }
        };
        for (const auto& [label, _] : d.labels) {
            const double p = mc::prob_reach(d, label);
            int hits = 0;
            for (int i = 0; i < kSimRuns; ++i) {
                hits += mc::sample_run(d, 1'000'003ull * static_cast<std::uint64_t>(i) + 17, label, "", 1'000'000).reached;
            }
            note(p, static_cast<double>(hits) / kSimRuns, std::sqrt(p * (1 - p) / kSimRuns), "P[F " + label + "]");
            for (const auto& [reward, __] : d.rewards) {
                double expected = 0.0;
                try {
                    expected = mc::expected_reward(d, reward, label);
                } catch (const mc::DivergentReward&) {
                    continue;
                }
                double sum = 0.0, sum2 = 0.0;
                for (int i = 0; i < kSimRuns; ++i) {
                    auto r = mc::sample_run(d, 7'919ull * static_cast<std::uint64_t>(i) + 5, label, reward, 10'000'000);
                    sum += r.reward;
                    sum2 += r.reward * r.reward;
                }
                const double mean = sum / kSimRuns;
                const double se = std::sqrt(std::max(0.0, sum2 / kSimRuns - mean * mean) / kSimRuns);
                note(expected, mean, se, "R{" + reward + "}[F " + label + "]");
            }
        }
    }
    const double secs = seconds_since(t0);
    return {failures == 0 && models > 0 && secs < 300,
            fmt::format("{} models, {} comparisons, {} beyond {:g} sd (largest {:.2f} sd: {}), {:.1f} s (limit 300)", models, comparisons,
                        failures, kSigmas, worst_z, worst, secs)};
}

std::vector<indicators::Point> to_pts(const std::vector<synth::EvaluatedPolicy>& pts) {
    std::vector<indicators::Point> out;
    for (const auto& p : pts) out.push_back({p.objectives[0], p.objectives[1]});
    return out;
}

// 3
Outcome exhaustive_oracle() {
    const auto t0 = std::chrono::steady_clock::now();
    grid::GridMap map(3);
    map.start = {0, 0};
    map.destination = {2, 2};
    map.set_obstacle(1, 1);
    grid::RobotModelCfg cfg;
    cfg.p = 0.05;
    auto base = grid::emit_model(map, grid::dijkstra_controller(map), cfg);
    auto pm = urc::augment(base, grid::robot_augment_spec(base, 2));
    synth::Evaluator ev(pm, synth::robot_objectives());
    auto truth = synth::exhaustive(ev);
    double worst_cost = 0.0;
    for (const auto& p : truth.evaluated) worst_cost = std::max(worst_cost, p.objectives[1]);
    const indicators::Point ref{0.0, worst_cost};
    const double hv_true = indicators::hypervolume_2d(to_pts(truth.front.points), ref);
    int good = 0;
    double lowest = INFINITY;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        synth::GaConfig ga;
        ga.population = 50;
        ga.generations = 100;
        ga.seed = seed;
        const double ratio = indicators::hypervolume_2d(to_pts(synth::nsga2(ev, ga).front.points), ref) / hv_true;
        lowest = std::min(lowest, ratio);
        if (ratio >= kHvRatio) ++good;
    }
    const double secs = seconds_since(t0);
    return {truth.evaluated.size() == 512 && good >= kOracleSeedsNeeded && secs < 600,
            fmt::format("{} policies, exhaustive front {} points, {}/10 seeds with HV >= {:g}x (lowest {:.4f}), {:.1f} s (limit 600)",
                        truth.evaluated.size(), truth.front.size(), good, kHvRatio, lowest, secs)};
}

// 4 and 5 share the sweep.
std::vector<cli::ScaleRow> scale_rows() {
    static const auto rows = cli::run_scale({5, 10, 15, 20}, 1, cli::ExperimentConfig{});
    return rows;
}

Outcome parameter_reproduction() {
    const std::map<int, std::string> expected_power{{5, "5^25"}, {10, "10^100"}, {15, "15^225"}, {20, "20^400"}};
    bool ok = true;
    std::string detail;
    for (int n : {5, 10, 15, 20}) {
        auto map = grid::generate_map(n, 1);
        auto model = grid::emit_model(map, grid::dijkstra_controller(map), {});
        auto params = urc::enumerate_params(urc::augment(model, grid::robot_augment_spec(model, n)));
        bool ranges = std::all_of(params.begin(), params.end(), [&](const urc::ParamInfo& p) { return p.low == 1 && p.high == n; });
        ok = ok && params.size() == static_cast<std::size_t>(n * n) && ranges;
        detail += fmt::format("N={}: {} params{} ", n, params.size(), ranges ? "" : " (bad range)");
    }
    for (const auto& r : scale_rows()) {
        ok = ok && r.search_space_power == expected_power.at(r.n);
        detail += fmt::format("{}={} ", r.search_space_power, r.search_space);
    }
    return {ok, detail.substr(0, detail.size() - 1)};
}

Outcome state_space_scale() {
    bool ok = true;
    std::size_t lo = SIZE_MAX, hi = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto map = grid::generate_map(10, seed);
        auto model = grid::emit_model(map, grid::dijkstra_controller(map), {});
        auto pm = urc::augment(model, grid::robot_augment_spec(model, 10));
        std::vector<double> values(100, 10.0);
        const auto states = mc::CompiledModel(pm).build(values).num_states();
        lo = std::min(lo, states);
        hi = std::max(hi, states);
    }
    ok = lo >= kStatesLow && hi <= kStatesHigh;
    std::string sweep;
    double slowest = 0.0;
    std::size_t prev = 0;
    for (const auto& r : scale_rows()) {
        ok = ok && r.states > prev;
        prev = r.states;
        slowest = std::max({slowest, r.check_o1_s, r.check_o2_s});
        sweep += fmt::format("{}:{} ", r.n, r.states);
    }
    ok = ok && slowest < kCheckSeconds;
    return {ok, fmt::format("10x10 states over 10 maps in [{}, {}] (bounds [{}, {}]); by N {}; slowest check {:.3f} s (limit {:g})", lo, hi,
                            kStatesLow, kStatesHigh, sweep, slowest, kCheckSeconds)};
}

// 6
Outcome baseline_shape() {
    const auto dir = fs::temp_directory_path() / "parley_acceptance_baseline";
    fs::remove_all(dir);
    std::ostringstream out, err;
    auto run = [&](std::vector<std::string> args) {
        if (cli::run_cli(args, out, err) != 0) throw std::runtime_error(err.str());
    };
    run({"gen-maps", "--n", "10", "--count", "1", "--seed", "1", "--out", dir.string()});
    run({"emit", "--map", (dir / "map_000.txt").string(), "-o", (dir / "robot.prism").string()});
    run({"augment", (dir / "robot.prism").string(), "--preset", "robot", "--c-max", "10", "-o", (dir / "aug.prism").string()});
    run({"baseline", (dir / "aug.prism").string(), "-o", (dir / "baseline.csv").string()});
    auto front = synth::load_front((dir / "baseline.csv").string());
    fs::remove_all(dir);
    std::set<int> values;
    bool constant = true;
    for (const auto& p : front.points) {
        constant = constant && !p.policy.empty() && std::all_of(p.policy.begin(), p.policy.end(), [&](int v) { return v == p.policy[0]; });
        if (!p.policy.empty()) values.insert(p.policy[0]);
    }
    return {front.points.size() == 10 && constant && values.size() == 10,
            fmt::format("{} policies, {}, {} distinct values", front.points.size(), constant ? "each constant" : "not all constant", values.size())};
}

// 7
Outcome desk_scale_trend() {
    const auto t0 = std::chrono::steady_clock::now();
    cli::ExperimentConfig cfg;
    cfg.maps = 10;
    cfg.size = 10;
    cfg.map_seed = 1;
    cfg.runs = 3;
    cfg.ga.population = 40;
    cfg.ga.generations = 20;
    cfg.min_success = {0.8};
    cfg.max_cost = {60};
    auto rep = cli::run_experiment(cfg, false);
    struct Acc {
        double hv = 0, sp = 0, hv_base = 0, sp_base = 0;
        int n = 0;
    };
    std::map<int, Acc> by_map;
    for (const auto& r : rep.indicators) {
        auto& a = by_map[r.map_id];
        a.hv += r.hv_parley;
        a.sp += r.sp_parley;
        a.hv_base = r.hv_baseline;
        a.sp_base = r.sp_baseline;
        ++a.n;
    }
    int hv_ok = 0, sp_ok = 0;
    std::string maps;
    for (const auto& [id, a] : by_map) {
        const double hv = a.hv / a.n, sp = a.sp / a.n;
        if (hv >= a.hv_base) ++hv_ok;
        if (sp < a.sp_base) ++sp_ok;
        maps += fmt::format(" m{}:hv {:.2f}/{:.2f} sp {:.2f}/{:.2f};", id, hv, a.hv_base, sp, a.sp_base);
    }
    const double secs = seconds_since(t0);
    const bool ok = rep.failures.empty() && hv_ok >= kHvMapsNeeded && sp_ok >= kSpreadMapsNeeded && secs < 3600;
    return {ok, fmt::format("HV >= baseline on {}/10 (need {}), spread < baseline on {}/10 (need {}), {} failed maps, {:.0f} s (limit 3600);{}",
                            hv_ok, kHvMapsNeeded, sp_ok, kSpreadMapsNeeded, rep.failures.size(), secs, maps)};
}

// 8
Outcome indicator_examples() {
    const double hv1 = indicators::hypervolume_2d({{0.8, 70}}, indicators::Point{0.6, 100});
    const double hv2 = indicators::hypervolume_2d({{0.9, 80}, {0.7, 50}}, indicators::Point{0.6, 100});
    const double sp0 = indicators::spread({{0.0, 0.0}, {0.5, 5.0}, {1.0, 10.0}}).value;
    const double sp5 = indicators::spread({{0.0, 1.0}, {0.25, 1.0}, {1.0, 1.0}}).value;
    const double p = indicators::mann_whitney_u({1, 2, 3}, {4, 5, 6}).p_less;
    const bool ok = std::abs(hv1 - 6.0) <= kIndicatorTol && std::abs(hv2 - 9.0) <= kIndicatorTol && std::abs(sp0) <= kIndicatorTol &&
                    std::abs(sp5 - 0.5) <= kIndicatorTol && std::abs(p - 0.05) <= kIndicatorTol;
    return {ok, fmt::format("HV {:.15g} and {:.15g}, spread {:.15g} and {:.15g}, exact p {:.15g}", hv1, hv2, sp0, sp5, p)};
}

// 9
Outcome webapp_shape() {
    auto pm = urc::augment(webapp::emit_webapp_model({}), webapp::webapp_augment_spec());
    synth::Evaluator ev(pm, synth::webapp_objectives());
    const auto params = ev.params().size();
    const auto base = synth::baseline(ev).front.size();
    const auto ga = synth::nsga2(ev, synth::GaConfig{}).front.size();
    return {params == static_cast<std::size_t>(kWebappParams) && ga > base && ga >= kFrontRatio * base,
            fmt::format("{} decision parameters (need {}), synthesized front {} points vs baseline {} (need >= {}x)", params, kWebappParams, ga,
                        base, kFrontRatio)};
}

// 10
Outcome parser_round_trip() {
    int ok = 0, total = 0;
    std::set<std::string> names;
    for (const auto& f : testing::corpus_files()) {
        ++total;
        names.insert(f.filename().string());
        auto m = prism::parse(testing::read_file(f));
        if (prism::parse(prism::print(m)) == m) ++ok;
    }
    const bool emitted = names.count("robot_4x4.prism") && names.count("robot_4x4_urc.prism") && names.count("webapp_small.prism");
    return {ok == total && total > 0 && emitted,
            fmt::format("{}/{} corpus models round-trip{}", ok, total, emitted ? " (emitted robot, augmented and webapp models included)" : "; emitted models missing")};
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"constant-policy equivalence", constant_policy_equivalence},
        {"model checker vs simulation", checker_vs_simulation},
        {"exhaustive-oracle synthesis", exhaustive_oracle},
        {"parameter and search-space counts", parameter_reproduction},
        {"state-space scale", state_space_scale},
        {"baseline shape", baseline_shape},
        {"desk-scale indicator trend", desk_scale_trend},
        {"indicator examples", indicator_examples},
        {"web-app shape", webapp_shape},
        {"parser round-trip", parser_round_trip},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, fmt::format("error: {}", e.what())};
        }
        if (!o.pass) ++failed;
        std::cout << fmt::format("[{}] {:>2} {}: {}", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail) << std::endl;
    }
    std::cout << fmt::format("{}/{} criteria passed", criteria.size() - static_cast<std::size_t>(failed), criteria.size()) << std::endl;
    return failed == 0 ? 0 : 1;
}
