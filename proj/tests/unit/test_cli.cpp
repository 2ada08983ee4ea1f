#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "config.hpp"
#include "experiment.hpp"
#include "parley/grid/map.hpp"
#include "parley/prism/parser.hpp"
#include "parley/synth/front_io.hpp"
#include "plot.hpp"
#include "support/corpus.hpp"

using namespace parley;
using namespace parley::cli;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run invoke(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("parley_cli_" + name)) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    [[nodiscard]] std::string operator/(const std::string& f) const { return (path / f).string(); }
};

std::size_t lines(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

// gen-maps, emit and augment for one robot map.
std::string augmented_robot(const TempDir& d, int n, int seed) {
    REQUIRE(invoke({"gen-maps", "--n", std::to_string(n), "--count", "1", "--seed", std::to_string(seed), "--out", d / "maps"}).code == 0);
    REQUIRE(invoke({"emit", "--map", d / "maps/map_000.txt", "-o", d / "robot.prism"}).code == 0);
    auto r = invoke({"augment", d / "robot.prism", "--preset", "robot", "--c-max", std::to_string(n), "-o", d / "aug.prism"});
    REQUIRE_MESSAGE(r.code == 0, r.err);
    return d / "aug.prism";
}

ExperimentConfig tiny_experiment(const std::string& out) {
    ExperimentConfig cfg;
    cfg.maps = 1;
    cfg.runs = 1;
    cfg.size = 5;
    cfg.min_success = {0.5};
    cfg.max_cost = {60};
    cfg.ga.population = 8;
    cfg.ga.generations = 2;
    cfg.output = out;
    cfg.jobs = 1;
    return cfg;
}

} // namespace

TEST_CASE("gen-maps is deterministic") {
    TempDir d("gen");
    auto a = invoke({"gen-maps", "--n", "10", "--count", "3", "--seed", "7", "--out", d / "a"});
    auto b = invoke({"gen-maps", "--n", "10", "--count", "3", "--seed", "7", "--out", d / "b"});
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);
    CHECK(lines(a.out) == 3);
    for (int i = 0; i < 3; ++i) {
        auto name = "map_00" + std::to_string(i) + ".txt";
        auto text = testing::read_file(d.path / "a" / name);
        CHECK_FALSE(text.empty());
        CHECK(text == testing::read_file(d.path / "b" / name));
        CHECK(grid::read_map_file(d / ("a/" + name)) == grid::generate_map(10, 7 + i));
    }
}

TEST_CASE("emitted and augmented models reload") {
    TempDir d("emit");
    auto aug = augmented_robot(d, 5, 3);
    auto m = prism::parse_file(aug);
    CHECK(m.unbound_constants().size() == 25);
    auto w = invoke({"emit", "--webapp"});
    REQUIRE(w.code == 0);
    auto web = prism::parse(w.out);
    std::ofstream(d / "web.prism") << w.out;
    auto wa = invoke({"augment", d / "web.prism", "--preset", "webapp"});
    REQUIRE(wa.code == 0);
    CHECK(prism::parse(wa.out).unbound_constants().size() == 132);
    CHECK(invoke({"emit"}).code == kUsage);
    CHECK(invoke({"emit", "--webapp", "--map", d / "maps/map_000.txt"}).code == kUsage);
}

TEST_CASE("baseline emits ten uniform policies on a 10x10 model") {
    TempDir d("baseline");
    auto aug = augmented_robot(d, 10, 1);
    auto r = invoke({"baseline", aug, "-o", d / "base.csv"});
    REQUIRE_MESSAGE(r.code == 0, r.err);
    auto text = testing::read_file(d / "base.csv");
    CHECK(lines(text) == 11);
    auto front = synth::load_front(d / "base.csv");
    REQUIRE(front.points.size() == 10);
    for (std::size_t k = 0; k < 10; ++k) {
        CHECK(front.points[k].policy == urc::Policy(100, static_cast<int>(k) + 1));
    }
}

TEST_CASE("check, synth, select, metrics and plot chain") {
    TempDir d("chain");
    auto aug = augmented_robot(d, 4, 11);
    auto s = invoke({"synth", aug, "--population", "8", "--generations", "3", "--seed", "2", "-o", d / "ga.csv"});
    REQUIRE_MESSAGE(s.code == 0, s.err);
    REQUIRE(invoke({"baseline", aug, "-o", d / "base.csv"}).code == 0);
    auto front = synth::load_front(d / "ga.csv");
    REQUIRE(front.size() >= 1);

    auto sel = invoke({"select", d / "ga.csv", "--knee", "-o", d / "policy.json"});
    REQUIRE_MESSAGE(sel.code == 0, sel.err);
    auto j = nlohmann::json::parse(testing::read_file(d / "policy.json"));
    CHECK(j["policy"].size() == 16);
    const auto id = j["policy_id"].get<std::size_t>();
    CHECK(j["objectives"]["success"].get<double>() == front.points[id].objectives[0]);

    auto chk = invoke({"check", aug, "--policy", d / "policy.json", "--property", "P=?[F \"goal\"]", "--property", "R{\"cost\"}=?[F \"done\"]"});
    REQUIRE_MESSAGE(chk.code == 0, chk.err);
    std::smatch m;
    REQUIRE(std::regex_search(chk.out, m, std::regex(R"(P=\?\[F "goal"\] = ([0-9.e-]+))")));
    CHECK(std::stod(m[1]) == doctest::Approx(front.points[id].objectives[0]).epsilon(1e-9));

    CHECK(invoke({"select", d / "ga.csv", "--min-success", "1.1"}).code == kModel);
    CHECK(invoke({"select", d / "ga.csv"}).code == kUsage);

    auto met = invoke({"metrics", "--parley", d / "ga.csv", "--parley", d / "ga.csv", "--baseline", d / "base.csv", "--setting", "0.5,100"});
    REQUIRE_MESSAGE(met.code == 0, met.err);
    CHECK(met.out.rfind("map_id,setting,run,hv_parley,hv_baseline,sp_parley,sp_baseline,u,p\n", 0) == 0);
    CHECK(lines(met.out) == 3);

    auto plot = invoke({"plot", "--parley", d / "ga.csv", "--baseline", d / "base.csv", "--min-success", "0.8", "--max-cost", "100"});
    REQUIRE(plot.code == 0);
    CHECK(plot.out.find("<svg") == 0);
    CHECK(plot.out.find("req-success") != std::string::npos);

    auto ex = invoke({"synth", aug, "--exhaustive", "-o", d / "all.csv"});
    CHECK(ex.code == kUsage);
}

TEST_CASE("scale reports symbolic search-space sizes") {
    auto r = invoke({"scale", "--sizes", "5,10"});
    REQUIRE_MESSAGE(r.code == 0, r.err);
    CHECK(r.out.find("n,states,transitions,params,search_space_power,search_space,check_o1_s,check_o2_s") == 0);
    CHECK(r.out.find(",25,5^25,2.98e17,") != std::string::npos);
    CHECK(r.out.find(",100,10^100,1e100,") != std::string::npos);
    CHECK(scientific_power(15, 225) == "4.17e264");
    CHECK(scientific_power(20, 400) == "2.58e520");
}

TEST_CASE("exit codes") {
    TempDir d("exit");
    std::ofstream(d / "bad.prism") << "dtmc\nmodule M x : [0..1] init 0; [] x=0 -> (x'=2); endmodule\n";
    const auto geo = testing::corpus_dir() + "/geometric.prism";
    CHECK(invoke({}).code == kUsage);
    CHECK(invoke({"no-such-command"}).code == kUsage);
    CHECK(invoke({"check", d / "missing.prism", "--property", "P=?[F \"goal\"]"}).code == kUsage);
    CHECK(invoke({"check", geo, "--property", "P=?[F"}).code == kUsage);
    CHECK(invoke({"check", geo, "--property", "P=?[F \"nowhere\"]"}).code == kModel);
    CHECK(invoke({"check", d / "bad.prism", "--property", "P=?[F \"goal\"]"}).code == kModel);
    auto ok = invoke({"check", geo, "--property", "R{\"cost\"}=?[F \"done\"]"});
    CHECK(ok.code == kOk);
    CHECK(ok.out == "min:R{\"cost\"}=?[F \"done\"] = 2\n");
    auto nc = invoke({"check", geo, "--property", "R{\"cost\"}=?[F \"done\"]", "--max-iterations", "1"});
    CHECK(nc.code == kNonConvergence);
    CHECK(nc.out.empty());
    CHECK(nc.err.find("error:") == 0);
    auto bound = invoke({"check", geo, "--const", "q=0.25", "--property", "R{\"cost\"}=?[F \"done\"]"});
    CHECK(bound.out == "min:R{\"cost\"}=?[F \"done\"] = 4\n");
    CHECK(invoke({"check", geo, "--const", "q=abc", "--property", "P=?[F \"goal\"]"}).code == kUsage);
}

TEST_CASE("plot shapes") {
    auto empty = emit_plot({});
    CHECK(empty.find("class=\"axes\"") != std::string::npos);
    CHECK(empty.find("class=\"marker\"") == std::string::npos);

    auto one = emit_plot({{"p", {{0.5, 50}}, Marker::Circle}});
    CHECK(one.find("<circle class=\"marker\" cx=\"345.00\" cy=\"220.00\"") != std::string::npos);
    CHECK(std::count(one.begin(), one.end(), '\n') > 0);
    auto cross = emit_plot({{"b", {{0.5, 50}}, Marker::Cross}});
    CHECK(cross.find("<path class=\"marker\" d=\"M341.00 216.00L349.00 224.00") != std::string::npos);

    auto req = emit_plot({}, indicators::RequirementSetting{0.8, 100});
    CHECK(req.find("class=\"req-success\" x1=\"70.00\" y1=\"100.00\" x2=\"620.00\" y2=\"100.00\"") != std::string::npos);
    CHECK(req.find("class=\"req-cost\" x1=\"345.00\"") != std::string::npos);
    CHECK(req.find("stroke-dasharray") != std::string::npos);
    CHECK(req.find("class=\"rejected\"") != std::string::npos);

    TempDir d("plot");
    std::ofstream(d / "broken.csv") << "policy_id,success\n0,zz\n";
    CHECK(invoke({"plot", "--parley", d / "broken.csv"}).code == kUsage);
}

TEST_CASE("configuration files") {
    ExperimentConfig cfg;
    cfg.maps = 4;
    cfg.ga.population = 12;
    cfg.ga.front_source = synth::FrontSource::Archive;
    cfg.min_success = {0.75};
    cfg.webapp.horizon = 12;
    cfg.robot.p = 0.02;
    auto text = to_ini(cfg);
    auto back = parse_config(text);
    CHECK(to_ini(back) == text);
    CHECK(back.maps == 4);
    CHECK(back.ga.front_source == synth::FrontSource::Archive);
    CHECK(back.settings().size() == 3);
    CHECK(to_ini(parse_config("")) == to_ini(ExperimentConfig{}));

    CHECK(parse_config("[experiment]\nruns = 5\n").runs == 5);
    CHECK_THROWS_AS(parse_config("[nothing]\nx = 1\n"), InputError);
    CHECK_THROWS_AS(parse_config("[experiment]\nspeed = 1\n"), InputError);
    CHECK_THROWS_AS(parse_config("[experiment]\nruns = 0\n"), InputError);
    CHECK_THROWS_AS(parse_config("[experiment]\nruns = many\n"), InputError);
    CHECK_THROWS_AS(parse_config("[requirements]\nmin_success =\n"), InputError);
    CHECK_THROWS_AS(parse_config("[ga]\npopulation = 7\n"), InputError);

    CHECK(cfg.settings()[0].min_success == 0.75);
    ExperimentConfig def;
    CHECK(def.settings().size() == 9);
    CHECK(def.settings()[1].min_success == 0.6);
    CHECK(def.settings()[1].max_cost == 80);
    CHECK(run_seed(def, 2, 1) != run_seed(def, 1, 2));
    CHECK(setting_label({0.8, 60}) == "0.8/60");

    TempDir d("config");
    std::ofstream(d / "bad.ini") << "[experiment]\nruns = 0\n";
    CHECK(invoke({"--config", d / "bad.ini", "scale", "--sizes", "5"}).code == kUsage);
}

TEST_CASE("a one-map experiment is reproducible") {
    TempDir d("experiment");
    auto cfg = tiny_experiment(d / "a");
    auto rep = run_experiment(cfg);
    REQUIRE(rep.failures.empty());
    CHECK(rep.indicators.size() == 1);
    CHECK(rep.significance.size() == 2);
    CHECK(rep.summary.size() == 2);
    for (const char* f : {"indicators.csv", "significance.csv", "summary.csv", "failures.csv", "config.ini", "maps/map_000.txt",
                          "models/map_000.prism", "fronts/map_000_baseline.csv", "fronts/map_000_baseline.json", "fronts/map_000_run_0.csv"}) {
        CHECK_MESSAGE(fs::exists(d.path / "a" / f), f);
    }
    CHECK(lines(testing::read_file(d.path / "a" / "indicators.csv")) == 2);

    auto again = invoke({"--config", d / "a/config.ini", "experiment", "--out", d / "b"});
    REQUIRE_MESSAGE(again.code == 0, again.err);
    for (const char* f : {"indicators.csv", "significance.csv", "summary.csv", "fronts/map_000_run_0.csv", "models/map_000.prism"}) {
        CHECK(testing::read_file(d.path / "a" / f) == testing::read_file(d.path / "b" / f));
    }
    CHECK(prism::parse_file(d / "a/models/map_000.prism").unbound_constants().size() == 25);
    CHECK(synth::load_front(d / "a/fronts/map_000_run_0.csv").size() >= 1);
}

TEST_CASE("significance comparison") {
    std::vector<IndicatorRow> rows;
    for (int r = 0; r < 5; ++r) rows.push_back({0, "0.8/60", r, 10.0 + r, 5.0, 0.2, 1.0, 0, 1});
    auto sig = compare(rows);
    REQUIRE(sig.size() == 2);
    CHECK(sig[0].indicator == "hv");
    CHECK(sig[0].gain == doctest::Approx(7.0));
    CHECK(sig[0].outcome == "better");
    CHECK(sig[1].indicator == "sp");
    CHECK(sig[1].gain == doctest::Approx(0.8));
    CHECK(sig[1].outcome == "better");
    for (auto& r : rows) r.hv_parley = 5.0;
    CHECK(compare(rows)[0].outcome == "insignificant");
    for (auto& r : rows) r.hv_parley = 1.0 + 0.1 * r.run;
    CHECK(compare(rows)[0].outcome == "worse");
}

TEST_CASE("shipped presets load") {
    auto desk = load_config(std::string(PARLEY_CONFIG_DIR) + "/desk.ini");
    ExperimentConfig def;
    def.output = "results/desk";
    CHECK(to_ini(desk) == to_ini(def));
    auto full = load_config(std::string(PARLEY_CONFIG_DIR) + "/full.ini");
    CHECK(full.maps == 90);
    CHECK(full.runs == 10);
    CHECK(full.ga.population == 100);
    CHECK(full.ga.generations == 40);
    CHECK(full.settings().size() == 9);
}
