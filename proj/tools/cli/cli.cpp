#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "config.hpp"
#include "experiment.hpp"
#include "parley/grid/controller.hpp"
#include "parley/grid/emit.hpp"
#include "parley/grid/map.hpp"
#include "parley/mc/build.hpp"
#include "parley/mc/check.hpp"
#include "parley/mc/dtmc.hpp"
#include "parley/prism/constants.hpp"
#include "parley/prism/parser.hpp"
#include "parley/prism/printer.hpp"
#include "parley/synth/front_io.hpp"
#include "parley/synth/nsga2.hpp"
#include "parley/synth/search.hpp"
#include "parley/urc/augment.hpp"
#include "parley/util/log.hpp"
#include "parley/webapp/webapp.hpp"
#include "plot.hpp"

namespace parley::cli {

namespace fs = std::filesystem;

namespace {

class UsageError : public InputError {
public:
    using InputError::InputError;
};

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    if (auto parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
    std::ofstream f(path);
    if (!f) throw InputError(fmt::format("cannot write {}", path));
    f << text;
}

std::vector<synth::Objective> objectives_for(const std::string& which, const std::vector<std::string>& props) {
    if (!props.empty()) {
        std::vector<synth::Objective> out;
        for (const auto& p : props) {
            auto eq = p.find('=');
            if (eq == std::string::npos || eq == 0) throw UsageError(fmt::format("--property expects name=PROPERTY, got '{}'", p));
            out.push_back({p.substr(0, eq), mc::Property::parse(p.substr(eq + 1))});
        }
        return out;
    }
    if (which == "webapp") return synth::webapp_objectives();
    return synth::robot_objectives();
}

std::map<std::string, double> parse_bindings(const std::vector<std::string>& items) {
    std::map<std::string, double> out;
    for (const auto& b : items) {
        auto eq = b.find('=');
        if (eq == std::string::npos || eq == 0) throw UsageError(fmt::format("--const expects name=value, got '{}'", b));
        try {
            out[b.substr(0, eq)] = std::stod(b.substr(eq + 1));
        } catch (const std::logic_error&) {
            throw UsageError(fmt::format("--const {}: value is not a number", b));
        }
    }
    return out;
}

urc::Policy read_policy(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError(fmt::format("cannot read {}", path));
    try {
        auto j = nlohmann::json::parse(in);
        if (j.is_object()) j = j.at("policy");
        return j.get<urc::Policy>();
    } catch (const nlohmann::json::exception& e) {
        throw InputError(fmt::format("{}: {}", path, e.what()));
    }
}

struct Globals {
    std::string config;
    std::string log_level;
    int jobs = -1;
};

ExperimentConfig load(const Globals& g, ExperimentConfig base = {}) {
    ExperimentConfig cfg = g.config.empty() ? base : load_config(g.config, base);
    if (g.jobs >= 0) cfg.jobs = g.jobs;
    if (!g.log_level.empty()) cfg.log_level = g.log_level;
    log::set_level(log::parse_level(cfg.log_level));
    return cfg;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Synthesis of uncertainty-reduction policies for probabilistic models", "parley"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "parley 0.1.0");
    Globals g;
    app.add_option("--config", g.config, "INI configuration file")->check(CLI::ExistingFile);
    app.add_option("--log-level", g.log_level, "debug, info, warn, error or off");
    app.add_option("--jobs", g.jobs, "worker threads (0: PARLEY_JOBS or all cores)");

    // gen-maps
    auto* gen = app.add_subcommand("gen-maps", "generate random grid maps");
    int gen_n = 0, gen_count = 1;
    std::optional<std::uint64_t> gen_seed;
    std::optional<double> gen_sigma;
    std::string gen_out = "maps";
    gen->add_option("--n", gen_n, "cells per side (default: experiment size)");
    gen->add_option("--count", gen_count, "number of maps")->check(CLI::PositiveNumber);
    gen->add_option("--seed", gen_seed, "seed of the first map; map i uses seed + i");
    gen->add_option("--sigma", gen_sigma, "obstacle threshold in standard deviations");
    gen->add_option("--out", gen_out, "output directory");

    // emit
    auto* emit = app.add_subcommand("emit", "emit a robot or web-application model");
    std::string emit_map, emit_out;
    bool emit_webapp = false;
    std::optional<int> emit_c, emit_cmax;
    emit->add_option("--map", emit_map, "map file")->check(CLI::ExistingFile);
    emit->add_flag("--webapp", emit_webapp, "emit the web-application model");
    emit->add_option("--c", emit_c, "robot: localisation period; webapp: 1 to invoke scanA");
    emit->add_option("--c-max", emit_cmax, "robot: upper bound of the step counter");
    emit->add_option("-o,--output", emit_out, "output file (default stdout)");

    // augment
    auto* aug = app.add_subcommand("augment", "add the uncertainty-reduction controller");
    std::string aug_in, aug_out, aug_preset, aug_constant = "c";
    std::vector<std::string> aug_pre, aug_post, aug_vars, aug_truth;
    std::optional<int> aug_cmin, aug_cmax;
    aug->add_option("model", aug_in, "input .prism")->required()->check(CLI::ExistingFile);
    aug->add_option("--preset", aug_preset, "robot or webapp")->check(CLI::IsMember({"robot", "webapp"}));
    aug->add_option("--pre", aug_pre, "actions before the decision")->delimiter(',');
    aug->add_option("--post", aug_post, "actions after the decision")->delimiter(',');
    aug->add_option("--vars", aug_vars, "decision variables")->delimiter(',');
    aug->add_option("--ground-truth", aug_truth, "ground-truth modules")->delimiter(',');
    aug->add_option("--constant", aug_constant, "controlled constant");
    aug->add_option("--c-min", aug_cmin);
    aug->add_option("--c-max", aug_cmax);
    aug->add_option("-o,--output", aug_out, "output file (default stdout)");

    // check
    auto* chk = app.add_subcommand("check", "model-check properties of a model");
    std::string chk_in, chk_policy, chk_export;
    std::vector<std::string> chk_consts, chk_props;
    bool chk_fix = false;
    mc::CheckOptions chk_opts;
    chk->add_option("model", chk_in, "input .prism")->required()->check(CLI::ExistingFile);
    chk->add_option("--const", chk_consts, "binding name=value");
    chk->add_option("--policy", chk_policy, "policy JSON for the decision parameters")->check(CLI::ExistingFile);
    chk->add_option("--property", chk_props, "P=?[F \"l\"] or R{\"r\"}=?[F \"l\"]")->required();
    chk->add_option("--export", chk_export, "write the explicit chain");
    chk->add_flag("--fix-deadlocks", chk_fix, "add self-loops to deadlocked states");
    chk->add_option("--epsilon", chk_opts.epsilon, "convergence threshold");
    chk->add_option("--max-iterations", chk_opts.max_iterations, "iteration cap");

    // baseline
    auto* base = app.add_subcommand("baseline", "evaluate the uniform policies");
    std::string base_in, base_out, base_case = "robot";
    std::vector<std::string> base_props;
    base->add_option("model", base_in, "parametric .prism")->required()->check(CLI::ExistingFile);
    base->add_option("--case", base_case, "objective preset")->check(CLI::IsMember({"robot", "webapp"}));
    base->add_option("--property", base_props, "objective name=PROPERTY (repeatable)");
    base->add_option("-o,--output", base_out, "front CSV")->required();

    // synth
    auto* syn = app.add_subcommand("synth", "search the policy space with NSGA-II");
    std::string syn_in, syn_out, syn_case = "robot", syn_front;
    std::vector<std::string> syn_props;
    std::optional<int> syn_pop, syn_gens, syn_tour;
    std::optional<double> syn_cross, syn_mut;
    std::optional<std::uint64_t> syn_seed;
    std::optional<bool> syn_seed_base;
    bool syn_exhaustive = false;
    syn->add_option("model", syn_in, "parametric .prism")->required()->check(CLI::ExistingFile);
    syn->add_option("--case", syn_case, "objective preset")->check(CLI::IsMember({"robot", "webapp"}));
    syn->add_option("--property", syn_props, "objective name=PROPERTY (repeatable)");
    syn->add_option("--population", syn_pop);
    syn->add_option("--generations", syn_gens);
    syn->add_option("--crossover-rate", syn_cross);
    syn->add_option("--mutation-rate", syn_mut);
    syn->add_option("--tournament-size", syn_tour);
    syn->add_option("--seed", syn_seed);
    syn->add_option("--seed-baseline", syn_seed_base, "true or false");
    syn->add_option("--front", syn_front, "archive or final")->check(CLI::IsMember({"archive", "final"}));
    syn->add_flag("--exhaustive", syn_exhaustive, "evaluate every policy instead");
    syn->add_option("-o,--output", syn_out, "front CSV")->required();

    // metrics
    auto* met = app.add_subcommand("metrics", "indicators of GA fronts against a baseline front");
    std::vector<std::string> met_parley, met_settings;
    std::string met_base, met_out;
    int met_map = 0;
    met->add_option("--parley", met_parley, "front CSV per run")->required()->check(CLI::ExistingFile);
    met->add_option("--baseline", met_base, "baseline front CSV")->required()->check(CLI::ExistingFile);
    met->add_option("--setting", met_settings, "min_success,max_cost (repeatable; default: config grid)");
    met->add_option("--map-id", met_map);
    met->add_option("-o,--output", met_out, "indicator CSV (default stdout)");

    // select
    auto* sel = app.add_subcommand("select", "choose a policy from a front");
    std::string sel_in, sel_out;
    std::optional<double> sel_ms, sel_mc;
    bool sel_knee = false;
    sel->add_option("front", sel_in, "front CSV")->required()->check(CLI::ExistingFile);
    sel->add_option("--min-success", sel_ms);
    sel->add_option("--max-cost", sel_mc);
    sel->add_flag("--knee", sel_knee, "knee point of the (filtered) front");
    sel->add_option("-o,--output", sel_out, "policy JSON (default stdout)");

    // experiment
    auto* exp = app.add_subcommand("experiment", "baseline versus GA over generated maps");
    std::optional<std::string> exp_out;
    std::optional<int> exp_maps, exp_runs, exp_size, exp_pop, exp_gens;
    exp->add_option("--out", exp_out, "output directory");
    exp->add_option("--maps", exp_maps);
    exp->add_option("--runs", exp_runs);
    exp->add_option("--size", exp_size);
    exp->add_option("--population", exp_pop);
    exp->add_option("--generations", exp_gens);

    // scale
    auto* sca = app.add_subcommand("scale", "state-space and search-space sizes by map size");
    std::vector<int> sca_sizes{5, 10, 15, 20};
    std::optional<std::uint64_t> sca_seed;
    std::string sca_out;
    sca->add_option("--sizes", sca_sizes)->delimiter(',');
    sca->add_option("--seed", sca_seed);
    sca->add_option("-o,--output", sca_out, "CSV (default stdout)");

    // plot
    auto* plt = app.add_subcommand("plot", "SVG scatter of fronts");
    std::vector<std::string> plt_parley, plt_base;
    std::optional<double> plt_ms, plt_mc;
    std::string plt_out;
    plt->add_option("--parley", plt_parley, "front CSV drawn with circles")->check(CLI::ExistingFile);
    plt->add_option("--baseline", plt_base, "front CSV drawn with crosses")->check(CLI::ExistingFile);
    plt->add_option("--min-success", plt_ms);
    plt->add_option("--max-cost", plt_mc);
    plt->add_option("-o,--output", plt_out, "SVG file (default stdout)");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*gen) {
            auto cfg = load(g);
            const int n = gen_n > 0 ? gen_n : cfg.size;
            const std::uint64_t seed = gen_seed.value_or(cfg.map_seed);
            const double sigma = gen_sigma.value_or(cfg.sigma);
            fs::create_directories(gen_out);
            for (int i = 0; i < gen_count; ++i) {
                auto map = grid::generate_map(n, seed + static_cast<std::uint64_t>(i), sigma);
                auto path = (fs::path(gen_out) / fmt::format("map_{:03d}.txt", i)).string();
                grid::write_map_file(map, path);
                out << path << '\n';
            }
        } else if (*emit) {
            auto cfg = load(g);
            prism::Model m;
            if (emit_webapp) {
                if (!emit_map.empty()) throw UsageError("--map and --webapp are exclusive");
                auto w = cfg.webapp;
                if (emit_c) w.scan = *emit_c;
                m = webapp::emit_webapp_model(w);
            } else {
                if (emit_map.empty()) throw UsageError("emit needs --map or --webapp");
                auto map = grid::read_map_file(emit_map);
                auto rc = cfg.robot;
                if (emit_c) rc.c = *emit_c;
                if (emit_cmax) rc.c_max = *emit_cmax;
                m = grid::emit_model(map, grid::dijkstra_controller(map, cfg.obstacle_penalty, rc.move_cost), rc);
            }
            write_output(emit_out, prism::print(m), out);
        } else if (*aug) {
            load(g);
            auto m = prism::parse_file(aug_in);
            urc::AugmentSpec spec;
            if (aug_preset == "robot") {
                auto values = prism::evaluate_constants(m);
                auto it = values.find("N");
                if (it == values.end()) throw UsageError("robot preset needs a constant N");
                spec = grid::robot_augment_spec(m, aug_cmax.value_or(static_cast<int>(it->second) + 1));
            } else if (aug_preset == "webapp") {
                spec = webapp::webapp_augment_spec();
            }
            if (!aug_pre.empty()) spec.pre_labels = aug_pre;
            if (!aug_post.empty()) spec.post_labels = aug_post;
            if (!aug_vars.empty()) spec.decision_vars = aug_vars;
            if (!aug_truth.empty()) spec.ground_truth_modules = aug_truth;
            spec.controlled_constant = aug_constant;
            if (aug_cmin) spec.c_min = *aug_cmin;
            if (aug_cmax) spec.c_max = *aug_cmax;
            write_output(aug_out, prism::print(urc::augment(m, spec)), out);
        } else if (*chk) {
            load(g);
            auto m = prism::parse_file(chk_in);
            if (!chk_policy.empty()) m = urc::instantiate(m, read_policy(chk_policy));
            auto bindings = parse_bindings(chk_consts);
            if (!bindings.empty()) m = prism::bind_constants(m, bindings);
            mc::BuildOptions bo;
            bo.fix_deadlocks = chk_fix;
            auto dtmc = mc::build(m, bo);
            if (!chk_export.empty()) {
                std::ofstream f(chk_export);
                if (!f) throw InputError(fmt::format("cannot write {}", chk_export));
                mc::write_explicit(dtmc, f);
            }
            for (const auto& p : chk_props) {
                auto prop = mc::Property::parse(p);
                const double v = mc::check(dtmc, prop, chk_opts);
                out << prop.to_string() << " = " << fmt::format("{:.12g}", v) << '\n';
            }
        } else if (*base) {
            auto cfg = load(g);
            auto m = prism::parse_file(base_in);
            synth::EvalOptions eo;
            eo.jobs = cfg.jobs;
            synth::Evaluator ev(m, objectives_for(base_case, base_props), eo);
            auto r = synth::baseline(ev);
            synth::ParetoFront all{ev.objectives(), r.evaluated};
            synth::save_front(all, base_out);
            out << fmt::format("{} baseline policies, {} non-dominated\n", r.evaluated.size(), r.front.size());
        } else if (*syn) {
            ExperimentConfig b;
            b.ga = synth::GaConfig{};
            auto cfg = load(g, b);
            auto m = prism::parse_file(syn_in);
            synth::EvalOptions eo;
            eo.jobs = cfg.jobs;
            synth::Evaluator ev(m, objectives_for(syn_case, syn_props), eo);
            synth::ParetoFront front;
            if (syn_exhaustive) {
                front = synth::exhaustive(ev).front;
            } else {
                auto ga = cfg.ga;
                if (syn_pop) ga.population = *syn_pop;
                if (syn_gens) ga.generations = *syn_gens;
                if (syn_cross) ga.crossover_rate = *syn_cross;
                if (syn_mut) ga.mutation_rate = *syn_mut;
                if (syn_tour) ga.tournament_size = *syn_tour;
                if (syn_seed) ga.seed = *syn_seed;
                if (syn_seed_base) ga.seed_baseline = *syn_seed_base;
                if (!syn_front.empty()) ga.front_source = syn_front == "archive" ? synth::FrontSource::Archive : synth::FrontSource::FinalPopulation;
                front = synth::nsga2(ev, ga, [](int gen, std::size_t n) { log::info("generation {}: {} non-dominated", gen, n); }).front;
            }
            synth::save_front(front, syn_out);
            out << fmt::format("{} non-dominated policies ({} model checks)\n", front.size(), ev.model_checks());
        } else if (*met) {
            auto cfg = load(g);
            std::vector<indicators::RequirementSetting> settings;
            for (const auto& s : met_settings) {
                auto comma = s.find(',');
                if (comma == std::string::npos) throw UsageError(fmt::format("--setting expects min_success,max_cost, got '{}'", s));
                try {
                    settings.push_back({std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))});
                } catch (const std::logic_error&) {
                    throw UsageError(fmt::format("--setting '{}' is not numeric", s));
                }
                indicators::validate(settings.back());
            }
            if (settings.empty()) settings = cfg.settings();
            auto bpts = indicators::to_points(synth::load_front(met_base));
            std::vector<std::vector<indicators::Point>> runs;
            for (const auto& f : met_parley) runs.push_back(indicators::to_points(synth::load_front(f)));
            std::vector<IndicatorRow> rows;
            for (const auto& s : settings) {
                auto bf = indicators::filter_by_requirements(bpts, s);
                std::vector<IndicatorRow> group;
                for (std::size_t r = 0; r < runs.size(); ++r) {
                    auto pf = indicators::filter_by_requirements(runs[r], s);
                    group.push_back({met_map, setting_label(s), static_cast<int>(r), indicators::hypervolume_2d(pf, s),
                                     indicators::hypervolume_2d(bf, s), indicators::spread(pf).value, indicators::spread(bf).value, 0.0, 1.0});
                }
                auto sig = compare(group);
                for (auto& r : group) {
                    r.u = sig[0].u;
                    r.p = sig[0].p;
                }
                rows.insert(rows.end(), group.begin(), group.end());
            }
            std::ostringstream csv;
            write_indicators_csv(rows, csv);
            write_output(met_out, csv.str(), out);
        } else if (*sel) {
            load(g);
            if (!sel_knee && !sel_ms && !sel_mc) throw UsageError("select needs a requirement or --knee");
            auto front = synth::load_front(sel_in);
            auto pts = indicators::to_points(front);
            indicators::RequirementSetting req;
            if (sel_ms) req.min_success = *sel_ms;
            if (sel_mc) req.max_cost = *sel_mc;
            std::vector<std::size_t> idx;
            std::vector<indicators::Point> kept;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                if (pts[i].success >= req.min_success && pts[i].cost <= req.max_cost) {
                    idx.push_back(i);
                    kept.push_back(pts[i]);
                }
            }
            if (kept.empty()) throw ModelError("no policy on the front satisfies the requirement");
            std::size_t chosen = idx[indicators::knee_index(kept)];
            nlohmann::json j;
            j["policy_id"] = chosen;
            for (std::size_t k = 0; k < front.objectives.size(); ++k) j["objectives"][front.objectives[k].name] = front.points[chosen].objectives[k];
            j["policy"] = front.points[chosen].policy;
            write_output(sel_out, j.dump() + "\n", out);
        } else if (*exp) {
            auto cfg = load(g);
            if (exp_out) cfg.output = *exp_out;
            if (exp_maps) cfg.maps = *exp_maps;
            if (exp_runs) cfg.runs = *exp_runs;
            if (exp_size) cfg.size = *exp_size;
            if (exp_pop) cfg.ga.population = *exp_pop;
            if (exp_gens) cfg.ga.generations = *exp_gens;
            auto rep = run_experiment(cfg);
            std::ostringstream s;
            write_summary_csv(rep.summary, s);
            out << s.str();
            if (!rep.failures.empty()) err << fmt::format("{} map(s) failed; see failures.csv\n", rep.failures.size());
        } else if (*sca) {
            auto cfg = load(g);
            auto rows = run_scale(sca_sizes, sca_seed.value_or(cfg.map_seed), cfg);
            std::ostringstream csv;
            write_scale_csv(rows, csv);
            write_output(sca_out, csv.str(), out);
        } else if (*plt) {
            load(g);
            std::vector<PlotSeries> series;
            for (const auto& f : plt_base) series.push_back({fs::path(f).stem().string(), indicators::to_points(synth::load_front(f)), Marker::Cross});
            for (const auto& f : plt_parley) series.push_back({fs::path(f).stem().string(), indicators::to_points(synth::load_front(f)), Marker::Circle});
            std::optional<indicators::RequirementSetting> req;
            if (plt_ms || plt_mc) req = indicators::RequirementSetting{plt_ms.value_or(0.0), plt_mc.value_or(std::numeric_limits<double>::infinity())};
            write_output(plt_out, emit_plot(series, req), out);
        }
    } catch (const NonConvergence& e) {
        err << "error: " << e.what() << '\n';
        return kNonConvergence;
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kModel;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kModel;
    }
    return kOk;
}

int run_cli(int argc, const char* const* argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run_cli(args, std::cout, std::cerr);
}

} // namespace parley::cli
