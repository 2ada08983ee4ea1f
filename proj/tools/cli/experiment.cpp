#include "experiment.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>

#include <fmt/format.h>
#include <fmt/os.h>

#include "parley/grid/controller.hpp"
#include "parley/grid/emit.hpp"
#include "parley/grid/map.hpp"
#include "parley/mc/build.hpp"
#include "parley/mc/check.hpp"
#include "parley/prism/printer.hpp"
#include "parley/synth/front_io.hpp"
#include "parley/synth/search.hpp"
#include "parley/urc/augment.hpp"
#include "parley/util/log.hpp"
#include "parley/util/parallel.hpp"

namespace parley::cli {

namespace fs = std::filesystem;

namespace {

struct MapResult {
    bool ok = false;
    std::string error;
    synth::ParetoFront baseline;
    std::vector<synth::ParetoFront> runs;
};

std::string map_name(int i) { return fmt::format("map_{:03d}", i); }

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw InputError(fmt::format("cannot write {}", path.string()));
    out << text;
}

MapResult run_map(const ExperimentConfig& cfg, int i, int inner_jobs, bool write) {
    MapResult r;
    try {
        const std::uint64_t seed = cfg.map_seed + static_cast<std::uint64_t>(i);
        auto map = grid::generate_map(cfg.size, seed, cfg.sigma);
        auto controller = grid::dijkstra_controller(map, cfg.obstacle_penalty, cfg.robot.move_cost);
        auto model = grid::emit_model(map, controller, cfg.robot);
        auto pmodel = urc::augment(model, grid::robot_augment_spec(model, cfg.effective_c_max()));
        const fs::path out(cfg.output);
        if (write) {
            grid::write_map_file(map, (out / "maps" / (map_name(i) + ".txt")).string());
            write_text(out / "models" / (map_name(i) + ".prism"), prism::print(pmodel));
        }
        synth::EvalOptions eo;
        eo.jobs = inner_jobs;
        synth::Evaluator ev(pmodel, synth::robot_objectives(), eo);
        r.baseline = synth::baseline(ev).front;
        if (write) synth::save_front(r.baseline, (out / "fronts" / (map_name(i) + "_baseline.csv")).string());
        for (int run = 0; run < cfg.runs; ++run) {
            synth::GaConfig ga = cfg.ga;
            ga.seed = run_seed(cfg, i, run);
            log::info("{} run {} seed {}", map_name(i), run, ga.seed);
            r.runs.push_back(synth::nsga2(ev, ga).front);
            if (write) synth::save_front(r.runs.back(), (out / "fronts" / fmt::format("{}_run_{}.csv", map_name(i), run)).string());
        }
        r.ok = true;
    } catch (const std::exception& e) {
        r.error = e.what();
        log::error("{} failed: {}", map_name(i), r.error);
    }
    return r;
}

std::string outcome(double gain, double p) {
    if (p < kAlpha && gain > 0.0) return "better";
    if (p < kAlpha && gain < 0.0) return "worse";
    return "insignificant";
}

} // namespace

std::vector<SignificanceRow> compare(const std::vector<IndicatorRow>& runs) {
    std::vector<SignificanceRow> out;
    if (runs.empty()) return out;
    for (const char* ind : {"hv", "sp"}) {
        const bool hv = std::string_view(ind) == "hv";
        std::vector<double> a, b;
        for (const auto& r : runs) {
            a.push_back(hv ? r.hv_parley : r.sp_parley);
            b.push_back(hv ? r.hv_baseline : r.sp_baseline);
        }
        auto mw = indicators::mann_whitney_u(a, b);
        SignificanceRow s;
        s.map_id = runs.front().map_id;
        s.setting = runs.front().setting;
        s.indicator = ind;
        for (double v : a) s.parley_mean += v;
        s.parley_mean /= static_cast<double>(a.size());
        s.baseline = b.front();
        s.gain = hv ? s.parley_mean - s.baseline : s.baseline - s.parley_mean;
        s.u = mw.u;
        s.p = mw.p_two;
        s.outcome = outcome(s.gain, s.p);
        out.push_back(s);
    }
    return out;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg, bool write) {
    validate(cfg);
    const fs::path out(cfg.output);
    if (write) {
        for (const char* d : {"maps", "models", "fronts"}) fs::create_directories(out / d);
        write_text(out / "config.ini", to_ini(cfg));
    }
    const int jobs = cfg.jobs > 0 ? cfg.jobs : util::default_jobs();
    const int outer = std::min(jobs, cfg.maps);
    const int inner = outer > 1 ? 1 : jobs;
    std::vector<MapResult> results(static_cast<std::size_t>(cfg.maps));
    util::parallel_for(results.size(), outer, [&](std::size_t i) { results[i] = run_map(cfg, static_cast<int>(i), inner, write); });

    ExperimentReport rep;
    std::map<std::pair<std::string, std::string>, SummaryRow> summary;
    const auto settings = cfg.settings();
    for (const auto& s : settings) {
        for (const char* ind : {"hv", "sp"}) summary[{setting_label(s), ind}] = {setting_label(s), ind, 0, 0, 0, 0.0};
    }
    int scored = 0;
    for (int i = 0; i < cfg.maps; ++i) {
        const auto& mr = results[static_cast<std::size_t>(i)];
        if (!mr.ok) {
            rep.failures.push_back({i, mr.error});
            continue;
        }
        ++scored;
        auto base_pts = indicators::to_points(mr.baseline);
        for (const auto& s : settings) {
            auto bf = indicators::filter_by_requirements(base_pts, s);
            const double hv_b = indicators::hypervolume_2d(bf, s);
            const double sp_b = indicators::spread(bf).value;
            std::vector<IndicatorRow> rows;
            for (int run = 0; run < cfg.runs; ++run) {
                auto pf = indicators::filter_by_requirements(indicators::to_points(mr.runs[static_cast<std::size_t>(run)]), s);
                rows.push_back({i, setting_label(s), run, indicators::hypervolume_2d(pf, s), hv_b, indicators::spread(pf).value, sp_b, 0.0, 1.0});
            }
            auto sig = compare(rows);
            for (auto& r : rows) {
                r.u = sig[0].u;
                r.p = sig[0].p;
            }
            rep.indicators.insert(rep.indicators.end(), rows.begin(), rows.end());
            for (const auto& sr : sig) {
                auto& agg = summary[{sr.setting, sr.indicator}];
                if (sr.outcome == "better") ++agg.better;
                else if (sr.outcome == "worse") ++agg.worse;
                else ++agg.insignificant;
                agg.mean_gain += sr.gain;
                rep.significance.push_back(sr);
            }
        }
    }
    for (const auto& s : settings) {
        for (const char* ind : {"hv", "sp"}) {
            auto row = summary[{setting_label(s), ind}];
            if (scored > 0) row.mean_gain /= scored;
            rep.summary.push_back(row);
        }
    }

    if (write) {
        std::ofstream ind(out / "indicators.csv");
        write_indicators_csv(rep.indicators, ind);
        std::ofstream sig(out / "significance.csv");
        write_significance_csv(rep.significance, sig);
        std::ofstream sum(out / "summary.csv");
        write_summary_csv(rep.summary, sum);
        std::ofstream fail(out / "failures.csv");
        fail << "map_id,error\n";
        for (const auto& f : rep.failures) {
            std::string e = f.error;
            std::replace(e.begin(), e.end(), ',', ';');
            std::replace(e.begin(), e.end(), '\n', ' ');
            fail << f.map_id << ',' << e << '\n';
        }
    }
    return rep;
}

void write_indicators_csv(const std::vector<IndicatorRow>& rows, std::ostream& out) {
    out << "map_id,setting,run,hv_parley,hv_baseline,sp_parley,sp_baseline,u,p\n";
    for (const auto& r : rows) {
        out << fmt::format("{},{},{},{},{},{},{},{},{}\n", r.map_id, r.setting, r.run, r.hv_parley, r.hv_baseline, r.sp_parley,
                           r.sp_baseline, r.u, r.p);
    }
}

void write_significance_csv(const std::vector<SignificanceRow>& rows, std::ostream& out) {
    out << "map_id,setting,indicator,parley_mean,baseline,gain,u,p,outcome\n";
    for (const auto& r : rows) {
        out << fmt::format("{},{},{},{},{},{},{},{},{}\n", r.map_id, r.setting, r.indicator, r.parley_mean, r.baseline, r.gain,
                           r.u, r.p, r.outcome);
    }
}

void write_summary_csv(const std::vector<SummaryRow>& rows, std::ostream& out) {
    out << "setting,indicator,better,worse,insignificant,mean_gain\n";
    for (const auto& r : rows) {
        out << fmt::format("{},{},{},{},{},{}\n", r.setting, r.indicator, r.better, r.worse, r.insignificant, r.mean_gain);
    }
}

std::string scientific_power(int base, long exponent) {
    const double lg = static_cast<double>(exponent) * std::log10(static_cast<double>(base));
    double e = std::floor(lg);
    double mant = std::pow(10.0, lg - e);
    std::string m = fmt::format("{:.3g}", mant);
    if (m == "10") {
        m = "1";
        e += 1;
    }
    return fmt::format("{}e{}", m, static_cast<long>(e));
}

std::vector<ScaleRow> run_scale(const std::vector<int>& sizes, std::uint64_t seed, const ExperimentConfig& cfg) {
    std::vector<ScaleRow> rows;
    for (int n : sizes) {
        auto map = grid::generate_map(n, seed, cfg.sigma);
        auto controller = grid::dijkstra_controller(map, cfg.obstacle_penalty, cfg.robot.move_cost);
        auto model = grid::emit_model(map, controller, cfg.robot);
        auto pmodel = urc::augment(model, grid::robot_augment_spec(model, n));
        auto params = urc::enumerate_params(pmodel);
        mc::CompiledModel cm(pmodel);
        std::vector<double> values(params.size(), static_cast<double>(n));
        auto dtmc = cm.build(values);
        ScaleRow r;
        r.n = n;
        r.states = dtmc.num_states();
        r.transitions = dtmc.num_transitions();
        r.params = params.size();
        r.search_space_power = fmt::format("{}^{}", n, params.size());
        r.search_space = scientific_power(n, static_cast<long>(params.size()));
        auto objs = synth::robot_objectives();
        auto time = [&](const mc::Property& prop) {
            auto t0 = std::chrono::steady_clock::now();
            (void)mc::check(dtmc, prop);
            return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        };
        r.check_o1_s = time(objs[0].property);
        r.check_o2_s = time(objs[1].property);
        log::info("scale n={} states={} transitions={}", n, r.states, r.transitions);
        rows.push_back(r);
    }
    return rows;
}

void write_scale_csv(const std::vector<ScaleRow>& rows, std::ostream& out) {
    out << "n,states,transitions,params,search_space_power,search_space,check_o1_s,check_o2_s\n";
    for (const auto& r : rows) {
        out << fmt::format("{},{},{},{},{},{},{:.6f},{:.6f}\n", r.n, r.states, r.transitions, r.params, r.search_space_power,
                           r.search_space, r.check_o1_s, r.check_o2_s);
    }
}

} // namespace parley::cli
