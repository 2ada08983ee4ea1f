#include "config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>

#include "parley/error.hpp"

namespace parley::cli {

namespace pt = boost::property_tree;

synth::GaConfig ExperimentConfig::default_ga() {
    synth::GaConfig ga;
    ga.seed_baseline = false;
    ga.front_source = synth::FrontSource::FinalPopulation;
    return ga;
}

std::vector<indicators::RequirementSetting> ExperimentConfig::settings() const {
    std::vector<indicators::RequirementSetting> out;
    for (double s : min_success) {
        for (double c : max_cost) out.push_back({s, c});
    }
    return out;
}

void validate(const ExperimentConfig& cfg) {
    if (cfg.maps < 1) throw InputError("maps must be at least 1");
    if (cfg.size < 3) throw InputError("size must be at least 3");
    if (cfg.runs < 1) throw InputError("runs must be at least 1");
    if (cfg.c_max < 0) throw InputError("c_max must be non-negative");
    if (cfg.min_success.empty() || cfg.max_cost.empty()) throw InputError("requirement grid is empty");
    for (const auto& s : cfg.settings()) indicators::validate(s);
    if (cfg.obstacle_penalty < 0.0) throw InputError("obstacle_penalty must be non-negative");
    synth::validate(cfg.ga);
    grid::validate(cfg.robot);
    webapp::validate(cfg.webapp);
}

std::uint64_t run_seed(const ExperimentConfig& cfg, int map, int run) {
    return cfg.ga.seed + 1000ull * static_cast<std::uint64_t>(map) + static_cast<std::uint64_t>(run);
}

std::string setting_label(const indicators::RequirementSetting& s) { return fmt::format("{}/{}", s.min_success, s.max_cost); }

namespace {

std::vector<double> parse_list(const std::string& key, const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto b = item.find_first_not_of(" \t");
        auto e = item.find_last_not_of(" \t");
        if (b == std::string::npos) throw InputError(fmt::format("{}: empty list element", key));
        try {
            std::size_t used = 0;
            std::string t = item.substr(b, e - b + 1);
            out.push_back(std::stod(t, &used));
            if (used != t.size()) throw std::invalid_argument(t);
        } catch (const std::logic_error&) {
            throw InputError(fmt::format("{}: '{}' is not a number", key, item));
        }
    }
    return out;
}

std::vector<double> parse_rates(const std::string& key, const std::string& text) {
    if (text.find_first_not_of(" \t") == std::string::npos) return {};
    return parse_list(key, text);
}

class Reader {
public:
    Reader(const pt::ptree& tree, std::string section) : section_(std::move(section)) {
        if (auto child = tree.get_child_optional(section_)) node_ = *child;
    }

    template <typename T>
    void get(const char* key, T& out) {
        used_.insert(key);
        auto v = node_.get_optional<std::string>(key);
        if (!v) return;
        try {
            out = parse<T>(*v);
        } catch (const InputError&) {
            throw;
        } catch (const std::exception&) {
            throw InputError(fmt::format("[{}] {}: invalid value '{}'", section_, key, *v));
        }
    }

    void list(const char* key, std::vector<double>& out, bool allow_empty = false) {
        used_.insert(key);
        if (auto v = node_.get_optional<std::string>(key)) {
            out = allow_empty ? parse_rates(section_ + "." + key, *v) : parse_list(section_ + "." + key, *v);
        }
    }

    void finish() const {
        for (const auto& [k, v] : node_) {
            if (!used_.count(k)) throw InputError(fmt::format("unknown key '{}' in section [{}]", k, section_));
        }
    }

private:
    template <typename T>
    static T parse(const std::string& s) {
        if constexpr (std::is_same_v<T, bool>) {
            if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
            if (s == "false" || s == "0" || s == "no" || s == "off") return false;
            throw std::invalid_argument(s);
        } else if constexpr (std::is_same_v<T, std::string>) {
            return s;
        } else {
            std::istringstream in(s);
            T v{};
            in >> v;
            if (!in || !(in >> std::ws).eof()) throw std::invalid_argument(s);
            return v;
        }
    }

    std::string section_;
    pt::ptree node_;
    std::set<std::string> used_;
};

} // namespace

ExperimentConfig parse_config(const std::string& text, ExperimentConfig cfg) {
    pt::ptree tree;
    std::istringstream in(text);
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw InputError(fmt::format("config line {}: {}", e.line(), e.message()));
    }
    static const std::set<std::string> sections{"experiment", "ga", "requirements", "robot", "webapp"};
    for (const auto& [k, v] : tree) {
        if (!sections.count(k)) throw InputError(fmt::format("unknown config section [{}]", k));
    }

    Reader ex(tree, "experiment");
    ex.get("maps", cfg.maps);
    ex.get("size", cfg.size);
    ex.get("map_seed", cfg.map_seed);
    ex.get("sigma", cfg.sigma);
    ex.get("runs", cfg.runs);
    ex.get("c_max", cfg.c_max);
    ex.get("output", cfg.output);
    ex.get("jobs", cfg.jobs);
    ex.get("log_level", cfg.log_level);
    ex.finish();

    Reader ga(tree, "ga");
    ga.get("population", cfg.ga.population);
    ga.get("generations", cfg.ga.generations);
    ga.get("crossover_rate", cfg.ga.crossover_rate);
    ga.get("mutation_rate", cfg.ga.mutation_rate);
    ga.get("tournament_size", cfg.ga.tournament_size);
    ga.get("seed", cfg.ga.seed);
    ga.get("seed_baseline", cfg.ga.seed_baseline);
    std::string front = cfg.ga.front_source == synth::FrontSource::Archive ? "archive" : "final";
    ga.get("front", front);
    if (front == "archive") {
        cfg.ga.front_source = synth::FrontSource::Archive;
    } else if (front == "final") {
        cfg.ga.front_source = synth::FrontSource::FinalPopulation;
    } else {
        throw InputError(fmt::format("[ga] front: expected 'archive' or 'final', got '{}'", front));
    }
    ga.finish();

    Reader rq(tree, "requirements");
    rq.list("min_success", cfg.min_success);
    rq.list("max_cost", cfg.max_cost);
    rq.finish();

    Reader rb(tree, "robot");
    rb.get("p", cfg.robot.p);
    rb.get("move_cost", cfg.robot.move_cost);
    rb.get("localisation_cost", cfg.robot.localisation_cost);
    rb.get("obstacle_penalty", cfg.obstacle_penalty);
    rb.finish();

    Reader wa(tree, "webapp");
    auto& w = cfg.webapp;
    wa.get("confidence_levels", w.confidence_levels);
    wa.get("cost_levels", w.cost_levels);
    wa.get("horizon", w.horizon);
    wa.get("attack_probability", w.attack_probability);
    wa.get("propagation_probability", w.propagation_probability);
    wa.list("true_positive", w.true_positive, true);
    wa.list("false_positive", w.false_positive, true);
    wa.get("staleness_levels", w.staleness_levels);
    wa.get("rule_update_probability", w.rule_update_probability);
    wa.get("staleness_decay", w.staleness_decay);
    wa.get("alert_threshold", w.alert_threshold);
    wa.get("restore_a", w.restore_a);
    wa.get("restore_ab", w.restore_ab);
    wa.get("breach_penalty", w.breach_penalty);
    wa.get("scan_a", w.scan_a);
    wa.finish();

    validate(cfg);
    return cfg;
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
    std::ifstream in(path);
    if (!in) throw InputError(fmt::format("cannot read config {}", path));
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), std::move(base));
}

std::string to_ini(const ExperimentConfig& c) {
    std::string s;
    s += "[experiment]\n";
    s += fmt::format("maps = {}\nsize = {}\nmap_seed = {}\nsigma = {}\nruns = {}\nc_max = {}\noutput = {}\njobs = {}\nlog_level = {}\n\n",
                     c.maps, c.size, c.map_seed, c.sigma, c.runs, c.c_max, c.output, c.jobs, c.log_level);
    s += "[ga]\n";
    s += fmt::format("population = {}\ngenerations = {}\ncrossover_rate = {}\nmutation_rate = {}\ntournament_size = {}\nseed = {}\n",
                     c.ga.population, c.ga.generations, c.ga.crossover_rate, c.ga.mutation_rate, c.ga.tournament_size, c.ga.seed);
    s += fmt::format("seed_baseline = {}\nfront = {}\n\n", c.ga.seed_baseline,
                     c.ga.front_source == synth::FrontSource::Archive ? "archive" : "final");
    s += "[requirements]\n";
    s += fmt::format("min_success = {}\nmax_cost = {}\n\n", fmt::join(c.min_success, ", "), fmt::join(c.max_cost, ", "));
    s += "[robot]\n";
    s += fmt::format("p = {}\nmove_cost = {}\nlocalisation_cost = {}\nobstacle_penalty = {}\n\n", c.robot.p, c.robot.move_cost,
                     c.robot.localisation_cost, c.obstacle_penalty);
    const auto& w = c.webapp;
    s += "[webapp]\n";
    s += fmt::format("confidence_levels = {}\ncost_levels = {}\nhorizon = {}\nattack_probability = {}\npropagation_probability = {}\n",
                     w.confidence_levels, w.cost_levels, w.horizon, w.attack_probability, w.propagation_probability);
    s += fmt::format("true_positive = {}\nfalse_positive = {}\n", fmt::join(w.true_positive, ", "), fmt::join(w.false_positive, ", "));
    s += fmt::format("staleness_levels = {}\nrule_update_probability = {}\nstaleness_decay = {}\nalert_threshold = {}\n",
                     w.staleness_levels, w.rule_update_probability, w.staleness_decay, w.alert_threshold);
    s += fmt::format("restore_a = {}\nrestore_ab = {}\nbreach_penalty = {}\nscan_a = {}\n", w.restore_a, w.restore_ab,
                     w.breach_penalty, w.scan_a);
    return s;
}

} // namespace parley::cli
