#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "parley/grid/emit.hpp"
#include "parley/indicators/indicators.hpp"
#include "parley/synth/nsga2.hpp"
#include "parley/webapp/webapp.hpp"

namespace parley::cli {

struct ExperimentConfig {
    int maps = 10;
    int size = 10;
    std::uint64_t map_seed = 1;  // map i uses map_seed + i
    double sigma = 1.0;
    int runs = 3;
    int c_max = 0;  // 0: size
    std::vector<double> min_success{0.6, 0.7, 0.8};
    std::vector<double> max_cost{100.0, 80.0, 60.0};
    std::string output = "results";
    int jobs = 0;
    synth::GaConfig ga = default_ga();
    grid::RobotModelCfg robot;
    double obstacle_penalty = 2.0;
    webapp::WebAppCfg webapp;
    std::string log_level = "warn";

    static synth::GaConfig default_ga();
    [[nodiscard]] int effective_c_max() const { return c_max > 0 ? c_max : size; }
    /// min_success x max_cost, min_success outermost.
    [[nodiscard]] std::vector<indicators::RequirementSetting> settings() const;
};

void validate(const ExperimentConfig& cfg);

/// INI file with sections [experiment], [ga], [requirements], [robot] and
/// [webapp]. Unknown sections or keys throw InputError.
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {});
ExperimentConfig parse_config(const std::string& text, ExperimentConfig base = {});
/// The configuration as INI text that parse_config reads back unchanged.
std::string to_ini(const ExperimentConfig& cfg);

/// GA seed of run r on map m.
std::uint64_t run_seed(const ExperimentConfig& cfg, int map, int run);

std::string setting_label(const indicators::RequirementSetting& s);

} // namespace parley::cli
