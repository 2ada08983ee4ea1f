#pragma once

#include <cstdint>
#include <functional>

#include "parley/synth/evaluator.hpp"

namespace parley::synth {

enum class FrontSource {
    Archive,          // non-dominated over every evaluated policy of the run
    FinalPopulation,  // non-dominated members of the last population
};

struct GaConfig {
    int population = 40;
    int generations = 20;
    double crossover_rate = 0.9;
    double mutation_rate = -1.0;  // per gene; negative: 1/(policy length)
    int tournament_size = 2;
    std::uint64_t seed = 1;
    bool seed_baseline = true;  // put the uniform policies in the initial population
    FrontSource front_source = FrontSource::Archive;
};

void validate(const GaConfig& cfg);

struct GaResult {
    ParetoFront front;               // per cfg.front_source
    ParetoFront archive;             // non-dominated over all generations
    std::vector<EvaluatedPolicy> final_population;
    std::size_t evaluations = 0;     // policies submitted, including cache hits
};

/// Optional per-generation hook (generation index, current archive size).
using GaProgress = std::function<void(int, std::size_t)>;

GaResult nsga2(Evaluator& evaluator, const GaConfig& cfg, const GaProgress& progress = {});

} // namespace parley::synth
