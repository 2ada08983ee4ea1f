#include "parley/mc/simulate.hpp"

#include <random>

#include "parley/mc/check.hpp"

namespace parley::mc {

namespace {

std::uint32_t step(const ExplicitDtmc& d, std::uint32_t s, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double r = u(rng);
    auto k = d.row_start[s];
    const auto end = d.row_start[s + 1];
    for (; k + 1 < end; ++k) {
        r -= d.probability[k];
        if (r < 0.0) break;
    }
    return d.column[k];
}

bool absorbing(const ExplicitDtmc& d, std::uint32_t s) {
    return d.row_start[s + 1] - d.row_start[s] == 1 && d.column[d.row_start[s]] == s;
}

} // namespace

std::vector<TraceStep> simulate(const ExplicitDtmc& dtmc, std::uint64_t seed, std::size_t max_steps,
                                std::string_view stop_label) {
    const std::vector<std::uint8_t>* stop = nullptr;
    if (!stop_label.empty()) {
        auto it = dtmc.labels.find(stop_label);
        if (it == dtmc.labels.end()) throw UnknownLabel(std::string(stop_label));
        stop = &it->second;
    }
    std::mt19937_64 rng(seed);
    std::vector<TraceStep> trace;
    std::uint32_t s = dtmc.initial;
    for (std::size_t i = 0; i < max_steps; ++i) {
        if (stop && (*stop)[s]) break;
        trace.push_back({s, dtmc.action_name(s)});
        s = step(dtmc, s, rng);
    }
    trace.push_back({s, {}});
    return trace;
}

RunSample sample_run(const ExplicitDtmc& dtmc, std::uint64_t seed, std::string_view target, std::string_view reward,
                     std::size_t max_steps) {
    auto lit = dtmc.labels.find(target);
    if (lit == dtmc.labels.end()) throw UnknownLabel(std::string(target));
    const std::vector<double>* rew = nullptr;
    if (!reward.empty()) {
        auto rit = dtmc.rewards.find(reward);
        if (rit == dtmc.rewards.end()) throw UnknownReward(std::string(reward));
        rew = &rit->second;
    }
    std::mt19937_64 rng(seed);
    RunSample out;
    std::uint32_t s = dtmc.initial;
    while (out.steps < max_steps) {
        if (lit->second[s]) {
            out.reached = true;
            return out;
        }
        if (absorbing(dtmc, s)) return out;
        if (rew) out.reward += (*rew)[s];
        s = step(dtmc, s, rng);
        ++out.steps;
    }
    out.reached = lit->second[s] != 0;
    return out;
}

} // namespace parley::mc
