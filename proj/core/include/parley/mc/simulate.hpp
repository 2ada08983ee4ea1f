#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "parley/mc/dtmc.hpp"

namespace parley::mc {

struct TraceStep {
    std::uint32_t state;
    std::string action;  // action taken from `state`; empty for a private or self-loop step

    bool operator==(const TraceStep&) const = default;
};

/// Random walk of at most `max_steps` transitions from the initial state.
/// The trace lists every visited state, so it has max_steps + 1 entries
/// unless `stop_label` (when non-empty) is hit first. The final entry's
/// action is empty.
std::vector<TraceStep> simulate(const ExplicitDtmc& dtmc, std::uint64_t seed, std::size_t max_steps,
                                std::string_view stop_label = {});

/// Summary of one sampled run, used for Monte-Carlo estimates.
struct RunSample {
    bool reached = false;
    double reward = 0.0;  // accumulated before reaching the target
    std::size_t steps = 0;
};

/// Walks until `target` holds, an absorbing state is entered, or
/// `max_steps` is exhausted. `reward` may be empty.
RunSample sample_run(const ExplicitDtmc& dtmc, std::uint64_t seed, std::string_view target, std::string_view reward,
                     std::size_t max_steps);

} // namespace parley::mc
