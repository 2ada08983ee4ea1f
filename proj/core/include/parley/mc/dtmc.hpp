#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <tuple>
#include <vector>

namespace parley::mc {

/// Explicit reachable state space of a DTMC in compressed-row form.
/// Each state fires exactly one action, so rewards and the action label are
/// stored per state.
struct ExplicitDtmc {
    std::vector<std::string> variables;
    std::vector<std::int32_t> valuations;  // num_states() x variables.size()
    std::uint32_t initial = 0;

    std::vector<std::uint64_t> row_start;  // num_states() + 1
    std::vector<std::uint32_t> column;
    std::vector<double> probability;

    static constexpr std::int32_t kSelfLoop = -1;
    std::vector<std::int32_t> action;  // per state; index into action_names or kSelfLoop
    std::vector<std::string> action_names;

    std::map<std::string, std::vector<double>, std::less<>> rewards;
    std::map<std::string, std::vector<std::uint8_t>, std::less<>> labels;

    [[nodiscard]] std::size_t num_states() const noexcept { return row_start.empty() ? 0 : row_start.size() - 1; }
    [[nodiscard]] std::size_t num_transitions() const noexcept { return column.size(); }
    [[nodiscard]] std::span<const std::int32_t> state(std::size_t i) const {
        return {valuations.data() + i * variables.size(), variables.size()};
    }
    [[nodiscard]] std::string action_name(std::size_t s) const;
    [[nodiscard]] bool has_label(std::string_view name) const { return labels.find(name) != labels.end(); }
    /// `(x=1,y=0,...)`
    [[nodiscard]] std::string describe_state(std::size_t i) const;
};

struct TransitionSpec {
    std::uint32_t src;
    std::uint32_t dst;
    double prob;
    std::string action;
};

/// Assembles a chain directly from transitions, for tests and tools. States
/// are 0..n-1 with a single variable `s`. Every state must have at least
/// one outgoing transition and all of a state's transitions share one
/// action. Rewards are per source state.
ExplicitDtmc make_dtmc(std::uint32_t num_states, std::uint32_t initial, const std::vector<TransitionSpec>& transitions,
                       const std::map<std::string, std::vector<std::uint32_t>>& labels = {},
                       const std::map<std::string, std::vector<double>>& rewards = {});

/// Text export: `STATES n INITIAL i`, one `src dst prob [action]` line per
/// transition, then `LABEL name: i1 i2 ...` per label.
void write_explicit(const ExplicitDtmc& dtmc, std::ostream& out);

/// Largest |1 - row sum| over all states.
double max_row_defect(const ExplicitDtmc& dtmc);

} // namespace parley::mc
