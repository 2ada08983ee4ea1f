#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "parley/error.hpp"
#include "parley/prism/ast.hpp"

namespace parley::grid {

class EmptyCell : public ModelError {
public:
    EmptyCell(std::vector<int> state, std::string action);
    [[nodiscard]] const std::vector<int>& state() const noexcept { return state_; }
    [[nodiscard]] const std::string& action() const noexcept { return action_; }

private:
    std::vector<int> state_;
    std::string action_;
};

/// One observed step. States are valuations over a shared variable schema.
struct TraceRecord {
    std::map<std::string, int> state;
    std::string action;
    std::map<std::string, int> next;
};

/// Lines of `state_json<TAB>action<TAB>state_json`; blank lines and lines
/// starting with `#` are skipped.
std::vector<TraceRecord> read_traces(std::istream& in);
void write_traces(const std::vector<TraceRecord>& records, std::ostream& out);

struct TransitionTable {
    std::vector<std::string> variables;  // sorted schema
    std::vector<int> initial;            // source of the first record
    /// (state, action) -> next state -> observation count
    std::map<std::pair<std::vector<int>, std::string>, std::map<std::vector<int>, std::size_t>> counts;
    /// Every state seen (as source or target) paired with every action that
    /// was never observed from it.
    std::vector<std::pair<std::vector<int>, std::string>> empty_cells;

    /// Maximum-likelihood estimate; throws EmptyCell for unobserved pairs.
    [[nodiscard]] double probability(const std::vector<int>& state, const std::string& action,
                                     const std::vector<int>& next) const;
    /// Throws EmptyCell for the first unobserved (state, action) pair.
    void require_complete() const;
};

TransitionTable estimate_transitions(const std::vector<TraceRecord>& records);

/// Single-module model `Traces` with one synchronising command per observed
/// (state, action) pair. Variable ranges span the observed values; the
/// initial state is `initial` (defaults to the first record's source).
prism::Model emit_trace_model(const TransitionTable& table, const std::map<std::string, int>& initial = {});

} // namespace parley::grid
