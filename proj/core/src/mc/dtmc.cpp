#include "parley/mc/dtmc.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "parley/error.hpp"

namespace parley::mc {

std::string ExplicitDtmc::action_name(std::size_t s) const {
    std::int32_t a = action[s];
    return a == kSelfLoop ? std::string{} : action_names[static_cast<std::size_t>(a)];
}

std::string ExplicitDtmc::describe_state(std::size_t i) const {
    std::string s = "(";
    auto vals = state(i);
    for (std::size_t v = 0; v < variables.size(); ++v) {
        if (v) s += ',';
        s += fmt::format("{}={}", variables[v], vals[v]);
    }
    return s + ")";
}

ExplicitDtmc make_dtmc(std::uint32_t num_states, std::uint32_t initial, const std::vector<TransitionSpec>& transitions,
                       const std::map<std::string, std::vector<std::uint32_t>>& labels,
                       const std::map<std::string, std::vector<double>>& rewards) {
    if (initial >= num_states) throw InputError("initial state out of range");
    ExplicitDtmc d;
    d.variables = {"s"};
    d.initial = initial;
    for (std::uint32_t i = 0; i < num_states; ++i) d.valuations.push_back(static_cast<std::int32_t>(i));

    std::vector<std::vector<const TransitionSpec*>> rows(num_states);
    for (const auto& t : transitions) {
        if (t.src >= num_states || t.dst >= num_states) throw InputError("transition endpoint out of range");
        rows[t.src].push_back(&t);
    }
    d.row_start.push_back(0);
    for (std::uint32_t s = 0; s < num_states; ++s) {
        if (rows[s].empty()) throw InputError(fmt::format("state {} has no outgoing transition", s));
        const std::string& act = rows[s].front()->action;
        auto it = std::find(d.action_names.begin(), d.action_names.end(), act);
        if (it == d.action_names.end()) {
            d.action_names.push_back(act);
            it = d.action_names.end() - 1;
        }
        d.action.push_back(static_cast<std::int32_t>(it - d.action_names.begin()));
        std::sort(rows[s].begin(), rows[s].end(), [](auto* a, auto* b) { return a->dst < b->dst; });
        for (const auto* t : rows[s]) {
            if (t->action != act) throw InputError(fmt::format("state {} mixes actions", s));
            if (d.column.size() > d.row_start.back() && d.column.back() == t->dst) {
                d.probability.back() += t->prob;
            } else {
                d.column.push_back(t->dst);
                d.probability.push_back(t->prob);
            }
        }
        d.row_start.push_back(d.column.size());
    }
    for (const auto& [name, states] : labels) {
        auto& bits = d.labels[name];
        bits.assign(num_states, 0);
        for (auto s : states) bits.at(s) = 1;
    }
    for (const auto& [name, values] : rewards) {
        if (values.size() != num_states) throw InputError(fmt::format("reward \"{}\" needs {} values", name, num_states));
        d.rewards[name] = values;
    }
    return d;
}

void write_explicit(const ExplicitDtmc& dtmc, std::ostream& out) {
    out << fmt::format("STATES {} INITIAL {}\n", dtmc.num_states(), dtmc.initial);
    for (std::size_t s = 0; s < dtmc.num_states(); ++s) {
        std::string act = dtmc.action_name(s);
        for (auto k = dtmc.row_start[s]; k < dtmc.row_start[s + 1]; ++k) {
            if (act.empty()) {
                out << fmt::format("{} {} {}\n", s, dtmc.column[k], dtmc.probability[k]);
            } else {
                out << fmt::format("{} {} {} {}\n", s, dtmc.column[k], dtmc.probability[k], act);
            }
        }
    }
    for (const auto& [name, bits] : dtmc.labels) {
        out << "LABEL " << name << ':';
        for (std::size_t s = 0; s < bits.size(); ++s) {
            if (bits[s]) out << ' ' << s;
        }
        out << '\n';
    }
}

double max_row_defect(const ExplicitDtmc& dtmc) {
    double worst = 0.0;
    for (std::size_t s = 0; s < dtmc.num_states(); ++s) {
        double sum = 0.0;
        for (auto k = dtmc.row_start[s]; k < dtmc.row_start[s + 1]; ++k) sum += dtmc.probability[k];
        worst = std::max(worst, std::abs(1.0 - sum));
    }
    return worst;
}

} // namespace parley::mc
