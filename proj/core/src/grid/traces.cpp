#include "parley/grid/traces.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <nlohmann/json.hpp>

namespace parley::grid {

EmptyCell::EmptyCell(std::vector<int> state, std::string action)
    : ModelError(fmt::format("no observations of action '{}' from state ({})", action, fmt::join(state, ","))),
      state_(std::move(state)), action_(std::move(action)) {}

namespace {

std::map<std::string, int> parse_state(const std::string& text, std::size_t line) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(fmt::format("trace line {}: {}", line, e.what()));
    }
    if (!j.is_object()) throw InputError(fmt::format("trace line {}: state must be a JSON object", line));
    std::map<std::string, int> out;
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it.value().is_boolean()) {
            out[it.key()] = it.value().get<bool>() ? 1 : 0;
        } else if (it.value().is_number_integer()) {
            out[it.key()] = it.value().get<int>();
        } else {
            throw InputError(fmt::format("trace line {}: value of '{}' must be an integer or boolean", line, it.key()));
        }
    }
    return out;
}

std::vector<std::string> keys(const std::map<std::string, int>& m) {
    std::vector<std::string> out;
    for (const auto& [k, v] : m) out.push_back(k);
    return out;
}

std::vector<int> values(const std::map<std::string, int>& m) {
    std::vector<int> out;
    for (const auto& [k, v] : m) out.push_back(v);
    return out;
}

} // namespace

std::vector<TraceRecord> read_traces(std::istream& in) {
    std::vector<TraceRecord> out;
    std::string line;
    std::size_t no = 0;
    while (std::getline(in, line)) {
        ++no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto t1 = line.find('\t');
        auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
        if (t2 == std::string::npos) throw InputError(fmt::format("trace line {}: expected three tab-separated fields", no));
        TraceRecord r;
        r.state = parse_state(line.substr(0, t1), no);
        r.action = line.substr(t1 + 1, t2 - t1 - 1);
        r.next = parse_state(line.substr(t2 + 1), no);
        out.push_back(std::move(r));
    }
    return out;
}

void write_traces(const std::vector<TraceRecord>& records, std::ostream& out) {
    for (const auto& r : records) {
        out << nlohmann::json(r.state).dump() << '\t' << r.action << '\t' << nlohmann::json(r.next).dump() << '\n';
    }
}

TransitionTable estimate_transitions(const std::vector<TraceRecord>& records) {
    TransitionTable t;
    if (records.empty()) return t;
    t.variables = keys(records.front().state);
    t.initial = values(records.front().state);
    std::set<std::vector<int>> states;
    std::set<std::string> actions;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        if (keys(r.state) != t.variables || keys(r.next) != t.variables) {
            throw InputError(fmt::format("trace record {} does not match the schema ({})", i + 1, fmt::join(t.variables, ",")));
        }
        if (r.action.empty()) throw InputError(fmt::format("trace record {} has an empty action", i + 1));
        auto s = values(r.state);
        auto n = values(r.next);
        ++t.counts[{s, r.action}][n];
        states.insert(s);
        states.insert(n);
        actions.insert(r.action);
    }
    for (const auto& s : states) {
        for (const auto& a : actions) {
            if (!t.counts.count({s, a})) t.empty_cells.emplace_back(s, a);
        }
    }
    return t;
}

double TransitionTable::probability(const std::vector<int>& state, const std::string& action, const std::vector<int>& next) const {
    auto it = counts.find({state, action});
    if (it == counts.end()) throw EmptyCell(state, action);
    std::size_t total = 0;
    for (const auto& [n, c] : it->second) total += c;
    auto nt = it->second.find(next);
    return nt == it->second.end() ? 0.0 : static_cast<double>(nt->second) / static_cast<double>(total);
}

void TransitionTable::require_complete() const {
    if (!empty_cells.empty()) throw EmptyCell(empty_cells.front().first, empty_cells.front().second);
}

prism::Model emit_trace_model(const TransitionTable& table, const std::map<std::string, int>& initial) {
    using prism::Expr;
    if (table.counts.empty()) throw InputError("no transitions to emit");
    const std::size_t nv = table.variables.size();
    std::vector<int> lo(nv, INT32_MAX), hi(nv, INT32_MIN);
    auto widen = [&](const std::vector<int>& s) {
        for (std::size_t i = 0; i < nv; ++i) {
            lo[i] = std::min(lo[i], s[i]);
            hi[i] = std::max(hi[i], s[i]);
        }
    };
    for (const auto& [key, nexts] : table.counts) {
        widen(key.first);
        for (const auto& [n, c] : nexts) widen(n);
    }
    std::vector<int> init = table.initial.empty() ? table.counts.begin()->first.first : table.initial;
    if (!initial.empty()) {
        std::vector<std::string> ks;
        for (const auto& [k, v] : initial) ks.push_back(k);
        if (ks != table.variables) throw InputError("initial state does not match the trace schema");
        init = values(initial);
        widen(init);
    }

    prism::Model m;
    prism::ModuleDef mod;
    mod.name = "Traces";
    for (std::size_t i = 0; i < nv; ++i) {
        prism::VariableDecl v;
        v.name = table.variables[i];
        v.low = Expr::integer(lo[i]);
        v.high = Expr::integer(hi[i]);
        v.init = Expr::integer(init[i]);
        mod.variables.push_back(std::move(v));
    }
    for (const auto& [key, nexts] : table.counts) {
        prism::Command cmd;
        cmd.action = key.second;
        Expr guard = Expr::boolean(true);
        for (std::size_t i = 0; i < nv; ++i) guard = guard && prism::eq(Expr::ident(table.variables[i]), Expr::integer(key.first[i]));
        cmd.guard = guard;
        std::size_t total = 0;
        for (const auto& [n, c] : nexts) total += c;
        for (const auto& [n, c] : nexts) {
            prism::Update u;
            u.probability = Expr::real(static_cast<double>(c) / static_cast<double>(total));
            for (std::size_t i = 0; i < nv; ++i) {
                if (n[i] != key.first[i]) u.assignments.push_back({table.variables[i], Expr::integer(n[i]), {}});
            }
            cmd.updates.push_back(std::move(u));
        }
        mod.commands.push_back(std::move(cmd));
    }
    m.modules.push_back(std::move(mod));
    return m;
}

} // namespace parley::grid
