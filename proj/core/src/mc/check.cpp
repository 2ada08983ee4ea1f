#include "parley/mc/check.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <regex>
#include <vector>

#include <fmt/format.h>

namespace parley::mc {

UnknownLabel::UnknownLabel(const std::string& name) : ModelError(fmt::format("unknown label \"{}\"", name)) {}
UnknownReward::UnknownReward(const std::string& name) : ModelError(fmt::format("unknown reward structure \"{}\"", name)) {}

Property Property::reach(std::string target, Sense sense) {
    Property p;
    p.kind = Kind::ReachProbability;
    p.target = std::move(target);
    p.sense = sense;
    return p;
}

Property Property::expected(std::string reward, std::string target, Sense sense) {
    Property p;
    p.kind = Kind::ExpectedReward;
    p.reward = std::move(reward);
    p.target = std::move(target);
    p.sense = sense;
    return p;
}

Property Property::parse(std::string_view text) {
    static const std::regex prob_re(R"(^\s*(?:(max|min)\s*:)?\s*P\s*=\s*\?\s*\[\s*F\s*\"([A-Za-z_][A-Za-z0-9_]*)\"\s*\]\s*$)");
    static const std::regex rew_re(
        R"(^\s*(?:(max|min)\s*:)?\s*R\s*\{\s*\"([A-Za-z_][A-Za-z0-9_]*)\"\s*\}\s*=\s*\?\s*\[\s*F\s*\"([A-Za-z_][A-Za-z0-9_]*)\"\s*\]\s*$)");
    std::string s(text);
    std::smatch m;
    if (std::regex_match(s, m, prob_re)) {
        Sense sense = m[1].matched && m[1] == "min" ? Sense::Minimize : Sense::Maximize;
        return reach(m[2], sense);
    }
    if (std::regex_match(s, m, rew_re)) {
        Sense sense = m[1].matched && m[1] == "max" ? Sense::Maximize : Sense::Minimize;
        return expected(m[2], m[3], sense);
    }
    throw InputError(fmt::format("cannot parse property '{}'", s));
}

std::string Property::to_string() const {
    std::string prefix = sense == Sense::Maximize ? "max:" : "min:";
    if (kind == Kind::ReachProbability) return fmt::format("{}P=?[F \"{}\"]", prefix, target);
    return fmt::format("{}R{{\"{}\"}}=?[F \"{}\"]", prefix, reward, target);
}

namespace {

struct Graph {
    std::vector<std::uint64_t> start;
    std::vector<std::uint32_t> pred;
};

Graph predecessors(const ExplicitDtmc& d) {
    const std::size_t n = d.num_states();
    Graph g;
    g.start.assign(n + 1, 0);
    for (std::size_t s = 0; s < n; ++s) {
        for (auto k = d.row_start[s]; k < d.row_start[s + 1]; ++k) {
            if (d.probability[k] > 0.0) ++g.start[d.column[k] + 1];
        }
    }
    for (std::size_t i = 0; i < n; ++i) g.start[i + 1] += g.start[i];
    g.pred.resize(g.start[n]);
    std::vector<std::uint64_t> fill(g.start.begin(), g.start.end() - 1);
    for (std::size_t s = 0; s < n; ++s) {
        for (auto k = d.row_start[s]; k < d.row_start[s + 1]; ++k) {
            if (d.probability[k] > 0.0) g.pred[fill[d.column[k]]++] = static_cast<std::uint32_t>(s);
        }
    }
    return g;
}

// Backward closure of `seed` through states where `through` holds.
std::vector<std::uint8_t> backward(const Graph& g, const std::vector<std::uint8_t>& seed,
                                   const std::vector<std::uint8_t>& through) {
    std::vector<std::uint8_t> mark = seed;
    std::vector<std::uint32_t> stack;
    for (std::size_t s = 0; s < seed.size(); ++s) {
        if (seed[s]) stack.push_back(static_cast<std::uint32_t>(s));
    }
    while (!stack.empty()) {
        auto t = stack.back();
        stack.pop_back();
        for (auto k = g.start[t]; k < g.start[t + 1]; ++k) {
            auto s = g.pred[k];
            if (!mark[s] && through[s]) {
                mark[s] = 1;
                stack.push_back(s);
            }
        }
    }
    return mark;
}

const std::vector<std::uint8_t>& target_of(const ExplicitDtmc& d, std::string_view name) {
    auto it = d.labels.find(name);
    if (it == d.labels.end()) throw UnknownLabel(std::string(name));
    return it->second;
}

struct Precomputed {
    std::vector<std::uint8_t> target;
    std::vector<std::uint8_t> reaches;  // can reach target
    std::vector<std::uint8_t> prob1;
};

Precomputed precompute(const ExplicitDtmc& d, const std::vector<std::uint8_t>& target) {
    const std::size_t n = d.num_states();
    Graph g = predecessors(d);
    Precomputed pc;
    pc.target = target;
    std::vector<std::uint8_t> all(n, 1);
    pc.reaches = backward(g, target, all);
    std::vector<std::uint8_t> zero(n), not_target(n);
    for (std::size_t s = 0; s < n; ++s) {
        zero[s] = pc.reaches[s] ? 0 : 1;
        not_target[s] = target[s] ? 0 : 1;
    }
    auto bad = backward(g, zero, not_target);
    pc.prob1.resize(n);
    for (std::size_t s = 0; s < n; ++s) pc.prob1[s] = bad[s] ? 0 : 1;
    return pc;
}

// Gauss-Seidel over `unknown` states in reverse exploration order:
// x[s] = (r[s] + sum_{t != s} P(s,t) x[t]) / (1 - P(s,s)).
void gauss_seidel(const ExplicitDtmc& d, const std::vector<std::uint8_t>& unknown, const std::vector<double>* reward,
                  std::vector<double>& x, const CheckOptions& opts, CheckStats* stats) {
    std::vector<std::uint32_t> order;
    for (std::size_t s = d.num_states(); s-- > 0;) {
        if (unknown[s]) order.push_back(static_cast<std::uint32_t>(s));
    }
    std::size_t iter = 0;
    while (!order.empty()) {
        if (iter >= opts.max_iterations) {
            throw NonConvergence(fmt::format("value iteration did not converge within {} iterations", opts.max_iterations));
        }
        ++iter;
        double delta = 0.0;
        for (auto s : order) {
            double self = 0.0;
            double acc = reward ? (*reward)[s] : 0.0;
            for (auto k = d.row_start[s]; k < d.row_start[s + 1]; ++k) {
                auto t = d.column[k];
                if (t == s) {
                    self += d.probability[k];
                } else {
                    acc += d.probability[k] * x[t];
                }
            }
            double v = self < 1.0 ? acc / (1.0 - self) : x[s];
            delta = std::max(delta, std::abs(v - x[s]));
            x[s] = v;
        }
        if (delta < opts.epsilon) break;
    }
    if (stats) stats->iterations = iter;
}

} // namespace

double prob_reach(const ExplicitDtmc& dtmc, std::string_view target, const CheckOptions& opts, CheckStats* stats) {
    const auto& t = target_of(dtmc, target);
    Precomputed pc = precompute(dtmc, t);
    const std::size_t n = dtmc.num_states();
    std::vector<double> x(n, 0.0);
    std::vector<std::uint8_t> unknown(n, 0);
    for (std::size_t s = 0; s < n; ++s) {
        if (pc.prob1[s]) {
            x[s] = 1.0;
        } else if (pc.reaches[s]) {
            unknown[s] = 1;
        }
    }
    if (stats) stats->iterations = 0;
    if (unknown[dtmc.initial]) gauss_seidel(dtmc, unknown, nullptr, x, opts, stats);
    return x[dtmc.initial];
}

double expected_reward(const ExplicitDtmc& dtmc, std::string_view reward, std::string_view target,
                       const CheckOptions& opts, CheckStats* stats) {
    auto rit = dtmc.rewards.find(reward);
    if (rit == dtmc.rewards.end()) throw UnknownReward(std::string(reward));
    const auto& t = target_of(dtmc, target);
    Precomputed pc = precompute(dtmc, t);
    if (!pc.prob1[dtmc.initial]) {
        throw DivergentReward(fmt::format("target \"{}\" is not reached with probability 1; expected reward is infinite", target));
    }
    const std::size_t n = dtmc.num_states();
    std::vector<double> x(n, 0.0);
    std::vector<std::uint8_t> unknown(n, 0);
    for (std::size_t s = 0; s < n; ++s) unknown[s] = pc.prob1[s] && !t[s] ? 1 : 0;
    if (stats) stats->iterations = 0;
    if (unknown[dtmc.initial]) gauss_seidel(dtmc, unknown, &rit->second, x, opts, stats);
    return x[dtmc.initial];
}

double check(const ExplicitDtmc& dtmc, const Property& property, const CheckOptions& opts, CheckStats* stats) {
    if (property.kind == Property::Kind::ReachProbability) return prob_reach(dtmc, property.target, opts, stats);
    return expected_reward(dtmc, property.reward, property.target, opts, stats);
}

} // namespace parley::mc
