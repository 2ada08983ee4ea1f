#include "parley/synth/search.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace parley::synth {

SearchSpaceTooLarge::SearchSpaceTooLarge(double size)
    : InputError(fmt::format("search space of {:.6g} policies exceeds the exhaustive cap", size)), size_(size) {}

std::vector<urc::Policy> baseline_policies(int c_max, std::size_t length) {
    if (c_max < 1) throw InputError("c_max must be at least 1");
    std::vector<urc::Policy> out;
    for (int k = 1; k <= c_max; ++k) out.emplace_back(length, k);
    return out;
}

std::vector<urc::Policy> uniform_policies(const std::vector<urc::ParamInfo>& params) {
    if (params.empty()) return {urc::Policy{}};
    int lo = params.front().low;
    int hi = params.front().high;
    for (const auto& p : params) {
        lo = std::max(lo, p.low);
        hi = std::min(hi, p.high);
    }
    std::vector<urc::Policy> out;
    for (int k = lo; k <= hi; ++k) out.emplace_back(params.size(), k);
    return out;
}

double search_space_size(const std::vector<urc::ParamInfo>& params) {
    double n = 1.0;
    for (const auto& p : params) n *= static_cast<double>(p.high) - p.low + 1.0;
    return n;
}

BaselineResult baseline(Evaluator& evaluator) {
    BaselineResult r;
    r.evaluated = evaluator.evaluate_all(uniform_policies(evaluator.params()));
    r.front.objectives = evaluator.objectives();
    r.front.points = pareto_filter(r.evaluated, evaluator.senses());
    return r;
}

ExhaustiveResult exhaustive(Evaluator& evaluator, double cap) {
    const auto& params = evaluator.params();
    const double size = search_space_size(params);
    if (size > cap) throw SearchSpaceTooLarge(size);
    std::vector<urc::Policy> all;
    all.reserve(static_cast<std::size_t>(size));
    urc::Policy cur;
    for (const auto& p : params) cur.push_back(p.low);
    for (;;) {
        all.push_back(cur);
        std::size_t i = cur.size();
        for (; i > 0; --i) {
            if (cur[i - 1] < params[i - 1].high) {
                ++cur[i - 1];
                break;
            }
            cur[i - 1] = params[i - 1].low;
        }
        if (i == 0) break;
    }
    ExhaustiveResult r;
    r.evaluated = evaluator.evaluate_all(all);
    r.front.objectives = evaluator.objectives();
    r.front.points = pareto_filter(r.evaluated, evaluator.senses());
    return r;
}

} // namespace parley::synth
