#include "parley/synth/front.hpp"

#include <algorithm>
#include <numeric>

namespace parley::synth {

namespace {

// Positive when a is better than b on the axis.
double gain(double a, double b, Sense s) { return s == Sense::Maximize ? a - b : b - a; }

bool better_lex(const std::vector<double>& a, const std::vector<double>& b, const std::vector<Sense>& senses) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        double g = gain(a[i], b[i], senses[i]);
        if (g != 0.0) return g > 0.0;
    }
    return false;
}

} // namespace

std::vector<Objective> robot_objectives() {
    return {{"success", mc::Property::reach("goal")}, {"cost", mc::Property::expected("cost", "done")}};
}

std::vector<Objective> webapp_objectives() {
    return {{"breach", mc::Property::expected("breach", "done")}, {"action", mc::Property::expected("action", "done")}};
}

std::vector<Sense> ParetoFront::senses() const {
    std::vector<Sense> out;
    for (const auto& o : objectives) out.push_back(o.sense());
    return out;
}

bool dominates(const std::vector<double>& a, const std::vector<double>& b, const std::vector<Sense>& senses) {
    bool strict = false;
    for (std::size_t i = 0; i < senses.size(); ++i) {
        double g = gain(a[i], b[i], senses[i]);
        if (g < 0.0) return false;
        if (g > 0.0) strict = true;
    }
    return strict;
}

std::vector<std::vector<std::size_t>> fast_non_dominated_sort(const std::vector<std::vector<double>>& points,
                                                              const std::vector<Sense>& senses) {
    const std::size_t n = points.size();
    std::vector<std::vector<std::size_t>> dominated(n);
    std::vector<std::size_t> count(n, 0);
    std::vector<std::vector<std::size_t>> fronts;
    std::vector<std::size_t> current;
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = 0; q < n; ++q) {
            if (p == q) continue;
            if (dominates(points[p], points[q], senses)) {
                dominated[p].push_back(q);
            } else if (dominates(points[q], points[p], senses)) {
                ++count[p];
            }
        }
        if (count[p] == 0) current.push_back(p);
    }
    while (!current.empty()) {
        fronts.push_back(current);
        std::vector<std::size_t> next;
        for (std::size_t p : current) {
            for (std::size_t q : dominated[p]) {
                if (--count[q] == 0) next.push_back(q);
            }
        }
        std::sort(next.begin(), next.end());
        current = std::move(next);
    }
    return fronts;
}

std::vector<double> crowding_distance(const std::vector<std::vector<double>>& points, const std::vector<std::size_t>& front) {
    const std::size_t n = front.size();
    std::vector<double> dist(n, 0.0);
    if (n == 0) return dist;
    const std::size_t m = points[front[0]].size();
    std::vector<std::size_t> order(n);
    for (std::size_t axis = 0; axis < m; ++axis) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return points[front[a]][axis] < points[front[b]][axis]; });
        dist[order.front()] = kInfiniteCrowding;
        dist[order.back()] = kInfiniteCrowding;
        double lo = points[front[order.front()]][axis];
        double hi = points[front[order.back()]][axis];
        if (hi <= lo) continue;
        for (std::size_t k = 1; k + 1 < n; ++k) {
            dist[order[k]] += (points[front[order[k + 1]]][axis] - points[front[order[k - 1]]][axis]) / (hi - lo);
        }
    }
    return dist;
}

std::vector<EvaluatedPolicy> pareto_filter(const std::vector<EvaluatedPolicy>& candidates, const std::vector<Sense>& senses) {
    std::vector<std::size_t> order(candidates.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return better_lex(candidates[a].objectives, candidates[b].objectives, senses);
    });
    std::vector<EvaluatedPolicy> out;
    for (std::size_t i : order) {
        const auto& a = candidates[i].objectives;
        bool keep = std::none_of(out.begin(), out.end(), [&](const EvaluatedPolicy& k) {
            return k.objectives == a || dominates(k.objectives, a, senses);
        });
        if (keep) out.push_back(candidates[i]);
    }
    return out;
}

bool is_non_dominated(const std::vector<EvaluatedPolicy>& points, const std::vector<Sense>& senses) {
    for (const auto& a : points) {
        for (const auto& b : points) {
            if (dominates(a.objectives, b.objectives, senses)) return false;
        }
    }
    return true;
}

bool weakly_dominates_front(const std::vector<EvaluatedPolicy>& a, const std::vector<EvaluatedPolicy>& b,
                            const std::vector<Sense>& senses) {
    return std::all_of(b.begin(), b.end(), [&](const EvaluatedPolicy& q) {
        return std::any_of(a.begin(), a.end(), [&](const EvaluatedPolicy& p) {
            return p.objectives == q.objectives || dominates(p.objectives, q.objectives, senses);
        });
    });
}

} // namespace parley::synth
