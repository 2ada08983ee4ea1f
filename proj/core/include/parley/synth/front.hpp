#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "parley/mc/check.hpp"
#include "parley/urc/augment.hpp"

namespace parley::synth {

using mc::Sense;

/// A named model-checking query; its sense orders the axis.
struct Objective {
    std::string name;
    mc::Property property;

    [[nodiscard]] Sense sense() const noexcept { return property.sense; }
    bool operator==(const Objective&) const = default;
};

/// `success` = P=?[F "goal"] (maximize), `cost` = R{"cost"}=?[F "done"] (minimize).
std::vector<Objective> robot_objectives();
/// `breach` and `action` expected rewards to "done", both minimized.
std::vector<Objective> webapp_objectives();

struct EvaluatedPolicy {
    urc::Policy policy;
    std::vector<double> objectives;
    std::size_t states = 0;
    std::size_t iterations = 0;  // summed over objectives
    bool divergent = false;      // some reward got the worst-case sentinel

    bool operator==(const EvaluatedPolicy&) const = default;
};

inline constexpr double kInfiniteCrowding = std::numeric_limits<double>::infinity();

/// a is at least as good on every axis and strictly better on one.
bool dominates(const std::vector<double>& a, const std::vector<double>& b, const std::vector<Sense>& senses);

/// Fronts of indices into `points`, best first; each front in index order.
std::vector<std::vector<std::size_t>> fast_non_dominated_sort(const std::vector<std::vector<double>>& points,
                                                              const std::vector<Sense>& senses);

/// Crowding distance of each member of `front` (indices into points), in
/// the same order. Boundary members of every axis get kInfiniteCrowding.
std::vector<double> crowding_distance(const std::vector<std::vector<double>>& points, const std::vector<std::size_t>& front);

struct ParetoFront {
    std::vector<Objective> objectives;
    std::vector<EvaluatedPolicy> points;

    [[nodiscard]] std::vector<Sense> senses() const;
    [[nodiscard]] std::size_t size() const noexcept { return points.size(); }
};

/// Non-dominated members of `candidates`; among equal objective vectors only
/// the first is kept. Output sorted by objective vector, best first on the
/// first axis.
std::vector<EvaluatedPolicy> pareto_filter(const std::vector<EvaluatedPolicy>& candidates, const std::vector<Sense>& senses);

/// True iff no member dominates another.
bool is_non_dominated(const std::vector<EvaluatedPolicy>& points, const std::vector<Sense>& senses);

/// Every point of `b` is weakly dominated by (or equal to) some point of `a`.
bool weakly_dominates_front(const std::vector<EvaluatedPolicy>& a, const std::vector<EvaluatedPolicy>& b,
                            const std::vector<Sense>& senses);

} // namespace parley::synth
