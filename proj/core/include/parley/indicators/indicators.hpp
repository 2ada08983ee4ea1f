#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "parley/error.hpp"
#include "parley/synth/front.hpp"

namespace parley::indicators {

class DegenerateFront : public InputError {
public:
    using InputError::InputError;
};

/// Bi-objective point: success maximised, cost minimised.
struct Point {
    double success = 0.0;
    double cost = 0.0;

    bool operator==(const Point&) const = default;
};

struct RequirementSetting {
    double min_success = 0.0;
    double max_cost = std::numeric_limits<double>::infinity();

    bool operator==(const RequirementSetting&) const = default;
};

/// Throws InputError unless min_success in (0,1] and max_cost > 0.
void validate(const RequirementSetting& req);

/// First two objectives of a (maximise, minimise) front.
std::vector<Point> to_points(const synth::ParetoFront& front);

std::vector<Point> filter_by_requirements(const std::vector<Point>& front, const RequirementSetting& req);
synth::ParetoFront filter_by_requirements(const synth::ParetoFront& front, const RequirementSetting& req);

/// Area dominated by `front` up to `ref`. Points that do not weakly dominate
/// ref are dropped with a warning.
double hypervolume_2d(const std::vector<Point>& front, Point ref);
/// Hypervolume inside the acceptable region: ref = (min_success, max_cost).
inline double hypervolume_2d(const std::vector<Point>& front, const RequirementSetting& req) {
    return hypervolume_2d(front, Point{req.min_success, req.max_cost});
}

struct SpreadResult {
    double value = 1.0;
    bool sentinel = false;  // fewer than three points
};

inline constexpr double kSpreadSentinel = 1.0;

/// Diversity over consecutive points sorted by success, on min-max
/// normalised axes with the front's own extremes. Fewer than three points
/// give the sentinel; coinciding points throw DegenerateFront.
SpreadResult spread(const std::vector<Point>& front);

struct MannWhitney {
    double u = 0.0;          // statistic of sample a
    double p_two = 1.0;
    double p_less = 1.0;     // alternative: a tends to be smaller than b
    double p_greater = 1.0;  // alternative: a tends to be larger than b
    bool exact = false;
};

/// Rank-sum test with midranks. Exact permutation distribution when
/// n1*n2 <= exact_limit, else the tie-corrected normal approximation with
/// continuity correction.
MannWhitney mann_whitney_u(const std::vector<double>& a, const std::vector<double>& b, std::size_t exact_limit = 400);

/// Index of the point farthest from the chord between the extremes
/// (normalised axes). Ties go to the earliest point in success-descending
/// order. Throws InputError on an empty front.
std::size_t knee_index(const std::vector<Point>& front);
synth::EvaluatedPolicy knee_point(const synth::ParetoFront& front);

} // namespace parley::indicators
