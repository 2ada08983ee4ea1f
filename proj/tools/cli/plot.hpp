#pragma once

#include <optional>
#include <string>
#include <vector>

#include "parley/indicators/indicators.hpp"

namespace parley::cli {

enum class Marker { Circle, Cross };

struct PlotSeries {
    std::string label;
    std::vector<indicators::Point> points;
    Marker marker = Marker::Circle;
};

/// SVG scatter of (cost, success). With a requirement, dotted lines at
/// min_success and max_cost and the rejected region shaded.
std::string emit_plot(const std::vector<PlotSeries>& series, const std::optional<indicators::RequirementSetting>& req = {});

} // namespace parley::cli
