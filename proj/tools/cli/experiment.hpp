#pragma once

#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "parley/synth/front.hpp"

namespace parley::cli {

struct IndicatorRow {
    int map_id = 0;
    std::string setting;
    int run = 0;
    double hv_parley = 0.0;
    double hv_baseline = 0.0;
    double sp_parley = 0.0;
    double sp_baseline = 0.0;
    double u = 0.0;  // hypervolume test of this map and setting
    double p = 1.0;
};

/// One Mann-Whitney comparison of the per-run values against the baseline value.
struct SignificanceRow {
    int map_id = 0;
    std::string setting;
    std::string indicator;  // "hv" or "sp"
    double parley_mean = 0.0;
    double baseline = 0.0;
    double gain = 0.0;  // positive: GA better
    double u = 0.0;
    double p = 1.0;
    std::string outcome;  // better, worse or insignificant at alpha 0.05
};

struct SummaryRow {
    std::string setting;
    std::string indicator;
    int better = 0;
    int worse = 0;
    int insignificant = 0;
    double mean_gain = 0.0;
};

struct MapFailure {
    int map_id = 0;
    std::string error;
};

struct ExperimentReport {
    std::vector<IndicatorRow> indicators;
    std::vector<SignificanceRow> significance;
    std::vector<SummaryRow> summary;
    std::vector<MapFailure> failures;
};

inline constexpr double kAlpha = 0.05;

/// Significance comparisons of one map and setting from its per-run rows.
std::vector<SignificanceRow> compare(const std::vector<IndicatorRow>& runs);

/// Generates, emits and augments every map, runs the baseline and the GA,
/// scores every setting and writes the report under cfg.output when
/// `write` is set. Failing maps are logged and listed in the report.
ExperimentReport run_experiment(const ExperimentConfig& cfg, bool write = true);

void write_indicators_csv(const std::vector<IndicatorRow>& rows, std::ostream& out);
void write_significance_csv(const std::vector<SignificanceRow>& rows, std::ostream& out);
void write_summary_csv(const std::vector<SummaryRow>& rows, std::ostream& out);

struct ScaleRow {
    int n = 0;
    std::size_t states = 0;
    std::size_t transitions = 0;
    std::size_t params = 0;
    std::string search_space_power;  // e.g. 10^100
    std::string search_space;        // e.g. 1e100
    double check_o1_s = 0.0;
    double check_o2_s = 0.0;
};

/// `base^exponent` in scientific notation with three significant digits.
std::string scientific_power(int base, long exponent);

/// Builds each size's augmented model under the uniform c = n policy.
std::vector<ScaleRow> run_scale(const std::vector<int>& sizes, std::uint64_t seed, const ExperimentConfig& cfg);
void write_scale_csv(const std::vector<ScaleRow>& rows, std::ostream& out);

} // namespace parley::cli
