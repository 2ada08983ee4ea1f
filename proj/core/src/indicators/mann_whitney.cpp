#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "parley/indicators/indicators.hpp"

namespace parley::indicators {

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Counts of subsets of size k by their sum of doubled ranks.
std::vector<double> subset_sum_counts(const std::vector<long>& values, std::size_t k) {
    long total = std::accumulate(values.begin(), values.end(), 0L);
    std::vector<std::vector<double>> dp(k + 1, std::vector<double>(static_cast<std::size_t>(total) + 1, 0.0));
    dp[0][0] = 1.0;
    for (long v : values) {
        for (std::size_t j = k; j >= 1; --j) {
            for (long s = total; s >= v; --s) {
                dp[j][static_cast<std::size_t>(s)] += dp[j - 1][static_cast<std::size_t>(s - v)];
            }
        }
    }
    return dp[k];
}

} // namespace

MannWhitney mann_whitney_u(const std::vector<double>& a, const std::vector<double>& b, std::size_t exact_limit) {
    if (a.empty() || b.empty()) throw InputError("Mann-Whitney U needs two non-empty samples");
    const std::size_t n1 = a.size(), n2 = b.size(), n = n1 + n2;
    std::vector<std::pair<double, int>> all;
    for (double v : a) all.emplace_back(v, 0);
    for (double v : b) all.emplace_back(v, 1);
    std::sort(all.begin(), all.end(), [](const auto& x, const auto& y) { return x.first < y.first; });

    // doubled midranks
    std::vector<long> rank2(n);
    std::vector<std::size_t> ties;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && all[j].first == all[i].first) ++j;
        long r2 = static_cast<long>(i + 1 + j);
        for (std::size_t k = i; k < j; ++k) rank2[k] = r2;
        ties.push_back(j - i);
        i = j;
    }
    long ra2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (all[i].second == 0) ra2 += rank2[i];
    }
    const double base = static_cast<double>(n1) * static_cast<double>(n1 + 1) / 2.0;
    MannWhitney r;
    r.u = static_cast<double>(ra2) / 2.0 - base;
    const double mu = static_cast<double>(n1) * static_cast<double>(n2) / 2.0;

    if (n1 * n2 <= exact_limit) {
        r.exact = true;
        const bool use_a = n1 <= n2;
        const std::size_t k = use_a ? n1 : n2;
        const long total2 = std::accumulate(rank2.begin(), rank2.end(), 0L);
        auto counts = subset_sum_counts(rank2, k);
        double all_ways = std::accumulate(counts.begin(), counts.end(), 0.0);
        double le = 0.0, ge = 0.0;
        for (std::size_t s = 0; s < counts.size(); ++s) {
            if (counts[s] == 0.0) continue;
            long sa = use_a ? static_cast<long>(s) : total2 - static_cast<long>(s);
            if (sa <= ra2) le += counts[s];
            if (sa >= ra2) ge += counts[s];
        }
        r.p_less = le / all_ways;
        r.p_greater = ge / all_ways;
    } else {
        double tie_term = 0.0;
        for (std::size_t t : ties) tie_term += std::pow(static_cast<double>(t), 3) - static_cast<double>(t);
        const double nn = static_cast<double>(n);
        const double var = static_cast<double>(n1) * static_cast<double>(n2) / 12.0 * ((nn + 1.0) - tie_term / (nn * (nn - 1.0)));
        if (var <= 0.0) {
            r.p_less = r.p_greater = 1.0;
        } else {
            const double sd = std::sqrt(var);
            r.p_less = std::min(1.0, normal_cdf((r.u + 0.5 - mu) / sd));
            r.p_greater = std::min(1.0, 1.0 - normal_cdf((r.u - 0.5 - mu) / sd));
        }
    }
    r.p_two = std::min(1.0, 2.0 * std::min(r.p_less, r.p_greater));
    return r;
}

} // namespace parley::indicators
