#include "parley/indicators/indicators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "parley/util/log.hpp"

namespace parley::indicators {

void validate(const RequirementSetting& req) {
    if (!(req.min_success > 0.0 && req.min_success <= 1.0)) {
        throw InputError(fmt::format("min_success {} outside (0,1]", req.min_success));
    }
    if (!(req.max_cost > 0.0)) throw InputError(fmt::format("max_cost {} must be positive", req.max_cost));
}

std::vector<Point> to_points(const synth::ParetoFront& front) {
    if (front.objectives.size() < 2 || front.objectives[0].sense() != synth::Sense::Maximize ||
        front.objectives[1].sense() != synth::Sense::Minimize) {
        throw InputError("front needs a maximised first objective and a minimised second objective");
    }
    std::vector<Point> out;
    for (const auto& p : front.points) out.push_back({p.objectives[0], p.objectives[1]});
    return out;
}

std::vector<Point> filter_by_requirements(const std::vector<Point>& front, const RequirementSetting& req) {
    std::vector<Point> out;
    std::copy_if(front.begin(), front.end(), std::back_inserter(out),
                 [&](const Point& p) { return p.success >= req.min_success && p.cost <= req.max_cost; });
    return out;
}

synth::ParetoFront filter_by_requirements(const synth::ParetoFront& front, const RequirementSetting& req) {
    auto pts = to_points(front);
    synth::ParetoFront out;
    out.objectives = front.objectives;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (pts[i].success >= req.min_success && pts[i].cost <= req.max_cost) out.points.push_back(front.points[i]);
    }
    return out;
}

double hypervolume_2d(const std::vector<Point>& front, Point ref) {
    std::vector<Point> pts;
    for (const auto& p : front) {
        if (p.success >= ref.success && p.cost <= ref.cost) {
            pts.push_back(p);
        } else {
            log::warn("hypervolume: dropping ({}, {}) outside reference ({}, {})", p.success, p.cost, ref.success, ref.cost);
        }
    }
    std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
        return a.success != b.success ? a.success > b.success : a.cost < b.cost;
    });
    double area = 0.0;
    double best_cost = ref.cost;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        best_cost = std::min(best_cost, pts[i].cost);
        double next = i + 1 < pts.size() ? pts[i + 1].success : ref.success;
        area += (pts[i].success - next) * (ref.cost - best_cost);
    }
    return area;
}

SpreadResult spread(const std::vector<Point>& front) {
    const std::size_t n = front.size();
    if (n < 3) return {kSpreadSentinel, true};
    std::vector<Point> pts = front;
    std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
        return a.success != b.success ? a.success < b.success : a.cost < b.cost;
    });
    auto [smin, smax] = std::minmax_element(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a.success < b.success; });
    auto [cmin, cmax] = std::minmax_element(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a.cost < b.cost; });
    const double s0 = smin->success, sr = smax->success - smin->success;
    const double c0 = cmin->cost, cr = cmax->cost - cmin->cost;
    auto norm = [](double v, double lo, double range) { return range > 0.0 ? (v - lo) / range : 0.0; };
    std::vector<double> d;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double ds = norm(pts[i + 1].success, s0, sr) - norm(pts[i].success, s0, sr);
        double dc = norm(pts[i + 1].cost, c0, cr) - norm(pts[i].cost, c0, cr);
        d.push_back(std::hypot(ds, dc));
    }
    const double mean = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(d.size());
    if (mean <= 0.0) throw DegenerateFront("spread of a front whose points all coincide");
    double dev = 0.0;
    for (double x : d) dev += std::abs(x - mean);
    return {dev / (static_cast<double>(d.size()) * mean), false};
}

std::size_t knee_index(const std::vector<Point>& front) {
    if (front.empty()) throw InputError("knee point of an empty front");
    std::vector<std::size_t> order(front.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& p = front[a];
        const auto& q = front[b];
        return p.success != q.success ? p.success > q.success : p.cost < q.cost;
    });
    double smin = front[0].success, smax = smin, cmin = front[0].cost, cmax = cmin;
    for (const auto& p : front) {
        smin = std::min(smin, p.success);
        smax = std::max(smax, p.success);
        cmin = std::min(cmin, p.cost);
        cmax = std::max(cmax, p.cost);
    }
    auto ns = [&](double v) { return smax > smin ? (v - smin) / (smax - smin) : 0.0; };
    auto nc = [&](double v) { return cmax > cmin ? (v - cmin) / (cmax - cmin) : 0.0; };
    const Point& first = front[order.front()];
    const Point& last = front[order.back()];
    const double ax = ns(first.success), ay = nc(first.cost);
    const double dx = ns(last.success) - ax, dy = nc(last.cost) - ay;
    const double len = std::hypot(dx, dy);
    if (len == 0.0) return order.front();
    std::size_t best = order.front();
    double best_d = -1.0;
    for (std::size_t i : order) {
        double dist = std::abs(dx * (nc(front[i].cost) - ay) - dy * (ns(front[i].success) - ax)) / len;
        if (dist > best_d + 1e-12) {
            best_d = dist;
            best = i;
        }
    }
    return best;
}

synth::EvaluatedPolicy knee_point(const synth::ParetoFront& front) { return front.points[knee_index(to_points(front))]; }

} // namespace parley::indicators
