#include "plot.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace parley::cli {

namespace {

constexpr double kWidth = 640, kHeight = 480;
constexpr double kLeft = 70, kRight = 20, kTop = 20, kBottom = 60;

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

double nice_ceiling(double v) {
    if (v <= 0.0) return 1.0;
    double mag = std::pow(10.0, std::floor(std::log10(v)));
    for (double step : {1.0, 2.0, 2.5, 5.0, 10.0}) {
        if (step * mag >= v) return step * mag;
    }
    return 10.0 * mag;
}

} // namespace

std::string emit_plot(const std::vector<PlotSeries>& series, const std::optional<indicators::RequirementSetting>& req) {
    double xmax = 0.0;
    for (const auto& s : series) {
        for (const auto& p : s.points) xmax = std::max(xmax, p.cost);
    }
    if (req && std::isfinite(req->max_cost)) xmax = std::max(xmax, req->max_cost);
    xmax = xmax > 0.0 ? nice_ceiling(xmax * 1.05) : 100.0;
    const double ymax = 1.0;
    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    auto X = [&](double cost) { return kLeft + cost / xmax * pw; };
    auto Y = [&](double success) { return kTop + (1.0 - success / ymax) * ph; };

    std::string s = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n", kWidth, kHeight, kWidth, kHeight);
    s += fmt::format("<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>\n", kWidth, kHeight);
    if (req) {
        const double xr = std::isfinite(req->max_cost) ? std::min(X(req->max_cost), kLeft + pw) : kLeft + pw;
        const double yr = Y(req->min_success);
        s += "<g class=\"rejected\" fill=\"#cccccc\" fill-opacity=\"0.5\" stroke=\"none\">\n";
        s += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\"/>\n", kLeft, yr, pw, kTop + ph - yr);
        if (xr < kLeft + pw) s += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\"/>\n", xr, kTop, kLeft + pw - xr, yr - kTop);
        s += "</g>\n";
        s += fmt::format("<line class=\"req-success\" x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"black\" stroke-dasharray=\"2,3\"/>\n",
                         kLeft, yr, kLeft + pw, yr);
        if (std::isfinite(req->max_cost) && xr <= kLeft + pw) {
            s += fmt::format("<line class=\"req-cost\" x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"black\" stroke-dasharray=\"2,3\"/>\n",
                             xr, kTop, xr, kTop + ph);
        }
    }
    s += fmt::format("<g class=\"axes\" stroke=\"black\"><line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\"/><line x1=\"{0}\" y1=\"{3}\" x2=\"{0}\" y2=\"{1}\"/></g>\n",
                     kLeft, kTop + ph, kLeft + pw, kTop);
    s += "<g class=\"ticks\" font-family=\"sans-serif\" font-size=\"11\">\n";
    for (int i = 0; i <= 5; ++i) {
        double c = xmax * i / 5.0, v = ymax * i / 5.0;
        s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n", X(c), kTop + ph + 16, c);
        s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">{}</text>\n", kLeft - 6, Y(v) + 4, v);
    }
    s += "</g>\n";
    s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">cost</text>\n",
                     kLeft + pw / 2, kHeight - 15);
    s += fmt::format("<text x=\"15\" y=\"{:.2f}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 15 {:.2f})\">success</text>\n",
                     kTop + ph / 2, kTop + ph / 2);

    static const char* colours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& ser = series[k];
        const char* col = colours[k % 5];
        s += fmt::format("<g class=\"series\" data-label=\"{}\" stroke=\"{}\" fill=\"none\">\n", escape(ser.label), col);
        for (const auto& p : ser.points) {
            double x = X(p.cost), y = Y(p.success);
            if (ser.marker == Marker::Circle) {
                s += fmt::format("<circle class=\"marker\" cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3.5\"/>\n", x, y);
            } else {
                s += fmt::format("<path class=\"marker\" d=\"M{:.2f} {:.2f}L{:.2f} {:.2f}M{:.2f} {:.2f}L{:.2f} {:.2f}\"/>\n", x - 4, y - 4, x + 4,
                                 y + 4, x - 4, y + 4, x + 4, y - 4);
            }
        }
        s += "</g>\n";
        s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" fill=\"{}\" font-family=\"sans-serif\" font-size=\"12\">{}</text>\n", kLeft + pw - 120,
                         kTop + 16 + 16.0 * static_cast<double>(k), col, escape(ser.label));
    }
    s += "</svg>\n";
    return s;
}

} // namespace parley::cli
