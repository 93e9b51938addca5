#include "valconf/svg_report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace valconf::svg {
namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kMarginLeft = 60.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 24.0;
constexpr double kMarginBottom = 48.0;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string header() {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%g\" height=\"%g\" "
                  "viewBox=\"0 0 %g %g\">\n",
                  kWidth, kHeight, kWidth, kHeight);
    return std::string(buf) + "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

std::string text_at(double x, double y, const std::string& s, const char* anchor = "middle",
                    int size = 12) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%s\" y=\"%s\" font-family=\"sans-serif\" font-size=\"%d\" "
                  "text-anchor=\"%s\">",
                  num(x).c_str(), num(y).c_str(), size, anchor);
    std::string out = buf;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    out += "</text>\n";
    return out;
}

std::string line_at(double x1, double y1, double x2, double y2, const char* stroke,
                    double width = 1.0, const char* dash = nullptr) {
    std::string out = "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) +
                      "\" y2=\"" + num(y2) + "\" stroke=\"" + stroke + "\" stroke-width=\"" +
                      num(width) + "\"";
    if (dash) out += std::string(" stroke-dasharray=\"") + dash + "\"";
    out += "/>\n";
    return out;
}

}  // namespace

std::string bf_histogram(std::span<const double> bf_values) {
    if (bf_values.empty()) throw std::invalid_argument("bf_histogram: no values");
    std::vector<double> logs;  // base-3 logs so bin edges sit on powers of 3
    logs.reserve(bf_values.size());
    const double ln3 = std::log(3.0);
    for (double v : bf_values) {
        if (v > 0.0 && std::isfinite(v)) logs.push_back(std::log(v) / ln3);
    }
    if (logs.empty()) throw std::invalid_argument("bf_histogram: no positive finite values");

    // bin edges at ..., 1/9, 1/3, 1, 3, 9, ... covering the data and the
    // interpretation boundaries
    int lo = static_cast<int>(std::floor(*std::min_element(logs.begin(), logs.end())));
    int hi = static_cast<int>(std::floor(*std::max_element(logs.begin(), logs.end()))) + 1;
    lo = std::min(lo, -2);
    hi = std::max(hi, 2);
    const int n_bins = hi - lo;
    std::vector<int> bins(static_cast<std::size_t>(n_bins), 0);
    for (double l : logs) {
        const int idx = std::clamp(static_cast<int>(std::floor(l)) - lo, 0, n_bins - 1);
        ++bins[static_cast<std::size_t>(idx)];
    }
    const int max_count = std::max(1, *std::max_element(bins.begin(), bins.end()));

    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    auto x_of = [&](double log3) { return kMarginLeft + (log3 - lo) / (hi - lo) * plot_w; };
    auto y_of = [&](double count) { return kMarginTop + plot_h * (1.0 - count / max_count); };

    auto edge_label = [&](int e) {
        if (e == 0) return std::string("1");
        if (e == 1) return std::string("3");
        if (e == -1) return std::string("1/3");
        char buf[32];
        if (e > 0) {
            std::snprintf(buf, sizeof buf, "3^%d", e);
        } else {
            std::snprintf(buf, sizeof buf, "3^-%d", -e);
        }
        return std::string(buf);
    };

    std::string out = header();
    out += text_at(kWidth / 2, 16, "BF10 distribution (log3 bins)");
    for (int i = 0; i < n_bins; ++i) {
        if (bins[static_cast<std::size_t>(i)] == 0) continue;
        const double x0 = x_of(lo + i);
        const double bw = plot_w / n_bins;
        const double y = y_of(bins[static_cast<std::size_t>(i)]);
        out += "<rect x=\"" + num(x0 + 1) + "\" y=\"" + num(y) + "\" width=\"" + num(bw - 2) +
               "\" height=\"" + num(kMarginTop + plot_h - y) +
               "\" fill=\"#4878a8\" stroke=\"none\"/>\n";
    }
    out += line_at(kMarginLeft, kMarginTop + plot_h, kMarginLeft + plot_w, kMarginTop + plot_h,
                   "black");
    for (int e = lo; e <= hi; ++e) {
        const bool boundary = e == -1 || e == 1;  // the 1/3 and 3 edges
        if (boundary) {
            out += line_at(x_of(e), kMarginTop, x_of(e), kMarginTop + plot_h, "#c03030", 1.5,
                           "5,3");
        }
        out += line_at(x_of(e), kMarginTop + plot_h, x_of(e), kMarginTop + plot_h + 5, "black");
        out += text_at(x_of(e), kMarginTop + plot_h + 20, edge_label(e), "middle", 10);
    }
    out += text_at(kMarginLeft - 8, kMarginTop + 8, std::to_string(max_count), "end", 10);
    out += "</svg>\n";
    return out;
}

std::string mds_scatter(std::span<const LabeledPoint> points) {
    if (points.empty()) throw std::invalid_argument("mds_scatter: no points");
    double lo_x = points[0].x, hi_x = points[0].x, lo_y = points[0].y, hi_y = points[0].y;
    for (const auto& p : points) {
        lo_x = std::min(lo_x, p.x);
        hi_x = std::max(hi_x, p.x);
        lo_y = std::min(lo_y, p.y);
        hi_y = std::max(hi_y, p.y);
    }
    const double pad_x = std::max(1e-9, (hi_x - lo_x) * 0.15);
    const double pad_y = std::max(1e-9, (hi_y - lo_y) * 0.15);
    lo_x -= pad_x;
    hi_x += pad_x;
    lo_y -= pad_y;
    hi_y += pad_y;

    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    auto x_of = [&](double x) { return kMarginLeft + (x - lo_x) / (hi_x - lo_x) * plot_w; };
    auto y_of = [&](double y) { return kMarginTop + plot_h * (1.0 - (y - lo_y) / (hi_y - lo_y)); };

    std::string out = header();
    out += text_at(kWidth / 2, 16, "Value covariance MDS");
    for (const auto& p : points) {
        out += "<circle cx=\"" + num(x_of(p.x)) + "\" cy=\"" + num(y_of(p.y)) +
               "\" r=\"4\" fill=\"#4878a8\"/>\n";
        out += text_at(x_of(p.x) + 7, y_of(p.y) - 6, p.label, "start", 11);
    }
    out += "</svg>\n";
    return out;
}

std::string delta_symbol(double delta) {
    if (delta < -0.1) return "--";
    if (delta < 0.0) return "-";
    if (delta == 0.0) return "=";
    return "+";
}

std::string f1_bars(std::span<const F1Bar> bars) {
    if (bars.empty()) throw std::invalid_argument("f1_bars: no bars");
    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    const double slot = plot_w / static_cast<double>(bars.size());

    std::string out = header();
    out += text_at(kWidth / 2, 16, "Macro F1 by context");
    for (std::size_t i = 0; i < bars.size(); ++i) {
        const auto& bar = bars[i];
        const double h = std::clamp(bar.f1, 0.0, 1.0) * plot_h;
        const double x = kMarginLeft + slot * static_cast<double>(i) + slot * 0.2;
        const double y = kMarginTop + plot_h - h;
        out += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(slot * 0.6) +
               "\" height=\"" + num(h) + "\" fill=\"#4878a8\"/>\n";
        if (bar.has_delta) {
            out += text_at(x + slot * 0.3, y - 8, delta_symbol(bar.delta_vs_text), "middle", 14);
        }
        out += text_at(x + slot * 0.3, kMarginTop + plot_h + 16, bar.name, "middle", 10);
        out += text_at(x + slot * 0.3, y - 22, num(bar.f1), "middle", 10);
    }
    out += line_at(kMarginLeft, kMarginTop + plot_h, kMarginLeft + plot_w, kMarginTop + plot_h,
                   "black");
    out += "</svg>\n";
    return out;
}

}  // namespace valconf::svg
