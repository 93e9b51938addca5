#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

namespace valconf::svg {

// Histogram of Bayes factors on a log axis; the 1/3 and 3 interpretation
// boundaries are drawn as highlighted vertical lines.
std::string bf_histogram(std::span<const double> bf_values);

struct LabeledPoint {
    double x = 0.0;
    double y = 0.0;
    std::string label;
};

std::string mds_scatter(std::span<const LabeledPoint> points);

struct F1Bar {
    std::string name;
    double f1 = 0.0;
    bool has_delta = false;
    double delta_vs_text = 0.0;
};

// Delta annotations: "--" for d < -0.1, "-" for -0.1 <= d < 0, "=" for 0,
// "+" for d > 0.
std::string f1_bars(std::span<const F1Bar> bars);
std::string delta_symbol(double delta);

}  // namespace valconf::svg
