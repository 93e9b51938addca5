#include "doctest.h"

#include <vector>

#include "valconf/svg_report.hpp"

using namespace valconf;

TEST_CASE("delta symbols follow the annotation scheme") {
    CHECK(svg::delta_symbol(-0.2) == "--");
    CHECK(svg::delta_symbol(-0.100001) == "--");
    CHECK(svg::delta_symbol(-0.05) == "-");
    CHECK(svg::delta_symbol(0.0) == "=");
    CHECK(svg::delta_symbol(0.02) == "+");
    CHECK(svg::delta_symbol(0.3) == "+");
}

TEST_CASE("bf histogram draws the interpretation boundaries") {
    const std::vector<double> values = {0.05, 0.2, 0.4, 0.9, 1.1, 2.0, 4.0, 12.0, 40.0};
    const auto doc = svg::bf_histogram(values);
    CHECK(doc.find("<svg") != std::string::npos);
    CHECK(doc.find(">1/3<") != std::string::npos);
    CHECK(doc.find(">3<") != std::string::npos);
    CHECK(doc.find("stroke-dasharray") != std::string::npos);  // highlighted boundary lines
    CHECK_THROWS(svg::bf_histogram({}));
}

TEST_CASE("mds scatter labels every point") {
    std::vector<svg::LabeledPoint> points;
    for (int i = 0; i < 10; ++i) {
        points.push_back({0.1 * i, -0.05 * i, "value" + std::to_string(i)});
    }
    const auto doc = svg::mds_scatter(points);
    std::size_t circles = 0;
    for (std::size_t pos = doc.find("<circle"); pos != std::string::npos;
         pos = doc.find("<circle", pos + 1)) {
        ++circles;
    }
    CHECK(circles == 10);
    for (const auto& p : points) CHECK(doc.find(p.label) != std::string::npos);
    CHECK_THROWS(svg::mds_scatter({}));
}

TEST_CASE("f1 bars carry delta annotations") {
    std::vector<svg::F1Bar> bars = {
        {"text", 0.46, false, 0.0},
        {"noise", 0.33, true, -0.13},
        {"profile", 0.48, true, 0.02},
    };
    const auto doc = svg::f1_bars(bars);
    CHECK(doc.find(">--<") != std::string::npos);
    CHECK(doc.find(">+<") != std::string::npos);
    CHECK(doc.find("profile") != std::string::npos);
    CHECK_THROWS(svg::f1_bars({}));
}
