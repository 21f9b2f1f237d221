#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace driftinfo {

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    bool dashed = false;
    bool markers_only = false;
};

struct LineChart {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<PlotSeries> series;
};

/// Static SVG line chart with axes, ticks and a legend.
void write_svg(std::ostream& out, const LineChart& chart);

}  // namespace driftinfo
