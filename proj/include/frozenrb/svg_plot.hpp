#pragma once

#include <string>
#include <utility>
#include <vector>

namespace frozenrb {

struct PlotSeries {
    std::string name;
    std::string color;
    std::vector<std::pair<double, double>> points;
};

/// Minimal self-contained SVG line plot (markers + legend). With log_y the
/// y axis is log10 with decade ticks; non-positive y values are dropped.
void write_svg_line_plot(const std::string& path, const std::string& title,
                         const std::string& xlabel, const std::string& ylabel,
                         const std::vector<PlotSeries>& series, bool log_y);

}  // namespace frozenrb
