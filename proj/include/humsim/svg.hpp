#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace humsim {

struct ChartSeries {
    std::string label;
    std::string color;
    std::vector<std::pair<double, double>> points;
};

/// Static line chart with an 800x600 viewBox.
void write_svg_chart(std::ostream& os, const std::vector<ChartSeries>& series, const std::string& title,
                     const std::string& x_label, const std::string& y_label);

}  // namespace humsim
