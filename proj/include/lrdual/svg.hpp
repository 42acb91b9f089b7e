#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lrdual {

struct SvgSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct SvgPlot {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_y = false;
    std::vector<SvgSeries> series;
};

/// Static line plot, one <polyline> per series. With log_y, non-positive points are dropped.
void write_svg(std::ostream& out, const SvgPlot& plot);

}  // namespace lrdual
