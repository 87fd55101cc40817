#pragma once

#include <string>
#include <vector>

namespace fracocp {

struct PlotSeries {
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f77b4";
    bool dotted = false;
    std::string label; ///< legend entry; empty to omit
};

struct LinePlot {
    std::string title;
    std::string x_label = "t";
    std::string y_label;
    std::vector<PlotSeries> series;
    std::vector<PlotSeries> legend_only; ///< style swatches without data
    int width = 600;
    int height = 400;
};

/// Static SVG document with linear axes, ticks and a legend.
std::string render_svg(const LinePlot& plot);

} // namespace fracocp
