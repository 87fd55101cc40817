#include "fracocp/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace fracocp {

namespace {

constexpr double kMarginLeft = 64.0;
constexpr double kMarginRight = 140.0;
constexpr double kMarginTop = 32.0;
constexpr double kMarginBottom = 44.0;

std::string fixed(double v, int digits = 2)
{
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.*f", digits, v);
    return buffer;
}

std::string tick_label(double v)
{
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%g", std::abs(v) < 1e-12 ? 0.0 : v);
    return buffer;
}

std::string escape(const std::string& text)
{
    std::string out;
    for (char c : text) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out.push_back(c);
        }
    }
    return out;
}

// Round step of roughly (hi - lo) / 5.
double nice_step(double lo, double hi)
{
    const double raw = (hi - lo) / 5.0;
    const double magnitude = std::pow(10.0, std::floor(std::log10(raw)));
    for (double factor : {1.0, 2.0, 2.5, 5.0, 10.0}) {
        if (factor * magnitude >= raw) {
            return factor * magnitude;
        }
    }
    return 10.0 * magnitude;
}

const char* dash(bool dotted) { return dotted ? " stroke-dasharray=\"2,4\"" : ""; }

} // namespace

std::string render_svg(const LinePlot& plot)
{
    double x_lo = std::numeric_limits<double>::infinity();
    double x_hi = -x_lo;
    double y_lo = x_lo;
    double y_hi = -x_lo;
    for (const auto& s : plot.series) {
        for (double v : s.x) {
            x_lo = std::min(x_lo, v);
            x_hi = std::max(x_hi, v);
        }
        for (double v : s.y) {
            if (std::isfinite(v)) {
                y_lo = std::min(y_lo, v);
                y_hi = std::max(y_hi, v);
            }
        }
    }
    if (!std::isfinite(x_lo)) {
        x_lo = 0.0;
        x_hi = 1.0;
        y_lo = 0.0;
        y_hi = 1.0;
    }
    if (x_hi <= x_lo) {
        x_hi = x_lo + 1.0;
    }
    if (y_hi - y_lo < 1e-12 * std::max(1.0, std::abs(y_hi))) {
        y_lo -= 0.5;
        y_hi += 0.5;
    }
    const double y_step = nice_step(y_lo, y_hi);
    y_lo = std::floor(y_lo / y_step) * y_step;
    y_hi = std::ceil(y_hi / y_step) * y_step;
    const double x_step = nice_step(x_lo, x_hi);

    const double w = plot.width;
    const double h = plot.height;
    const double plot_w = w - kMarginLeft - kMarginRight;
    const double plot_h = h - kMarginTop - kMarginBottom;
    const auto px = [&](double x) { return kMarginLeft + (x - x_lo) / (x_hi - x_lo) * plot_w; };
    const auto py = [&](double y) { return kMarginTop + (y_hi - y) / (y_hi - y_lo) * plot_h; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << plot.width << "\" height=\""
        << plot.height << "\" viewBox=\"0 0 " << plot.width << ' ' << plot.height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << fixed(kMarginLeft + plot_w / 2) << "\" y=\"20\" text-anchor=\"middle\""
        << " font-family=\"sans-serif\" font-size=\"14\">" << escape(plot.title) << "</text>\n";

    svg << "<g font-family=\"sans-serif\" font-size=\"10\" stroke=\"#999\">\n";
    for (double y = y_lo; y <= y_hi + 0.5 * y_step; y += y_step) {
        svg << "<line x1=\"" << fixed(kMarginLeft - 4) << "\" y1=\"" << fixed(py(y)) << "\" x2=\""
            << fixed(kMarginLeft) << "\" y2=\"" << fixed(py(y)) << "\"/>"
            << "<text stroke=\"none\" fill=\"black\" x=\"" << fixed(kMarginLeft - 6) << "\" y=\""
            << fixed(py(y) + 3) << "\" text-anchor=\"end\">" << tick_label(y) << "</text>\n";
    }
    for (double x = x_lo; x <= x_hi + 0.5 * x_step; x += x_step) {
        svg << "<line x1=\"" << fixed(px(x)) << "\" y1=\"" << fixed(kMarginTop + plot_h)
            << "\" x2=\"" << fixed(px(x)) << "\" y2=\"" << fixed(kMarginTop + plot_h + 4) << "\"/>"
            << "<text stroke=\"none\" fill=\"black\" x=\"" << fixed(px(x)) << "\" y=\""
            << fixed(kMarginTop + plot_h + 16) << "\" text-anchor=\"middle\">" << tick_label(x)
            << "</text>\n";
    }
    svg << "</g>\n";
    svg << "<rect x=\"" << fixed(kMarginLeft) << "\" y=\"" << fixed(kMarginTop) << "\" width=\""
        << fixed(plot_w) << "\" height=\"" << fixed(plot_h)
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << fixed(kMarginLeft + plot_w / 2) << "\" y=\"" << fixed(h - 8)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
        << escape(plot.x_label) << "</text>\n";
    svg << "<text transform=\"translate(14," << fixed(kMarginTop + plot_h / 2)
        << ") rotate(-90)\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
        << escape(plot.y_label) << "</text>\n";

    for (const auto& s : plot.series) {
        svg << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\""
            << dash(s.dotted) << " points=\"";
        const std::size_t count = std::min(s.x.size(), s.y.size());
        for (std::size_t i = 0; i < count; ++i) {
            if (std::isfinite(s.y[i])) {
                svg << fixed(px(s.x[i])) << ',' << fixed(py(s.y[i])) << ' ';
            }
        }
        svg << "\"/>\n";
    }

    double legend_y = kMarginTop + 8;
    const double legend_x = kMarginLeft + plot_w + 10;
    const auto legend_entry = [&](const PlotSeries& s) {
        if (s.label.empty()) {
            return;
        }
        svg << "<line x1=\"" << fixed(legend_x) << "\" y1=\"" << fixed(legend_y) << "\" x2=\""
            << fixed(legend_x + 24) << "\" y2=\"" << fixed(legend_y) << "\" stroke=\"" << s.color
            << "\" stroke-width=\"1.5\"" << dash(s.dotted) << "/>"
            << "<text x=\"" << fixed(legend_x + 30) << "\" y=\"" << fixed(legend_y + 4)
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape(s.label)
            << "</text>\n";
        legend_y += 18;
    };
    for (const auto& s : plot.legend_only) {
        legend_entry(s);
    }
    for (const auto& s : plot.series) {
        legend_entry(s);
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace fracocp
