#include "lrdual/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "lrdual/format.hpp"

namespace lrdual {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;
constexpr std::size_t kMaxPoints = 4000;
constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

std::string coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace

void write_svg(std::ostream& out, const SvgPlot& plot) {
    // Transformed points per series; y is log10 when requested.
    std::vector<std::vector<std::pair<double, double>>> pts(plot.series.size());
    double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
    double y_min = x_min, y_max = -x_min;
    for (std::size_t s = 0; s < plot.series.size(); ++s) {
        const auto& series = plot.series[s];
        const std::size_t n = std::min(series.x.size(), series.y.size());
        const std::size_t stride = n > kMaxPoints ? (n + kMaxPoints - 1) / kMaxPoints : 1;
        for (std::size_t i = 0; i < n; ++i) {
            if (i % stride != 0 && i + 1 != n) continue;
            double y = series.y[i];
            if (plot.log_y) {
                if (!(y > 0.0)) continue;
                y = std::log10(y);
            }
            if (!std::isfinite(y) || !std::isfinite(series.x[i])) continue;
            pts[s].emplace_back(series.x[i], y);
            x_min = std::min(x_min, series.x[i]);
            x_max = std::max(x_max, series.x[i]);
            y_min = std::min(y_min, y);
            y_max = std::max(y_max, y);
        }
    }
    if (!(x_min <= x_max)) x_min = 0.0, x_max = 1.0;
    if (!(y_min <= y_max)) y_min = 0.0, y_max = 1.0;
    if (x_max == x_min) x_max = x_min + 1.0;
    if (y_max == y_min) y_max = y_min + 1.0;

    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - x_min) / (x_max - x_min) * plot_w; };
    auto py = [&](double y) { return kTop + (1.0 - (y - y_min) / (y_max - y_min)) * plot_h; };
    auto tick = [&](double y) { return plot.log_y ? "1e" + format_double(std::round(y * 100.0) / 100.0) : format_double(y); };

    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << escape(plot.title)
        << "</text>\n"
        << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << kLeft + plot_w << "\" y2=\""
        << kTop + plot_h << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kTop + plot_h
        << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << kLeft << "\" y=\"" << kTop + plot_h + 18 << "\" font-size=\"11\">" << escape(format_double(x_min))
        << "</text>\n"
        << "<text x=\"" << kLeft + plot_w << "\" y=\"" << kTop + plot_h + 18 << "\" text-anchor=\"end\" font-size=\"11\">"
        << escape(format_double(x_max)) << "</text>\n"
        << "<text x=\"" << kLeft - 4 << "\" y=\"" << kTop + plot_h << "\" text-anchor=\"end\" font-size=\"11\">"
        << escape(tick(y_min)) << "</text>\n"
        << "<text x=\"" << kLeft - 4 << "\" y=\"" << kTop + 10 << "\" text-anchor=\"end\" font-size=\"11\">"
        << escape(tick(y_max)) << "</text>\n"
        << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 16 << "\" text-anchor=\"middle\" font-size=\"13\">"
        << escape(plot.x_label) << "</text>\n"
        << "<text x=\"18\" y=\"" << kTop + plot_h / 2 << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 "
        << kTop + plot_h / 2 << ")\">" << escape(plot.y_label + (plot.log_y ? " (log scale)" : "")) << "</text>\n";

    for (std::size_t s = 0; s < plot.series.size(); ++s) {
        const char* color = kColors[s % std::size(kColors)];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < pts[s].size(); ++i) {
            if (i) out << ' ';
            out << coord(px(pts[s][i].first)) << ',' << coord(py(pts[s][i].second));
        }
        out << "\"><title>" << escape(plot.series[s].label) << "</title></polyline>\n";
        out << "<text x=\"" << kLeft + plot_w - 4 << "\" y=\"" << kTop + 14 + 14.0 * static_cast<double>(s)
            << "\" text-anchor=\"end\" font-size=\"11\" fill=\"" << color << "\">" << escape(plot.series[s].label)
            << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace lrdual
