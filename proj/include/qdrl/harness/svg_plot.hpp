#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qdrl/harness/text_format.hpp"

namespace qdrl::harness {

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

// Trailing moving average; n points shrink to n - window + 1. The x value
// paired with each smoothed point is the episode at the window's end.
inline std::vector<double> moving_average(const std::vector<double>& values, int window) {
    if (window < 1) throw std::invalid_argument("moving_average: window must be >= 1");
    if (values.size() < static_cast<std::size_t>(window)) return {};
    std::vector<double> out;
    out.reserve(values.size() - static_cast<std::size_t>(window) + 1);
    double sum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        sum += values[i];
        if (i + 1 >= static_cast<std::size_t>(window)) {
            out.push_back(sum / window);
            sum -= values[i + 1 - static_cast<std::size_t>(window)];
        }
    }
    return out;
}

namespace detail {

inline std::string xml_escape(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

inline const char* series_color(std::size_t index) {
    static constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                               "#9467bd", "#ff7f0e", "#8c564b",
                                               "#17becf", "#7f7f7f"};
    return kPalette[index % (sizeof(kPalette) / sizeof(kPalette[0]))];
}

}  // namespace detail

// Static line chart: one polyline per series, linear axes with tick labels,
// legend in the top-right corner.
inline std::string render_line_plot(const std::vector<PlotSeries>& series,
                                    const std::string& title, const std::string& x_label,
                                    const std::string& y_label) {
    constexpr double kWidth = 840.0, kHeight = 520.0;
    constexpr double kLeft = 70.0, kRight = 810.0, kTop = 50.0, kBottom = 470.0;

    double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
    bool any = false;
    for (const PlotSeries& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!any) {
                x_min = x_max = s.x[i];
                y_min = y_max = s.y[i];
                any = true;
            } else {
                x_min = std::min(x_min, s.x[i]);
                x_max = std::max(x_max, s.x[i]);
                y_min = std::min(y_min, s.y[i]);
                y_max = std::max(y_max, s.y[i]);
            }
        }
    }
    if (x_max - x_min < 1e-12) { x_min -= 0.5; x_max += 0.5; }
    if (y_max - y_min < 1e-12) { y_min -= 1.0; y_max += 1.0; }

    const auto px = [&](double x) {
        return kLeft + (x - x_min) / (x_max - x_min) * (kRight - kLeft);
    };
    const auto py = [&](double y) {
        return kBottom - (y - y_min) / (y_max - y_min) * (kBottom - kTop);
    };
    const auto num = [](double v) {
        std::ostringstream os;
        os.precision(6);
        os << v;
        return os.str();
    };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    svg << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
    svg << "<text x=\"" << (kWidth / 2) << "\" y=\"28\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"18\">" << detail::xml_escape(title)
        << "</text>\n";

    // axes
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << kBottom << "\" x2=\"" << kRight
        << "\" y2=\"" << kBottom << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
        << kBottom << "\" stroke=\"black\"/>\n";
    constexpr int kTicks = 5;
    for (int i = 0; i <= kTicks; ++i) {
        const double fx = x_min + (x_max - x_min) * i / kTicks;
        const double fy = y_min + (y_max - y_min) * i / kTicks;
        svg << "<line x1=\"" << px(fx) << "\" y1=\"" << kBottom << "\" x2=\"" << px(fx)
            << "\" y2=\"" << (kBottom + 5) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << px(fx) << "\" y=\"" << (kBottom + 20)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
            << num(fx) << "</text>\n";
        svg << "<line x1=\"" << (kLeft - 5) << "\" y1=\"" << py(fy) << "\" x2=\"" << kLeft
            << "\" y2=\"" << py(fy) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << (kLeft - 8) << "\" y=\"" << (py(fy) + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">"
            << num(fy) << "</text>\n";
    }
    svg << "<text x=\"" << ((kLeft + kRight) / 2) << "\" y=\"" << (kHeight - 10)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
        << detail::xml_escape(x_label) << "</text>\n";
    svg << "<text x=\"18\" y=\"" << ((kTop + kBottom) / 2)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" "
        << "transform=\"rotate(-90 18 " << ((kTop + kBottom) / 2) << ")\">"
        << detail::xml_escape(y_label) << "</text>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const PlotSeries& s = series[si];
        if (s.x.empty()) continue;
        svg << "<polyline fill=\"none\" stroke=\"" << detail::series_color(si)
            << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (i) svg << " ";
            svg << num(px(s.x[i])) << "," << num(py(s.y[i]));
        }
        svg << "\"/>\n";
    }

    // legend
    for (std::size_t si = 0; si < series.size(); ++si) {
        const double ly = kTop + 8 + 18 * static_cast<double>(si);
        svg << "<line x1=\"" << (kRight - 150) << "\" y1=\"" << ly << "\" x2=\""
            << (kRight - 120) << "\" y2=\"" << ly << "\" stroke=\""
            << detail::series_color(si) << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << (kRight - 114) << "\" y=\"" << (ly + 4)
            << "\" font-family=\"sans-serif\" font-size=\"12\">"
            << detail::xml_escape(series[si].label) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace qdrl::harness
