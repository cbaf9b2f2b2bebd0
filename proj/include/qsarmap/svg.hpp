#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsarmap/dataset.hpp"
#include "qsarmap/embedding.hpp"

namespace qsarmap {

/// Fixed plot geometry and styling. Positive class: red crosses; negative
/// class: blue asterisks (three strokes). Constants are part of the output
/// format and documented in the repo.
struct PlotStyle {
    double width = 640.0;
    double height = 480.0;
    double margin_left = 70.0;
    double margin_right = 24.0;
    double margin_top = 44.0;
    double margin_bottom = 56.0;
    const char* positive_color = "#cc2222";
    const char* negative_color = "#2244cc";
    double marker_size = 4.5;
};

/// Affine data-to-pixel mapping used by the scatter plots, exposed so tests
/// can verify marker placement independently.
struct ScatterLayout {
    double x_min = 0.0, x_max = 1.0;
    double y_min = 0.0, y_max = 1.0;
    double plot_left = 0.0, plot_right = 1.0;
    double plot_top = 0.0, plot_bottom = 1.0;

    double screen_x(double x) const {
        return plot_left + (x - x_min) / (x_max - x_min) * (plot_right - plot_left);
    }
    double screen_y(double y) const {
        return plot_bottom - (y - y_min) / (y_max - y_min) * (plot_bottom - plot_top);
    }
};

namespace detail {

inline std::string fmt(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

inline std::string fmt_tick(double value) {
    if (value == 0.0) return "0";  // avoid "-0"
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 6);
    return std::string(buf, res.ptr);
}

inline std::string escape_xml(const std::string& text) {
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

inline void pad_range(double& lo, double& hi) {
    if (hi > lo) {
        const double pad = 0.05 * (hi - lo);
        lo -= pad;
        hi += pad;
    } else {
        const double pad = std::max(1.0, std::abs(lo)) * 0.05;
        lo -= pad;
        hi += pad;
    }
}

/// Tick positions at a "nice" step (1, 2, or 5 times a power of ten).
inline std::vector<double> nice_ticks(double lo, double hi) {
    const double span = hi - lo;
    double step = std::pow(10.0, std::floor(std::log10(span / 5.0)));
    if (span / step > 10.0) step *= 2.0;
    if (span / step > 10.0) step *= 2.5;
    if (span / step > 10.0) step *= 2.0;
    std::vector<double> ticks;
    double t = std::ceil(lo / step) * step;
    for (; t <= hi + 1e-9 * span; t += step) {
        double rounded = std::round(t / step) * step;
        if (rounded == 0.0) rounded = 0.0;  // normalize -0
        ticks.push_back(rounded);
    }
    return ticks;
}

}  // namespace detail

inline ScatterLayout scatter_layout(const Embedding& e, const PlotStyle& style = {}) {
    if (e.dims != 1 && e.dims != 2)
        throw std::invalid_argument("scatter_layout: embedding must be 1D or 2D");
    if (e.coords.rows() == 0) throw std::invalid_argument("scatter_layout: empty embedding");

    ScatterLayout layout;
    layout.plot_left = style.margin_left;
    layout.plot_right = style.width - style.margin_right;
    layout.plot_top = style.margin_top;
    layout.plot_bottom = style.height - style.margin_bottom;

    const std::size_t n = e.coords.rows();
    if (e.dims == 1) {
        layout.x_min = 1.0;
        layout.x_max = static_cast<double>(n);
        layout.y_min = layout.y_max = e.coords(0, 0);
        for (std::size_t i = 0; i < n; ++i) {
            layout.y_min = std::min(layout.y_min, e.coords(i, 0));
            layout.y_max = std::max(layout.y_max, e.coords(i, 0));
        }
    } else {
        layout.x_min = layout.x_max = e.coords(0, 0);
        layout.y_min = layout.y_max = e.coords(0, 1);
        for (std::size_t i = 0; i < n; ++i) {
            layout.x_min = std::min(layout.x_min, e.coords(i, 0));
            layout.x_max = std::max(layout.x_max, e.coords(i, 0));
            layout.y_min = std::min(layout.y_min, e.coords(i, 1));
            layout.y_max = std::max(layout.y_max, e.coords(i, 1));
        }
    }
    detail::pad_range(layout.x_min, layout.x_max);
    detail::pad_range(layout.y_min, layout.y_max);
    return layout;
}

/// Standalone SVG scatter plot. 1D embeddings are drawn against the 1-based
/// compound index; 2D embeddings draw component 1 against component 2.
/// Every data point is one <use> element inside a per-class group, so the
/// marker count always equals N.
inline std::string render_scatter_svg(const Embedding& e, const EndpointLabeling& labeling,
                                      const PlotStyle& style = {}) {
    if (e.coords.rows() != labeling.labels.size())
        throw std::invalid_argument("render_scatter_svg: embedding/label size mismatch");
    const ScatterLayout layout = scatter_layout(e, style);
    const std::size_t n = e.coords.rows();
    const double m = style.marker_size;
    using detail::escape_xml;
    using detail::fmt;
    using detail::fmt_tick;

    std::string svg;
    svg.reserve(4096 + 96 * n);
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" "
           "xmlns:xlink=\"http://www.w3.org/1999/xlink\" width=\"" +
           fmt(style.width) + "\" height=\"" + fmt(style.height) + "\" viewBox=\"0 0 " +
           fmt(style.width) + " " + fmt(style.height) + "\">\n";
    const std::string title =
        escape_xml(e.method) + " embedding, k=" + std::to_string(e.dims);
    svg += "  <title>" + title + "</title>\n";

    // Reusable class markers: cross (x) for positives, asterisk for negatives.
    const double diag = m * std::cos(3.14159265358979323846 / 6.0);
    const double half = m * 0.5;
    svg += "  <defs>\n";
    svg += "    <g id=\"mark-positive\" stroke=\"" + std::string(style.positive_color) +
           "\" stroke-width=\"1.6\" fill=\"none\">\n";
    svg += "      <path d=\"M " + fmt(-m) + " " + fmt(-m) + " L " + fmt(m) + " " + fmt(m) +
           " M " + fmt(-m) + " " + fmt(m) + " L " + fmt(m) + " " + fmt(-m) + "\"/>\n";
    svg += "    </g>\n";
    svg += "    <g id=\"mark-negative\" stroke=\"" + std::string(style.negative_color) +
           "\" stroke-width=\"1.4\" fill=\"none\">\n";
    svg += "      <path d=\"M 0 " + fmt(-m) + " L 0 " + fmt(m) + " M " + fmt(-diag) + " " +
           fmt(-half) + " L " + fmt(diag) + " " + fmt(half) + " M " + fmt(-diag) + " " +
           fmt(half) + " L " + fmt(diag) + " " + fmt(-half) + "\"/>\n";
    svg += "    </g>\n";
    svg += "  </defs>\n";

    svg += "  <rect x=\"0\" y=\"0\" width=\"" + fmt(style.width) + "\" height=\"" +
           fmt(style.height) + "\" fill=\"#ffffff\"/>\n";
    svg += "  <text x=\"" + fmt(style.width / 2.0) +
           "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">" +
           title + "</text>\n";

    // Axes, ticks, grid.
    svg += "  <g stroke=\"#333333\" stroke-width=\"1\" fill=\"none\">\n";
    svg += "    <line x1=\"" + fmt(layout.plot_left) + "\" y1=\"" + fmt(layout.plot_bottom) +
           "\" x2=\"" + fmt(layout.plot_right) + "\" y2=\"" + fmt(layout.plot_bottom) + "\"/>\n";
    svg += "    <line x1=\"" + fmt(layout.plot_left) + "\" y1=\"" + fmt(layout.plot_top) +
           "\" x2=\"" + fmt(layout.plot_left) + "\" y2=\"" + fmt(layout.plot_bottom) + "\"/>\n";
    svg += "  </g>\n";

    svg += "  <g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333333\">\n";
    for (double t : detail::nice_ticks(layout.x_min, layout.x_max)) {
        const double px = layout.screen_x(t);
        svg += "    <line x1=\"" + fmt(px) + "\" y1=\"" + fmt(layout.plot_bottom) + "\" x2=\"" +
               fmt(px) + "\" y2=\"" + fmt(layout.plot_bottom + 5.0) +
               "\" stroke=\"#333333\"/>\n";
        svg += "    <text x=\"" + fmt(px) + "\" y=\"" + fmt(layout.plot_bottom + 18.0) +
               "\" text-anchor=\"middle\">" + fmt_tick(t) + "</text>\n";
    }
    for (double t : detail::nice_ticks(layout.y_min, layout.y_max)) {
        const double py = layout.screen_y(t);
        svg += "    <line x1=\"" + fmt(layout.plot_left - 5.0) + "\" y1=\"" + fmt(py) +
               "\" x2=\"" + fmt(layout.plot_left) + "\" y2=\"" + fmt(py) +
               "\" stroke=\"#333333\"/>\n";
        svg += "    <text x=\"" + fmt(layout.plot_left - 8.0) + "\" y=\"" + fmt(py + 3.5) +
               "\" text-anchor=\"end\">" + fmt_tick(t) + "</text>\n";
    }
    svg += "  </g>\n";

    // Axis labels.
    const std::string method = escape_xml(e.method);
    const std::string x_label = e.dims == 1 ? "compound index" : method + " component 1";
    const std::string y_label =
        e.dims == 1 ? method + " component 1" : method + " component 2";
    const double x_center = (layout.plot_left + layout.plot_right) / 2.0;
    const double y_center = (layout.plot_top + layout.plot_bottom) / 2.0;
    svg += "  <text x=\"" + fmt(x_center) + "\" y=\"" + fmt(style.height - 14.0) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" + x_label +
           "</text>\n";
    svg += "  <text x=\"20\" y=\"" + fmt(y_center) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
           "transform=\"rotate(-90 20 " +
           fmt(y_center) + ")\">" + y_label + "</text>\n";

    // Data points, one group per class.
    auto point_xy = [&](std::size_t i, double& x, double& y) {
        if (e.dims == 1) {
            x = static_cast<double>(i + 1);
            y = e.coords(i, 0);
        } else {
            x = e.coords(i, 0);
            y = e.coords(i, 1);
        }
    };
    svg += "  <g class=\"points-positive\">\n";
    for (std::size_t i = 0; i < n; ++i) {
        if (!labeling.labels[i]) continue;
        double x = 0.0, y = 0.0;
        point_xy(i, x, y);
        svg += "    <use xlink:href=\"#mark-positive\" x=\"" + fmt(layout.screen_x(x)) +
               "\" y=\"" + fmt(layout.screen_y(y)) + "\"/>\n";
    }
    svg += "  </g>\n";
    svg += "  <g class=\"points-negative\">\n";
    for (std::size_t i = 0; i < n; ++i) {
        if (labeling.labels[i]) continue;
        double x = 0.0, y = 0.0;
        point_xy(i, x, y);
        svg += "    <use xlink:href=\"#mark-negative\" x=\"" + fmt(layout.screen_x(x)) +
               "\" y=\"" + fmt(layout.screen_y(y)) + "\"/>\n";
    }
    svg += "  </g>\n";

    // Legend, drawn with inline paths so <use> elements stay one per point.
    const double lx = layout.plot_right - 150.0;
    const double ly = layout.plot_top + 10.0;
    svg += "  <g font-family=\"sans-serif\" font-size=\"12\" fill=\"#333333\">\n";
    svg += "    <path d=\"M " + fmt(lx - m) + " " + fmt(ly - m) + " L " + fmt(lx + m) + " " +
           fmt(ly + m) + " M " + fmt(lx - m) + " " + fmt(ly + m) + " L " + fmt(lx + m) + " " +
           fmt(ly - m) + "\" stroke=\"" + std::string(style.positive_color) +
           "\" stroke-width=\"1.6\" fill=\"none\"/>\n";
    svg += "    <text x=\"" + fmt(lx + 12.0) + "\" y=\"" + fmt(ly + 4.0) + "\">" +
           escape_xml(labeling.class_names.first) + "</text>\n";
    const double ly2 = ly + 20.0;
    svg += "    <path d=\"M " + fmt(lx) + " " + fmt(ly2 - m) + " L " + fmt(lx) + " " +
           fmt(ly2 + m) + " M " + fmt(lx - diag) + " " + fmt(ly2 - half) + " L " +
           fmt(lx + diag) + " " + fmt(ly2 + half) + " M " + fmt(lx - diag) + " " +
           fmt(ly2 + half) + " L " + fmt(lx + diag) + " " + fmt(ly2 - half) + "\" stroke=\"" +
           std::string(style.negative_color) + "\" stroke-width=\"1.4\" fill=\"none\"/>\n";
    svg += "    <text x=\"" + fmt(lx + 12.0) + "\" y=\"" + fmt(ly2 + 4.0) + "\">" +
           escape_xml(labeling.class_names.second) + "</text>\n";
    svg += "  </g>\n";
    svg += "</svg>\n";
    return svg;
}

inline void emit_scatter_svg(const Embedding& e, const EndpointLabeling& labeling,
                             const std::filesystem::path& path, const PlotStyle& style = {}) {
    const std::string svg = render_scatter_svg(e, labeling, style);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("emit_scatter_svg: cannot open " + path.string());
    out.write(svg.data(), static_cast<std::streamsize>(svg.size()));
    if (!out) throw std::runtime_error("emit_scatter_svg: write failed for " + path.string());
}

}  // namespace qsarmap
