#pragma once

// Minimal deterministic SVG chart builder for the CLI: line and bar charts
// from raw primitives, no plotting library. Output contains no timestamps or
// environment-dependent content, so identical inputs give identical bytes.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

namespace svg {

inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

inline std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '&')
            out += "&amp;";
        else if (c == '<')
            out += "&lt;";
        else if (c == '>')
            out += "&gt;";
        else
            out += c;
    }
    return out;
}

struct Series {
    std::string label;
    std::vector<std::pair<double, double>> points;  // (x, y), drawn in order
};

inline const char* color(std::size_t i) {
    static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                     "#9467bd", "#8c564b"};
    return kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
}

namespace detail {

constexpr double kW = 720, kH = 340;
constexpr double kLeft = 70, kRight = 160, kTop = 44, kBottom = 48;

struct Range {
    double lo = 0, hi = 1;
    double map(double v, double a, double b) const {
        return hi > lo ? a + (v - lo) / (hi - lo) * (b - a) : 0.5 * (a + b);
    }
};

inline Range pad(double lo, double hi) {
    if (hi <= lo) hi = lo + 1;
    const double m = 0.05 * (hi - lo);
    return {lo - m, hi + m};
}

inline void axes(std::string& s, const Range& xr, const Range& yr, const std::string& x_label,
                 const std::string& y_label, const std::string& title) {
    const double x0 = kLeft, x1 = kW - kRight, y0 = kH - kBottom, y1 = kTop;
    s += "<text x=\"" + num(0.5 * (x0 + x1)) + "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" +
         escape(title) + "</text>\n";
    for (int t = 0; t <= 4; ++t) {
        const double fx = xr.lo + (xr.hi - xr.lo) * t / 4.0;
        const double fy = yr.lo + (yr.hi - yr.lo) * t / 4.0;
        const double px = xr.map(fx, x0, x1);
        const double py = yr.map(fy, y0, y1);
        s += "<line x1=\"" + num(px) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(px) + "\" y2=\"" +
             num(y1) + "\" stroke=\"#dddddd\"/>\n";
        s += "<line x1=\"" + num(x0) + "\" y1=\"" + num(py) + "\" x2=\"" + num(x1) + "\" y2=\"" +
             num(py) + "\" stroke=\"#dddddd\"/>\n";
        s += "<text x=\"" + num(px) + "\" y=\"" + num(y0 + 16) +
             "\" text-anchor=\"middle\" font-size=\"10\">" + num(fx) + "</text>\n";
        s += "<text x=\"" + num(x0 - 6) + "\" y=\"" + num(py + 3) +
             "\" text-anchor=\"end\" font-size=\"10\">" + num(fy) + "</text>\n";
    }
    s += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x1) + "\" y2=\"" +
         num(y0) + "\" stroke=\"#000000\"/>\n";
    s += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x0) + "\" y2=\"" +
         num(y1) + "\" stroke=\"#000000\"/>\n";
    s += "<text x=\"" + num(0.5 * (x0 + x1)) + "\" y=\"" + num(kH - 12) +
         "\" text-anchor=\"middle\" font-size=\"11\">" + escape(x_label) + "</text>\n";
    s += "<text x=\"16\" y=\"" + num(0.5 * (y0 + y1)) +
         "\" text-anchor=\"middle\" font-size=\"11\" transform=\"rotate(-90 16 " +
         num(0.5 * (y0 + y1)) + ")\">" + escape(y_label) + "</text>\n";
}

}  // namespace detail

// Full <svg> element (one chart) positioned at (x, y) in the parent document.
inline std::string line_chart(const std::string& title, const std::string& x_label,
                              const std::string& y_label, const std::vector<Series>& series,
                              double x = 0, double y = 0) {
    using namespace detail;
    double xlo = 0, xhi = 0, ylo = 0, yhi = 0;
    bool first = true;
    for (const Series& s : series) {
        for (const auto& [px, py] : s.points) {
            if (first) {
                xlo = xhi = px;
                ylo = yhi = py;
                first = false;
            }
            xlo = std::min(xlo, px), xhi = std::max(xhi, px);
            ylo = std::min(ylo, py), yhi = std::max(yhi, py);
        }
    }
    const Range xr = pad(xlo, xhi), yr = pad(ylo, yhi);
    std::string s = "<svg x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(kW) +
                    "\" height=\"" + num(kH) + "\" xmlns=\"http://www.w3.org/2000/svg\">\n";
    s += "<rect width=\"" + num(kW) + "\" height=\"" + num(kH) + "\" fill=\"#ffffff\"/>\n";
    axes(s, xr, yr, x_label, y_label, title);
    const double x0 = kLeft, x1 = kW - kRight, y0 = kH - kBottom, y1 = kTop;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* c = color(i);
        std::string poly;
        for (const auto& [px, py] : series[i].points) {
            poly += num(xr.map(px, x0, x1)) + "," + num(yr.map(py, y0, y1)) + " ";
        }
        if (!poly.empty()) poly.pop_back();
        s += "<polyline points=\"" + poly + "\" fill=\"none\" stroke=\"" + c +
             "\" stroke-width=\"2\"/>\n";
        for (const auto& [px, py] : series[i].points) {
            s += "<circle cx=\"" + num(xr.map(px, x0, x1)) + "\" cy=\"" +
                 num(yr.map(py, y0, y1)) + "\" r=\"3\" fill=\"" + c + "\"/>\n";
        }
        const double ly = y1 + 14.0 * static_cast<double>(i);
        s += "<line x1=\"" + num(x1 + 10) + "\" y1=\"" + num(ly) + "\" x2=\"" + num(x1 + 30) +
             "\" y2=\"" + num(ly) + "\" stroke=\"" + c + "\" stroke-width=\"2\"/>\n";
        s += "<text x=\"" + num(x1 + 34) + "\" y=\"" + num(ly + 3) + "\" font-size=\"10\">" +
             escape(series[i].label) + "</text>\n";
    }
    s += "</svg>\n";
    return s;
}

// Histogram bars over fixed-width bins starting at lo; a trailing overflow
// bin is labeled with "+".
inline std::string bar_chart(const std::string& title, const std::string& x_label, double lo,
                             double bin_width, const std::vector<long long>& counts, bool overflow,
                             double x = 0, double y = 0) {
    using namespace detail;
    long long peak = 1;
    for (long long c : counts) peak = std::max(peak, c);
    const Range yr = pad(0, static_cast<double>(peak));
    const Range xr{0, static_cast<double>(counts.size())};
    std::string s = "<svg x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(kW) +
                    "\" height=\"" + num(kH) + "\" xmlns=\"http://www.w3.org/2000/svg\">\n";
    s += "<rect width=\"" + num(kW) + "\" height=\"" + num(kH) + "\" fill=\"#ffffff\"/>\n";
    const double x0 = kLeft, x1 = kW - kRight, y0 = kH - kBottom, y1 = kTop;
    s += "<text x=\"" + num(0.5 * (x0 + x1)) + "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" +
         escape(title) + "</text>\n";
    for (int t = 0; t <= 4; ++t) {
        const double fy = yr.lo + (yr.hi - yr.lo) * t / 4.0;
        const double py = yr.map(fy, y0, y1);
        s += "<line x1=\"" + num(x0) + "\" y1=\"" + num(py) + "\" x2=\"" + num(x1) + "\" y2=\"" +
             num(py) + "\" stroke=\"#dddddd\"/>\n";
        s += "<text x=\"" + num(x0 - 6) + "\" y=\"" + num(py + 3) +
             "\" text-anchor=\"end\" font-size=\"10\">" + num(fy) + "</text>\n";
    }
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const double bx = xr.map(static_cast<double>(i), x0, x1);
        const double bw = (x1 - x0) / static_cast<double>(counts.size());
        const double by = yr.map(static_cast<double>(counts[i]), y0, y1);
        s += "<rect x=\"" + num(bx + 1) + "\" y=\"" + num(by) + "\" width=\"" + num(bw - 2) +
             "\" height=\"" + num(y0 - by) + "\" fill=\"#1f77b4\"/>\n";
        const bool last_overflow = overflow && i + 1 == counts.size();
        const std::string label =
            num(lo + bin_width * static_cast<double>(i)) + (last_overflow ? "+" : "");
        s += "<text x=\"" + num(bx) + "\" y=\"" + num(y0 + 16) +
             "\" text-anchor=\"middle\" font-size=\"9\">" + label + "</text>\n";
    }
    s += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x1) + "\" y2=\"" +
         num(y0) + "\" stroke=\"#000000\"/>\n";
    s += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x0) + "\" y2=\"" +
         num(y1) + "\" stroke=\"#000000\"/>\n";
    s += "<text x=\"" + num(0.5 * (x0 + x1)) + "\" y=\"" + num(kH - 12) +
         "\" text-anchor=\"middle\" font-size=\"11\">" + escape(x_label) + "</text>\n";
    s += "</svg>\n";
    return s;
}

// Wraps chart fragments into a standalone document, stacked vertically.
inline std::string document(const std::vector<std::string>& charts) {
    using namespace detail;
    std::string s = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg width=\"" + num(kW) +
                    "\" height=\"" + num(kH * static_cast<double>(charts.size())) +
                    "\" xmlns=\"http://www.w3.org/2000/svg\">\n";
    for (const std::string& c : charts) s += c;
    s += "</svg>\n";
    return s;
}

inline double chart_height() { return detail::kH; }

}  // namespace svg
