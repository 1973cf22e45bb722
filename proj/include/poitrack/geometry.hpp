#pragma once

#include <algorithm>
#include <cmath>
#include <optional>

namespace poitrack {

// Axis-aligned box in corner form (left, top, right, bottom), pixels.
// Center/size are derived on demand; corner form is the single canonical
// representation throughout the engine.
struct Box {
    double x1 = 0.0;
    double y1 = 0.0;
    double x2 = 0.0;
    double y2 = 0.0;

    double width() const { return x2 - x1; }
    double height() const { return y2 - y1; }
    double cx() const { return 0.5 * (x1 + x2); }
    double cy() const { return 0.5 * (y1 + y2); }

    bool valid() const {
        return std::isfinite(x1) && std::isfinite(y1) && std::isfinite(x2) &&
               std::isfinite(y2) && x1 <= x2 && y1 <= y2;
    }

    static Box from_center(double cx, double cy, double w, double h) {
        return Box{cx - 0.5 * w, cy - 0.5 * h, cx + 0.5 * w, cy + 0.5 * h};
    }
    static Box from_tlwh(double left, double top, double w, double h) {
        return Box{left, top, left + w, top + h};
    }
};

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline double area(const Box& b) { return b.width() * b.height(); }

// Closed-boundary containment: points exactly on an edge count as inside,
// so grid samples placed on tight box borders are not lost.
inline bool contains(const Box& b, const Point& p) {
    return b.x1 <= p.x && p.x <= b.x2 && b.y1 <= p.y && p.y <= b.y2;
}

// Intersection over union. Degenerate (zero-area) operands yield 0 rather
// than an error; detectors do emit near-degenerate boxes.
inline double iou(const Box& a, const Box& b) {
    const double ox = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
    const double oy = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
    if (ox <= 0.0 || oy <= 0.0) return 0.0;
    const double inter = ox * oy;
    const double uni = area(a) + area(b) - inter;
    return uni > 0.0 ? inter / uni : 0.0;
}

// Per-frame-pair dynamicity attributes. arc and area_change are undefined
// (nullopt) when either box is degenerate; such pairs are excluded from
// histograms downstream.
struct AttributePair {
    double adjacent_iou = 0.0;             // in [0,1]
    std::optional<double> arc;             // (w_prev/h_prev) / (w_cur/h_cur)
    std::optional<double> area_change;     // (w_prev*h_prev) / (w_cur*h_cur)
    double object_motion = 0.0;            // L1 center displacement, px
};

inline AttributePair attribute_pair(const Box& prev, const Box& cur) {
    AttributePair out;
    out.adjacent_iou = iou(prev, cur);
    const double wp = prev.width(), hp = prev.height();
    const double wc = cur.width(), hc = cur.height();
    if (wp > 0.0 && hp > 0.0 && wc > 0.0 && hc > 0.0) {
        out.arc = (wp / hp) / (wc / hc);
        out.area_change = (wp * hp) / (wc * hc);
    }
    out.object_motion = std::abs(cur.cx() - prev.cx()) + std::abs(cur.cy() - prev.cy());
    return out;
}

}  // namespace poitrack
