#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

namespace signpath {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point& a, const Point& b) { return a.x == b.x && a.y == b.y; }
};

/// Axis-aligned rectangle, stored as min/max corners.
struct Rect {
    double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;

    static Rect from_corners(Point a, Point b) {
        return {std::min(a.x, b.x), std::min(a.y, b.y), std::max(a.x, b.x), std::max(a.y, b.y)};
    }

    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    Point center() const { return {(x0 + x1) / 2.0, (y0 + y1) / 2.0}; }

    Rect inflated(double r) const { return {x0 - r, y0 - r, x1 + r, y1 + r}; }

    bool contains(Point p) const { return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1; }

    std::array<Point, 4> corners() const {
        return {Point{x0, y0}, Point{x1, y0}, Point{x1, y1}, Point{x0, y1}};
    }

    friend bool operator==(const Rect& a, const Rect& b) {
        return a.x0 == b.x0 && a.y0 == b.y0 && a.x1 == b.x1 && a.y1 == b.y1;
    }
};

/// Simple polygon given by its vertex loop (no closing duplicate).
using Polygon = std::vector<Point>;

inline double cross(Point o, Point a, Point b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

inline int orientation(Point o, Point a, Point b) {
    double c = cross(o, a, b);
    if (c > 0.0) return 1;
    if (c < 0.0) return -1;
    return 0;
}

/// p collinear with [a,b] and inside its bounding box.
inline bool on_segment(Point p, Point a, Point b) {
    if (orientation(a, b, p) != 0) return false;
    return p.x >= std::min(a.x, b.x) && p.x <= std::max(a.x, b.x) &&
           p.y >= std::min(a.y, b.y) && p.y <= std::max(a.y, b.y);
}

/// Closed-segment intersection test (touching endpoints count).
inline bool segments_intersect(Point a, Point b, Point c, Point d) {
    int o1 = orientation(a, b, c);
    int o2 = orientation(a, b, d);
    int o3 = orientation(c, d, a);
    int o4 = orientation(c, d, b);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment(c, a, b)) return true;
    if (o2 == 0 && on_segment(d, a, b)) return true;
    if (o3 == 0 && on_segment(a, c, d)) return true;
    if (o4 == 0 && on_segment(b, c, d)) return true;
    return false;
}

inline double point_segment_distance(Point p, Point a, Point b) {
    double vx = b.x - a.x, vy = b.y - a.y;
    double len2 = vx * vx + vy * vy;
    double t = 0.0;
    if (len2 > 0.0) t = std::clamp(((p.x - a.x) * vx + (p.y - a.y) * vy) / len2, 0.0, 1.0);
    double dx = p.x - (a.x + t * vx), dy = p.y - (a.y + t * vy);
    return std::sqrt(dx * dx + dy * dy);
}

inline double segment_distance(Point a, Point b, Point c, Point d) {
    if (segments_intersect(a, b, c, d)) return 0.0;
    return std::min(std::min(point_segment_distance(a, c, d), point_segment_distance(b, c, d)),
                    std::min(point_segment_distance(c, a, b), point_segment_distance(d, a, b)));
}

/// Even-odd point-in-polygon test; boundary points count as inside.
inline bool point_in_polygon(Point p, const Polygon& poly) {
    const std::size_t n = poly.size();
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        Point a = poly[j], b = poly[i];
        if (on_segment(p, a, b)) return true;
        bool straddles = (b.y > p.y) != (a.y > p.y);
        if (straddles) {
            double xi = (a.x - b.x) * (p.y - b.y) / (a.y - b.y) + b.x;
            if (p.x < xi) inside = !inside;
        }
    }
    return inside;
}

/// Area-level overlap between a simple polygon and a rectangle
/// (shared boundary points count as overlap).
inline bool polygon_intersects_rect(const Polygon& poly, const Rect& r) {
    for (const Point& v : poly)
        if (r.contains(v)) return true;
    Polygon rp = {{r.x0, r.y0}, {r.x1, r.y0}, {r.x1, r.y1}, {r.x0, r.y1}};
    for (const Point& c : rp)
        if (point_in_polygon(c, poly)) return true;
    const std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++)
        for (std::size_t k = 0; k < 4; ++k)
            if (segments_intersect(poly[j], poly[i], rp[k], rp[(k + 1) % 4])) return true;
    return false;
}

/// Minimum distance between a polygon (with interior) and a rectangle;
/// zero when they overlap.
inline double polygon_rect_distance(const Polygon& poly, const Rect& r) {
    if (polygon_intersects_rect(poly, r)) return 0.0;
    Polygon rp = {{r.x0, r.y0}, {r.x1, r.y0}, {r.x1, r.y1}, {r.x0, r.y1}};
    double best = std::numeric_limits<double>::infinity();
    const std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++)
        for (std::size_t k = 0; k < 4; ++k)
            best = std::min(best, segment_distance(poly[j], poly[i], rp[k], rp[(k + 1) % 4]));
    return best;
}

/// True when the rectangle lies entirely inside the polygon. Boundary-tight
/// configurations resolve to false, which is the conservative direction for
/// the callers (a cell that is merely touched is treated as not fully
/// covered).
inline bool polygon_contains_rect(const Polygon& poly, const Rect& r) {
    if (!point_in_polygon(r.center(), poly)) return false;
    for (const Point& c : r.corners())
        if (!point_in_polygon(c, poly)) return false;
    Polygon rp = {{r.x0, r.y0}, {r.x1, r.y0}, {r.x1, r.y1}, {r.x0, r.y1}};
    const std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++)
        for (std::size_t k = 0; k < 4; ++k)
            if (segments_intersect(poly[j], poly[i], rp[k], rp[(k + 1) % 4])) return false;
    return true;
}

/// Checks that no two non-adjacent edges intersect.
inline bool polygon_is_simple(const Polygon& poly) {
    const std::size_t n = poly.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i) {
        Point a = poly[i], b = poly[(i + 1) % n];
        for (std::size_t j = i + 1; j < n; ++j) {
            if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
            Point c = poly[j], d = poly[(j + 1) % n];
            if (segments_intersect(a, b, c, d)) return false;
        }
    }
    return true;
}

} // namespace signpath
