#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "signpath/errors.hpp"
#include "signpath/geometry.hpp"

namespace signpath {

struct AgentPose {
    Point position;
    double heading = 0.0; // radians, world frame
};

/// Axis-aligned square in world coordinates.
struct Square {
    Point center;
    double side = 0.0;

    std::array<Point, 4> corners() const {
        double h = side / 2.0;
        return {Point{center.x - h, center.y - h}, Point{center.x + h, center.y - h},
                Point{center.x + h, center.y + h}, Point{center.x - h, center.y + h}};
    }

    Rect rect() const {
        double h = side / 2.0;
        return {center.x - h, center.y - h, center.x + h, center.y + h};
    }
};

/// Goal area in the agent-centered polar frame: four (r, phi) pairs bounding
/// an annular sector. Angles are taken modulo 2*pi; the angular span is the
/// minimal arc covering all four bearings.
struct PolarRegion {
    std::array<std::pair<double, double>, 4> corners; // (radius m, bearing rad)

    double r_min() const {
        double r = corners[0].first;
        for (auto& [cr, cphi] : corners) r = std::min(r, cr);
        return r;
    }

    double r_max() const {
        double r = corners[0].first;
        for (auto& [cr, cphi] : corners) r = std::max(r, cr);
        return r;
    }

    /// Minimal covering arc as (start, width), start normalized to [0, 2pi).
    std::pair<double, double> arc() const {
        std::array<double, 4> a{};
        for (std::size_t i = 0; i < 4; ++i) {
            double phi = std::fmod(corners[i].second, 2.0 * std::numbers::pi);
            if (phi < 0) phi += 2.0 * std::numbers::pi;
            a[i] = phi;
        }
        std::sort(a.begin(), a.end());
        double best_gap = a[0] + 2.0 * std::numbers::pi - a[3];
        std::size_t after = 0; // arc starts after the widest gap
        for (std::size_t i = 0; i + 1 < 4; ++i) {
            double gap = a[i + 1] - a[i];
            if (gap > best_gap) {
                best_gap = gap;
                after = i + 1;
            }
        }
        return {a[after % 4], 2.0 * std::numbers::pi - best_gap};
    }

    void validate() const {
        for (auto& [r, phi] : corners) {
            (void)phi;
            if (r < 0.0) throw empty_region("polar corner with negative radius");
        }
        if (r_max() <= 0.0) throw empty_region("polar region collapses onto the agent");
    }
};

/// Smallest axis-aligned square (side at least `min_side`) containing the
/// Cartesian image of the sector, anchored at the agent pose. Extremes occur
/// at the four corners and wherever the sector sweeps across an axis-aligned
/// bearing, always at the radial limits.
inline Square polar_to_square(const PolarRegion& region, const AgentPose& pose,
                              double min_side = 1.0) {
    region.validate();
    auto [arc_start, arc_width] = region.arc();
    double r0 = region.r_min(), r1 = region.r_max();
    double t0 = pose.heading + arc_start;
    double t1 = t0 + arc_width;

    std::vector<double> angles = {t0, t1};
    double half_pi = std::numbers::pi / 2.0;
    double k = std::ceil(t0 / half_pi);
    for (double t = k * half_pi; t <= t1 + 1e-12; t += half_pi) angles.push_back(t);

    double x0 = std::numeric_limits<double>::infinity(), y0 = x0;
    double x1 = -x0, y1 = -y0;
    for (double r : {r0, r1}) {
        for (double t : angles) {
            double x = r * std::cos(t), y = r * std::sin(t);
            x0 = std::min(x0, x);
            y0 = std::min(y0, y);
            x1 = std::max(x1, x);
            y1 = std::max(y1, y);
        }
    }

    Square sq;
    sq.side = std::max({x1 - x0, y1 - y0, min_side});
    sq.center = {pose.position.x + (x0 + x1) / 2.0, pose.position.y + (y0 + y1) / 2.0};
    return sq;
}

/// Inverse mapping: the square's corners expressed in the agent-centered
/// polar frame, bearings in (-pi, pi].
inline PolarRegion square_to_polar(const Square& square, const AgentPose& pose) {
    Rect r = square.rect();
    if (pose.position.x > r.x0 && pose.position.x < r.x1 && pose.position.y > r.y0 &&
        pose.position.y < r.y1)
        throw agent_inside_region("agent position lies inside the square");
    PolarRegion region;
    auto cs = square.corners();
    for (std::size_t i = 0; i < 4; ++i) {
        double dx = cs[i].x - pose.position.x;
        double dy = cs[i].y - pose.position.y;
        double phi = std::atan2(dy, dx) - pose.heading;
        while (phi <= -std::numbers::pi) phi += 2.0 * std::numbers::pi;
        while (phi > std::numbers::pi) phi -= 2.0 * std::numbers::pi;
        region.corners[i] = {std::hypot(dx, dy), phi};
    }
    return region;
}

/// Crisp vocabulary grounding the linguistic distance/bearing terms to
/// (r, phi) intervals. Bearings follow the agent frame: positive is
/// counterclockwise (leftward).
struct FuzzyVocabulary {
    std::map<std::string, std::pair<double, double>> distance_terms; // meters
    std::map<std::string, std::pair<double, double>> bearing_terms;  // radians

    static FuzzyVocabulary defaults() {
        constexpr double pi = std::numbers::pi;
        FuzzyVocabulary v;
        v.distance_terms = {{"near", {0.5, 4.0}}, {"midway", {4.0, 10.0}}, {"afar", {10.0, 25.0}}};
        v.bearing_terms = {{"ahead", {-pi / 12, pi / 12}},
                           {"leftward", {pi / 12, 5 * pi / 12}},
                           {"left", {5 * pi / 12, 7 * pi / 12}},
                           {"rightward", {-5 * pi / 12, -pi / 12}},
                           {"right", {-7 * pi / 12, -5 * pi / 12}},
                           {"behind", {11 * pi / 12, 13 * pi / 12}}};
        return v;
    }

    PolarRegion region(const std::string& distance, const std::string& bearing) const {
        auto d = distance_terms.find(distance);
        if (d == distance_terms.end()) throw not_found("unknown distance term: " + distance);
        auto b = bearing_terms.find(bearing);
        if (b == bearing_terms.end()) throw not_found("unknown bearing term: " + bearing);
        PolarRegion r;
        r.corners = {std::pair{d->second.first, b->second.first},
                     std::pair{d->second.first, b->second.second},
                     std::pair{d->second.second, b->second.first},
                     std::pair{d->second.second, b->second.second}};
        return r;
    }
};

} // namespace signpath
