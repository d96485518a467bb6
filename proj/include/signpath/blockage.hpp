#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <unordered_set>
#include <vector>

#include "signpath/search.hpp"

namespace signpath {

/// Result of tracing and classifying the obstacle that blocks a failed
/// search. `contour` is the set of traversable cells hugging the blocked
/// component(s) touched by the seed; `reachable_contour` is its intersection
/// with the failed search's CLOSED set, which is where the agent can
/// actually stand.
struct ContourReport {
    CellIndex seed;
    std::vector<CellIndex> contour;           // sorted by cell index
    std::vector<ObstacleId> obstacle_ids;     // sorted
    bool destroyable = false;
    std::vector<CellIndex> reachable_contour; // sorted
};

/// CLOSED cell with the minimal h-value; ties break toward the smallest
/// cell index. On a failed search this cell is the metric-closest approach
/// to the goal and sits against the wall that blocks it.
inline CellIndex find_seed_cell(const std::vector<std::pair<CellIndex, double>>& closed,
                                CellIndex goal) {
    if (closed.empty()) throw no_closed_set("seed lookup over an empty CLOSED set");
    CellIndex best = closed.front().first;
    double best_h = octile(best, goal);
    for (const auto& [cell, h_stored] : closed) {
        (void)h_stored;
        double h = octile(cell, goal);
        if (h < best_h || (h == best_h && cell < best)) {
            best = cell;
            best_h = h;
        }
    }
    return best;
}

namespace detail {

// 8-connected blocked component containing `first`, as a set of row-major
// cell indices.
inline std::unordered_set<std::size_t> blocked_component(const GridMap& grid, CellIndex first) {
    std::unordered_set<std::size_t> comp;
    std::vector<CellIndex> stack{first};
    comp.insert(grid.index(first));
    while (!stack.empty()) {
        CellIndex c = stack.back();
        stack.pop_back();
        for (auto [dx, dy] : kNeighborSteps) {
            CellIndex n{c.col + dx, c.row + dy};
            if (!grid.in_bounds(n) || grid.traversable(n)) continue;
            if (comp.insert(grid.index(n)).second) stack.push_back(n);
        }
    }
    return comp;
}

inline bool adjacent_to(const GridMap& grid, CellIndex c,
                        const std::unordered_set<std::size_t>& comp) {
    for (auto [dx, dy] : kNeighborSteps) {
        CellIndex n{c.col + dx, c.row + dy};
        if (grid.in_bounds(n) && comp.count(grid.index(n))) return true;
    }
    return false;
}

inline Step rotate_cw(Step d) { return {-d.dy, d.dx}; }   // N->E->S->W (row axis south)
inline Step rotate_ccw(Step d) { return {d.dy, -d.dx}; }

} // namespace detail

struct TraceStats {
    std::size_t steps = 0;
    std::size_t visited_cells = 0;
};

/// Right-hand wall following around the blocked component(s) touched by the
/// seed. The walk starts with the wall on the right hand, moves cardinally
/// through free cells (the border counts as wall) and stops when the start
/// pose comes around again; every visited cell 8-adjacent to the component
/// is collected. With the corner-cut prohibition, free-space reachability
/// equals 4-connectivity, so the circuit covers exactly the wall-connected
/// side(s) the seed can reach.
inline std::vector<CellIndex> trace_contour(const GridMap& grid, CellIndex seed,
                                            TraceStats* stats = nullptr) {
    if (!grid.traversable(seed)) throw not_a_seed("seed cell is not traversable");

    // Cardinal contacts first: all 8-neighbors are at distance one, the
    // cardinal ones are nearest in the metric sense.
    static constexpr std::array<std::pair<int, int>, 8> kScan = {
        {{0, -1}, {1, 0}, {0, 1}, {-1, 0}, {1, -1}, {1, 1}, {-1, 1}, {-1, -1}}};

    std::vector<std::unordered_set<std::size_t>> components;
    auto labeled = [&](CellIndex c) {
        for (const auto& comp : components)
            if (comp.count(grid.index(c))) return true;
        return false;
    };
    for (auto [dx, dy] : kScan) {
        CellIndex n{seed.col + dx, seed.row + dy};
        if (!grid.in_bounds(n) || grid.traversable(n) || labeled(n)) continue;
        components.push_back(detail::blocked_component(grid, n));
    }
    if (components.empty()) throw not_a_seed("seed cell touches no blocked cell");

    if (stats) *stats = {};
    std::set<CellIndex> contour;

    for (const auto& comp : components) {
        // Start pose: seed itself when it has a cardinal contact with this
        // component, otherwise the free cardinal cell beside the diagonal
        // contact (it always exists and touches the component cardinally).
        CellIndex at = seed;
        std::optional<Step> wall_dir;
        for (auto [dx, dy] : kScan) {
            CellIndex n{seed.col + dx, seed.row + dy};
            if (!grid.in_bounds(n) || !comp.count(grid.index(n))) continue;
            if (dx == 0 || dy == 0) {
                wall_dir = Step{dx, dy};
            } else {
                at = {seed.col, seed.row + dy};
                wall_dir = Step{dx, 0};
            }
            break;
        }
        if (!wall_dir) continue;

        Step heading = detail::rotate_ccw(*wall_dir); // wall on the right hand

        auto collect = [&](CellIndex c) {
            if (detail::adjacent_to(grid, c, comp)) contour.insert(c);
        };
        collect(at);

        // The synthesized start pose feeds into the boundary circuit but need
        // not lie on it, so the stop condition is the first repeated pose:
        // by then the whole cycle has been traversed once.
        auto pose_key = [&](CellIndex c, Step h) {
            int hk = (h.dy == -1) ? 0 : (h.dx == 1) ? 1 : (h.dy == 1) ? 2 : 3;
            return grid.index(c) * 4 + hk;
        };
        std::unordered_set<std::size_t> seen_poses{pose_key(at, heading)};
        std::unordered_set<std::size_t> visited_cells{grid.index(at)};
        std::size_t steps = 0;
        while (true) {
            Step tries[4] = {detail::rotate_cw(heading), heading, detail::rotate_ccw(heading),
                             {-heading.dx, -heading.dy}};
            bool moved = false;
            for (Step t : tries) {
                CellIndex target{at.col + t.dx, at.row + t.dy};
                if (!grid.traversable(target)) continue;
                at = target;
                heading = t;
                moved = true;
                break;
            }
            if (!moved) break; // walled in on all four sides
            ++steps;
            visited_cells.insert(grid.index(at));
            collect(at);
            if (!seen_poses.insert(pose_key(at, heading)).second) break;
        }
        if (stats) {
            stats->steps += steps;
            stats->visited_cells += visited_cells.size();
        }
    }

    return {contour.begin(), contour.end()};
}

/// Builds the report for a traced contour: collects the ids of every blocked
/// cell adjacent to a contour cell, marks the report destroyable only when
/// all of them are (a merged non-destroyable part cannot be removed), and
/// intersects the contour with the failed search's CLOSED set.
inline ContourReport classify(const GridMap& grid, CellIndex seed,
                              const std::vector<CellIndex>& contour,
                              const std::vector<std::pair<CellIndex, double>>& closed) {
    ContourReport report;
    report.seed = seed;
    report.contour = contour;
    std::sort(report.contour.begin(), report.contour.end());

    std::set<ObstacleId> ids;
    for (CellIndex c : report.contour) {
        for (auto [dx, dy] : detail::kNeighborSteps) {
            if (auto id = grid.obstacle_at({c.col + dx, c.row + dy})) ids.insert(*id);
        }
    }
    report.obstacle_ids.assign(ids.begin(), ids.end());

    report.destroyable = !ids.empty();
    for (ObstacleId id : ids) {
        auto flag = grid.obstacle_destroyable(id);
        if (!flag || !*flag) report.destroyable = false;
    }

    std::set<CellIndex> closed_cells;
    for (const auto& [cell, h] : closed) closed_cells.insert(cell);
    for (CellIndex c : report.contour)
        if (closed_cells.count(c)) report.reachable_contour.push_back(c);

    return report;
}

/// Convenience pipeline over a failed search: seed, contour, classification.
inline ContourReport identify_blockage(const GridMap& grid,
                                       const std::vector<std::pair<CellIndex, double>>& closed,
                                       CellIndex goal, TraceStats* stats = nullptr) {
    CellIndex seed = find_seed_cell(closed, goal);
    std::vector<CellIndex> contour = trace_contour(grid, seed, stats);
    return classify(grid, seed, contour, closed);
}

} // namespace signpath
