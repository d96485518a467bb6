#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <queue>
#include <utility>
#include <vector>

#include "signpath/grid.hpp"

namespace signpath {

/// Octile distance: admissible and consistent for the 8-connected
/// neighborhood with unit cardinal and sqrt(2) diagonal costs.
inline double octile(CellIndex a, CellIndex b) {
    double dx = std::abs(a.col - b.col);
    double dy = std::abs(a.row - b.row);
    return std::max(dx, dy) + (std::numbers::sqrt2 - 1.0) * std::min(dx, dy);
}

enum class SearchOutcome { Found, NoPath };

struct SearchResult {
    SearchOutcome outcome = SearchOutcome::NoPath;
    std::vector<CellIndex> path;  // start..goal, cell by cell, when Found
    double cost = 0.0;            // path length in cell units
    std::size_t expanded = 0;     // nodes taken off OPEN and processed
    std::vector<std::pair<CellIndex, double>> closed; // (cell, h), when requested
    std::int64_t elapsed_us = 0;
};

/// One of the 8 unit moves.
struct Step {
    int dx = 0;
    int dy = 0;

    friend bool operator==(const Step&, const Step&) = default;
};

namespace detail {

struct OpenEntry {
    double f;
    double g;
    std::size_t idx; // row-major cell index
};

// Equal f broken by larger g (goal-ward bias), then by smaller cell index.
struct OpenWorse {
    bool operator()(const OpenEntry& a, const OpenEntry& b) const {
        if (a.f != b.f) return a.f > b.f;
        if (a.g != b.g) return a.g < b.g;
        return a.idx > b.idx;
    }
};

using OpenQueue = std::priority_queue<OpenEntry, std::vector<OpenEntry>, OpenWorse>;

inline std::vector<CellIndex> unwind_path(const GridMap& grid,
                                          const std::vector<std::int64_t>& parent,
                                          CellIndex goal) {
    std::vector<CellIndex> path;
    std::int64_t at = static_cast<std::int64_t>(grid.index(goal));
    while (at >= 0) {
        path.push_back(grid.cell_from_index(static_cast<std::size_t>(at)));
        at = parent[static_cast<std::size_t>(at)];
    }
    std::reverse(path.begin(), path.end());
    return path;
}

inline double path_cost(const std::vector<CellIndex>& path) {
    double cost = 0.0;
    for (std::size_t i = 1; i < path.size(); ++i) {
        bool diag = path[i].col != path[i - 1].col && path[i].row != path[i - 1].row;
        cost += diag ? std::numbers::sqrt2 : 1.0;
    }
    return cost;
}

} // namespace detail

/// A* with the octile heuristic. On failure the search has expanded every
/// traversable cell reachable from the start, so with keep_closed the CLOSED
/// set is exactly that region, each cell paired with its h-value. A blocked
/// goal is not an error: the full CLOSED set is what blockage analysis needs.
inline SearchResult astar(const GridMap& grid, CellIndex start, CellIndex goal,
                          bool keep_closed = false) {
    if (!grid.traversable(start)) throw invalid_start("search start cell is blocked");
    auto t0 = std::chrono::steady_clock::now();

    SearchResult result;
    const std::size_t n = grid.cell_count();
    std::vector<double> g(n, std::numeric_limits<double>::infinity());
    std::vector<std::int64_t> parent(n, -1);
    std::vector<char> closed(n, 0);

    detail::OpenQueue open;
    const std::size_t start_idx = grid.index(start);
    g[start_idx] = 0.0;
    open.push({octile(start, goal), 0.0, start_idx});

    while (!open.empty()) {
        detail::OpenEntry top = open.top();
        open.pop();
        if (closed[top.idx] || top.g != g[top.idx]) continue; // stale entry
        closed[top.idx] = 1;
        ++result.expanded;
        CellIndex cell = grid.cell_from_index(top.idx);
        if (keep_closed) result.closed.emplace_back(cell, octile(cell, goal));

        if (cell == goal) {
            result.outcome = SearchOutcome::Found;
            result.path = detail::unwind_path(grid, parent, goal);
            result.cost = g[top.idx];
            break;
        }

        for_each_neighbor(grid, cell, [&](CellIndex nb, double step_cost) {
            std::size_t ni = grid.index(nb);
            if (closed[ni]) return;
            double ng = top.g + step_cost;
            if (ng < g[ni]) {
                g[ni] = ng;
                parent[ni] = static_cast<std::int64_t>(top.idx);
                open.push({ng + octile(nb, goal), ng, ni});
            }
        });
    }

    result.elapsed_us = std::chrono::duration_cast<std::chrono::microseconds>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
    return result;
}

namespace detail {

inline bool diagonal_move_ok(const GridMap& g, CellIndex from, Step d) {
    return g.traversable({from.col + d.dx, from.row}) &&
           g.traversable({from.col, from.row + d.dy}) &&
           g.traversable({from.col + d.dx, from.row + d.dy});
}

// Forced stop for a cardinal scan in the corner-cut-forbidden neighborhood:
// a side cell is open but the diagonal behind it is walled, so paths to that
// side cell must pass through the scan cell.
inline bool cardinal_forced(const GridMap& g, CellIndex c, Step d) {
    if (d.dx != 0) {
        return (g.traversable({c.col, c.row - 1}) && !g.traversable({c.col - d.dx, c.row - 1})) ||
               (g.traversable({c.col, c.row + 1}) && !g.traversable({c.col - d.dx, c.row + 1}));
    }
    return (g.traversable({c.col - 1, c.row}) && !g.traversable({c.col - 1, c.row - d.dy})) ||
           (g.traversable({c.col + 1, c.row}) && !g.traversable({c.col + 1, c.row - d.dy}));
}

} // namespace detail

/// Scans from `from` along a unit move and returns the next jump point: the
/// goal, a cell with a forced neighbor, or (for diagonal scans) a cell whose
/// cardinal sub-scans find a jump point. Returns nullopt when the scan dies
/// against a wall or the border.
inline std::optional<CellIndex> jump(const GridMap& grid, CellIndex from, Step d, CellIndex goal) {
    if (d.dx == 0 && d.dy == 0) return std::nullopt;
    if (d.dx == 0 || d.dy == 0) {
        CellIndex c = from;
        while (true) {
            CellIndex next{c.col + d.dx, c.row + d.dy};
            if (!grid.traversable(next)) return std::nullopt;
            c = next;
            if (c == goal) return c;
            if (detail::cardinal_forced(grid, c, d)) return c;
        }
    }
    CellIndex c = from;
    while (true) {
        if (!detail::diagonal_move_ok(grid, c, d)) return std::nullopt;
        c = {c.col + d.dx, c.row + d.dy};
        if (c == goal) return c;
        if (jump(grid, c, {d.dx, 0}, goal) || jump(grid, c, {0, d.dy}, goal)) return c;
    }
}

/// Jump Point Search adapted to the no-corner-cutting neighborhood. Finds
/// the same optimal costs as astar() while expanding far fewer nodes; the
/// returned path is expanded to a cell-by-cell sequence.
inline SearchResult jps(const GridMap& grid, CellIndex start, CellIndex goal) {
    if (!grid.traversable(start)) throw invalid_start("search start cell is blocked");
    auto t0 = std::chrono::steady_clock::now();

    SearchResult result;
    const std::size_t n = grid.cell_count();
    std::vector<double> g(n, std::numeric_limits<double>::infinity());
    std::vector<std::int64_t> parent(n, -1);
    std::vector<char> closed(n, 0);

    detail::OpenQueue open;
    const std::size_t start_idx = grid.index(start);
    g[start_idx] = 0.0;
    open.push({octile(start, goal), 0.0, start_idx});

    auto relax = [&](CellIndex from, CellIndex to) {
        std::size_t ti = grid.index(to);
        if (closed[ti]) return;
        int steps = std::max(std::abs(to.col - from.col), std::abs(to.row - from.row));
        bool diag = to.col != from.col && to.row != from.row;
        double ng = g[grid.index(from)] + steps * (diag ? std::numbers::sqrt2 : 1.0);
        if (ng < g[ti]) {
            g[ti] = ng;
            parent[ti] = static_cast<std::int64_t>(grid.index(from));
            open.push({ng + octile(to, goal), ng, ti});
        }
    };

    // Successor moves by arrival direction. Side moves are generated
    // liberally for cardinal arrivals; the pruning power lives in the
    // forced-stop rules of jump().
    auto successor_dirs = [&](CellIndex c, std::optional<Step> arrive) {
        std::vector<Step> dirs;
        dirs.reserve(8);
        auto free = [&](int dx, int dy) { return grid.traversable({c.col + dx, c.row + dy}); };
        if (!arrive) {
            for (auto [dx, dy] : detail::kNeighborSteps) {
                if (dx != 0 && dy != 0) {
                    if (free(dx, 0) && free(0, dy) && free(dx, dy)) dirs.push_back({dx, dy});
                } else if (free(dx, dy)) {
                    dirs.push_back({dx, dy});
                }
            }
            return dirs;
        }
        Step d = *arrive;
        if (d.dx != 0 && d.dy != 0) {
            if (free(d.dx, 0)) dirs.push_back({d.dx, 0});
            if (free(0, d.dy)) dirs.push_back({0, d.dy});
            if (free(d.dx, 0) && free(0, d.dy) && free(d.dx, d.dy)) dirs.push_back(d);
        } else if (d.dx != 0) {
            if (free(d.dx, 0)) dirs.push_back({d.dx, 0});
            if (free(0, -1)) dirs.push_back({0, -1});
            if (free(0, 1)) dirs.push_back({0, 1});
            if (free(d.dx, 0) && free(0, -1) && free(d.dx, -1)) dirs.push_back({d.dx, -1});
            if (free(d.dx, 0) && free(0, 1) && free(d.dx, 1)) dirs.push_back({d.dx, 1});
        } else {
            if (free(0, d.dy)) dirs.push_back({0, d.dy});
            if (free(-1, 0)) dirs.push_back({-1, 0});
            if (free(1, 0)) dirs.push_back({1, 0});
            if (free(0, d.dy) && free(-1, 0) && free(-1, d.dy)) dirs.push_back({-1, d.dy});
            if (free(0, d.dy) && free(1, 0) && free(1, d.dy)) dirs.push_back({1, d.dy});
        }
        return dirs;
    };

    while (!open.empty()) {
        detail::OpenEntry top = open.top();
        open.pop();
        if (closed[top.idx] || top.g != g[top.idx]) continue;
        closed[top.idx] = 1;
        ++result.expanded;
        CellIndex cell = grid.cell_from_index(top.idx);

        if (cell == goal) {
            result.outcome = SearchOutcome::Found;
            // Jump-point chain, then interpolate the straight segments.
            std::vector<CellIndex> points = detail::unwind_path(grid, parent, goal);
            std::vector<CellIndex> path;
            path.push_back(points.front());
            for (std::size_t i = 1; i < points.size(); ++i) {
                CellIndex a = points[i - 1], b = points[i];
                int sx = (b.col > a.col) - (b.col < a.col);
                int sy = (b.row > a.row) - (b.row < a.row);
                CellIndex c = a;
                while (!(c == b)) {
                    c = {c.col + sx, c.row + sy};
                    path.push_back(c);
                }
            }
            result.path = std::move(path);
            result.cost = detail::path_cost(result.path);
            break;
        }

        std::optional<Step> arrive;
        if (parent[top.idx] >= 0) {
            CellIndex p = grid.cell_from_index(static_cast<std::size_t>(parent[top.idx]));
            arrive = Step{(cell.col > p.col) - (cell.col < p.col),
                          (cell.row > p.row) - (cell.row < p.row)};
        }
        for (Step d : successor_dirs(cell, arrive)) {
            if (auto j = jump(grid, cell, d, goal)) relax(cell, *j);
        }
    }

    result.elapsed_us = std::chrono::duration_cast<std::chrono::microseconds>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
    return result;
}

} // namespace signpath
