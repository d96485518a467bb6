#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "signpath/errors.hpp"
#include "signpath/geometry.hpp"

namespace signpath {

using ObstacleId = int;

/// Column/row address of a grid cell. Ordering is row-major, which is the
/// "cell index" order used for all deterministic tie-breaking.
struct CellIndex {
    int col = 0;
    int row = 0;

    friend bool operator==(const CellIndex&, const CellIndex&) = default;
    friend auto operator<=>(const CellIndex& a, const CellIndex& b) {
        if (auto c = a.row <=> b.row; c != 0) return c;
        return a.col <=> b.col;
    }
};

struct CellState {
    bool traversable = true;
    std::optional<ObstacleId> obstacle_id;
};

struct Obstacle {
    ObstacleId id = 0;
    Polygon vertices;
    bool destroyable = false;
};

/// Continuous world: rectangular bounds, polygonal obstacles, a circular
/// agent and a square goal area.
struct WorldDescription {
    Rect bounds;
    std::vector<Obstacle> obstacles;
    double agent_radius = 0.0;
    Point agent_position;
    std::array<Point, 4> goal_square{};

    Rect goal_rect() const {
        Rect r{goal_square[0].x, goal_square[0].y, goal_square[0].x, goal_square[0].y};
        for (const Point& p : goal_square) {
            r.x0 = std::min(r.x0, p.x);
            r.y0 = std::min(r.y0, p.y);
            r.x1 = std::max(r.x1, p.x);
            r.y1 = std::max(r.y1, p.y);
        }
        return r;
    }

    double goal_side() const { return goal_rect().width(); }

    const Obstacle* find_obstacle(ObstacleId id) const {
        for (const Obstacle& o : obstacles)
            if (o.id == id) return &o;
        return nullptr;
    }

    /// Throws invalid_world when a structural invariant is broken.
    void validate() const;
};

/// Dense rectangular cell lattice. Each blocked cell carries exactly one
/// obstacle id; the registry maps ids to their destroyable flag.
class GridMap {
public:
    GridMap() = default;
    GridMap(int width, int height, double cell_size = 1.0, Point origin = {})
        : width_(width), height_(height), cell_size_(cell_size), origin_(origin),
          cells_(static_cast<std::size_t>(width) * height, kFree) {}

    int width() const { return width_; }
    int height() const { return height_; }
    double cell_size() const { return cell_size_; }
    Point origin() const { return origin_; }
    std::size_t cell_count() const { return cells_.size(); }

    bool in_bounds(CellIndex c) const {
        return c.col >= 0 && c.row >= 0 && c.col < width_ && c.row < height_;
    }

    std::size_t index(CellIndex c) const {
        return static_cast<std::size_t>(c.row) * width_ + c.col;
    }

    CellIndex cell_from_index(std::size_t i) const {
        return {static_cast<int>(i % width_), static_cast<int>(i / width_)};
    }

    /// Out-of-bounds cells read as not traversable.
    bool traversable(CellIndex c) const { return in_bounds(c) && cells_[index(c)] == kFree; }

    std::optional<ObstacleId> obstacle_at(CellIndex c) const {
        if (!in_bounds(c) || cells_[index(c)] == kFree) return std::nullopt;
        return cells_[index(c)];
    }

    CellState cell_state(CellIndex c) const {
        CellState s;
        s.obstacle_id = obstacle_at(c);
        s.traversable = !s.obstacle_id.has_value();
        return s;
    }

    void set_blocked(CellIndex c, ObstacleId id) { cells_[index(c)] = id; }
    void set_free(CellIndex c) { cells_[index(c)] = kFree; }

    void register_obstacle(ObstacleId id, bool destroyable) { registry_[id] = destroyable; }

    std::optional<bool> obstacle_destroyable(ObstacleId id) const {
        auto it = registry_.find(id);
        if (it == registry_.end()) return std::nullopt;
        return it->second;
    }

    const std::map<ObstacleId, bool>& obstacle_registry() const { return registry_; }

    /// Frees every cell carrying `id` and drops it from the registry.
    /// Suitable for grids built directly from cell data; worlds with
    /// overlapping polygons go through destroy_obstacle() instead.
    void clear_obstacle(ObstacleId id) {
        for (auto& c : cells_)
            if (c == id) c = kFree;
        registry_.erase(id);
    }

    Rect cell_rect(CellIndex c) const {
        double x = origin_.x + c.col * cell_size_;
        double y = origin_.y + c.row * cell_size_;
        return {x, y, x + cell_size_, y + cell_size_};
    }

    Point cell_center(CellIndex c) const {
        return {origin_.x + (c.col + 0.5) * cell_size_, origin_.y + (c.row + 0.5) * cell_size_};
    }

    /// Cell containing a world point; points on the max edge clamp inward.
    CellIndex cell_at(Point p) const {
        int col = static_cast<int>(std::floor((p.x - origin_.x) / cell_size_));
        int row = static_cast<int>(std::floor((p.y - origin_.y) / cell_size_));
        col = std::clamp(col, 0, width_ - 1);
        row = std::clamp(row, 0, height_ - 1);
        return {col, row};
    }

    std::size_t free_cell_count() const {
        return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), kFree));
    }

    std::optional<CellIndex> agent_cell() const { return agent_cell_; }
    std::optional<CellIndex> goal_cell() const { return goal_cell_; }
    void set_agent_cell(std::optional<CellIndex> c) { agent_cell_ = c; }
    void set_goal_cell(std::optional<CellIndex> c) { goal_cell_ = c; }

    friend bool operator==(const GridMap& a, const GridMap& b) {
        return a.width_ == b.width_ && a.height_ == b.height_ && a.cell_size_ == b.cell_size_ &&
               a.origin_ == b.origin_ && a.cells_ == b.cells_ && a.registry_ == b.registry_ &&
               a.agent_cell_ == b.agent_cell_ && a.goal_cell_ == b.goal_cell_;
    }

private:
    static constexpr ObstacleId kFree = -1;

    int width_ = 0;
    int height_ = 0;
    double cell_size_ = 1.0;
    Point origin_;
    std::vector<ObstacleId> cells_;
    std::map<ObstacleId, bool> registry_;
    std::optional<CellIndex> agent_cell_;
    std::optional<CellIndex> goal_cell_;
};

inline void WorldDescription::validate() const {
    if (!(bounds.x0 < bounds.x1) || !(bounds.y0 < bounds.y1))
        throw invalid_world("world bounds are empty or inverted");
    if (!(agent_radius > 0.0)) throw invalid_world("agent radius must be positive");
    if (!bounds.contains(agent_position)) throw invalid_world("agent position outside bounds");

    Rect g = goal_rect();
    double side = g.width();
    if (std::abs(g.width() - g.height()) > 1e-9 * std::max(1.0, side))
        throw invalid_world("goal square is not square");
    // Corners must be exactly the four corners of the rect, in any order.
    for (const Point& p : goal_square) {
        bool on_x = p.x == g.x0 || p.x == g.x1;
        bool on_y = p.y == g.y0 || p.y == g.y1;
        if (!on_x || !on_y) throw invalid_world("goal square is not axis-aligned");
    }
    if (!(side > 2.0 * agent_radius))
        throw invalid_world("goal square side must exceed the agent diameter");

    std::map<ObstacleId, int> seen;
    for (const Obstacle& o : obstacles) {
        if (++seen[o.id] > 1) throw invalid_world("duplicate obstacle id");
        if (o.vertices.size() < 3) throw invalid_world("obstacle polygon needs >= 3 vertices");
        if (!polygon_is_simple(o.vertices)) throw invalid_world("obstacle polygon self-intersects");
        for (const Point& v : o.vertices)
            if (!bounds.contains(v)) throw invalid_world("obstacle vertex outside bounds");
    }
}

/// Rasterizes the world onto a grid whose cell size equals the goal square
/// side. A cell is blocked when some obstacle comes within agent_radius of
/// the cell rectangle (configuration-space inflation), so a free cell center
/// is always a valid position for the circular agent. Ties between
/// overlapping obstacles resolve to the lowest id.
inline GridMap rasterize(const WorldDescription& world) {
    world.validate();

    const double s = world.goal_side();
    const int width = static_cast<int>(std::ceil(world.bounds.width() / s - 1e-9));
    const int height = static_cast<int>(std::ceil(world.bounds.height() / s - 1e-9));
    GridMap grid(std::max(width, 1), std::max(height, 1), s, {world.bounds.x0, world.bounds.y0});

    std::vector<const Obstacle*> order;
    order.reserve(world.obstacles.size());
    for (const Obstacle& o : world.obstacles) order.push_back(&o);
    std::sort(order.begin(), order.end(),
              [](const Obstacle* a, const Obstacle* b) { return a->id < b->id; });

    const double r = world.agent_radius;
    for (const Obstacle* o : order) {
        grid.register_obstacle(o->id, o->destroyable);
        Rect bb = Rect::from_corners(o->vertices[0], o->vertices[0]);
        for (const Point& v : o->vertices) {
            bb.x0 = std::min(bb.x0, v.x);
            bb.y0 = std::min(bb.y0, v.y);
            bb.x1 = std::max(bb.x1, v.x);
            bb.y1 = std::max(bb.y1, v.y);
        }
        bb = bb.inflated(r + grid.cell_size());
        CellIndex lo = grid.cell_at({bb.x0, bb.y0});
        CellIndex hi = grid.cell_at({bb.x1, bb.y1});
        for (int row = lo.row; row <= hi.row; ++row) {
            for (int col = lo.col; col <= hi.col; ++col) {
                CellIndex c{col, row};
                if (!grid.traversable(c)) continue; // lowest id wins
                if (polygon_rect_distance(o->vertices, grid.cell_rect(c)) <= r)
                    grid.set_blocked(c, o->id);
            }
        }
    }

    CellIndex agent = grid.cell_at(world.agent_position);
    CellIndex goal = grid.cell_at(world.goal_rect().center());
    grid.set_agent_cell(agent);
    grid.set_goal_cell(goal);

    if (!grid.traversable(agent))
        throw invalid_start("agent cell is blocked after obstacle inflation");
    if (auto id = grid.obstacle_at(goal)) {
        const Obstacle* o = world.find_obstacle(*id);
        if (o && !o->destroyable && polygon_contains_rect(o->vertices, grid.cell_rect(goal)))
            throw invalid_goal("goal cell fully covered by a non-destroyable obstacle");
    }
    return grid;
}

namespace detail {
// Neighborhood scan order: N, NE, E, SE, S, SW, W, NW (row axis points south).
inline constexpr std::array<std::pair<int, int>, 8> kNeighborSteps = {
    {{0, -1}, {1, -1}, {1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}}};
} // namespace detail

/// Visits the traversable moves out of `cell`. Diagonal steps require both
/// shared cardinal neighbors free, so a path can never clip an obstacle
/// corner. Callback receives (neighbor, step cost in cell units).
template <typename F>
inline void for_each_neighbor(const GridMap& grid, CellIndex cell, F&& fn) {
    if (!grid.traversable(cell)) return;
    for (auto [dx, dy] : detail::kNeighborSteps) {
        CellIndex n{cell.col + dx, cell.row + dy};
        if (!grid.traversable(n)) continue;
        if (dx != 0 && dy != 0) {
            if (!grid.traversable({cell.col + dx, cell.row}) ||
                !grid.traversable({cell.col, cell.row + dy}))
                continue;
            fn(n, std::numbers::sqrt2);
        } else {
            fn(n, 1.0);
        }
    }
}

/// Move-rule neighborhood as a materialized list. A blocked input cell
/// yields an empty sequence.
inline std::vector<std::pair<CellIndex, double>> neighbors(const GridMap& grid, CellIndex cell) {
    std::vector<std::pair<CellIndex, double>> out;
    out.reserve(8);
    for_each_neighbor(grid, cell, [&](CellIndex n, double cost) { out.emplace_back(n, cost); });
    return out;
}

/// Removes a destroyable obstacle from the world and re-rasterizes, so cells
/// shared with other obstacles stay blocked. The traversable set only grows.
inline void destroy_obstacle(GridMap& grid, WorldDescription& world, ObstacleId id) {
    auto it = std::find_if(world.obstacles.begin(), world.obstacles.end(),
                           [&](const Obstacle& o) { return o.id == id; });
    if (it == world.obstacles.end()) throw not_found("unknown obstacle id");
    if (!it->destroyable) throw not_destroyable("obstacle is not destroyable");
    world.obstacles.erase(it);
    grid = rasterize(world);
}

} // namespace signpath
