#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "signpath/blockage.hpp"
#include "oracles.hpp"

using namespace signpath;

namespace {

GridMap column_wall_5x5() {
    GridMap g(5, 5);
    g.register_obstacle(0, false);
    for (int r = 0; r < 5; ++r) g.set_blocked({2, r}, 0);
    return g;
}

std::set<CellIndex> as_set(const std::vector<CellIndex>& v) { return {v.begin(), v.end()}; }

// Drops an irregular blocked blob (random 4-connected growth) onto the grid.
void grow_blob(std::mt19937& rng, GridMap& g, ObstacleId id, CellIndex at, int cells,
               int margin) {
    g.register_obstacle(id, false);
    g.set_blocked(at, id);
    std::vector<CellIndex> frontier{at};
    for (int i = 1; i < cells && !frontier.empty(); ++i) {
        CellIndex base = frontier[rng() % frontier.size()];
        static constexpr int kCardinal[4][2] = {{0, -1}, {1, 0}, {0, 1}, {-1, 0}};
        auto [dx, dy] = kCardinal[rng() % 4];
        CellIndex n{base.col + dx, base.row + dy};
        if (n.col < margin || n.row < margin || n.col >= g.width() - margin ||
            n.row >= g.height() - margin)
            continue;
        if (!g.traversable(n)) continue;
        g.set_blocked(n, id);
        frontier.push_back(n);
    }
}

} // namespace

TEST_CASE("find_seed_cell: column wall instance picks the lowest-h frontier cell") {
    GridMap g = column_wall_5x5();
    SearchResult r = astar(g, {0, 0}, {4, 0}, true);
    REQUIRE(r.outcome == SearchOutcome::NoPath);
    CellIndex seed = find_seed_cell(r.closed, {4, 0});
    REQUIRE(seed == CellIndex{1, 0});
    REQUIRE(octile(seed, {4, 0}) == 3.0);
}

TEST_CASE("find_seed_cell: a CLOSED set containing the goal returns the goal") {
    std::vector<std::pair<CellIndex, double>> closed = {
        {{0, 0}, 0.0}, {{3, 3}, 0.0}, {{2, 1}, 0.0}};
    REQUIRE(find_seed_cell(closed, {3, 3}) == CellIndex{3, 3});
}

TEST_CASE("find_seed_cell: empty CLOSED set is an error") {
    REQUIRE_THROWS_AS(find_seed_cell({}, {0, 0}), no_closed_set);
}

TEST_CASE("find_seed_cell: ring around the goal seeds on the goal-facing side") {
    GridMap g(11, 11);
    g.register_obstacle(0, true);
    for (int i = 3; i <= 7; ++i) {
        g.set_blocked({i, 3}, 0);
        g.set_blocked({i, 7}, 0);
        g.set_blocked({3, i}, 0);
        g.set_blocked({7, i}, 0);
    }
    CellIndex goal{5, 5};
    SearchResult r = astar(g, {0, 0}, goal, true);
    REQUIRE(r.outcome == SearchOutcome::NoPath);
    CellIndex seed = find_seed_cell(r.closed, goal);

    // Brute-force min-h (ties by cell index) over the flooded region.
    auto region = oracles::flood_fill_reachable(g, {0, 0});
    CellIndex best = *region.begin();
    for (CellIndex c : region)
        if (octile(c, goal) < octile(best, goal) ||
            (octile(c, goal) == octile(best, goal) && c < best))
            best = c;
    REQUIRE(seed == best);

    bool wall_adjacent = false;
    for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx)
            if (!g.traversable({seed.col + dx, seed.row + dy})) wall_adjacent = true;
    REQUIRE(wall_adjacent);
}

TEST_CASE("trace_contour: 3x3 block in a 7x7 grid yields the 16-cell ring") {
    GridMap g(7, 7);
    g.register_obstacle(0, false);
    for (int r = 2; r <= 4; ++r)
        for (int c = 2; c <= 4; ++c) g.set_blocked({c, r}, 0);
    auto contour = trace_contour(g, {1, 1});
    std::set<CellIndex> expected;
    for (int r = 1; r <= 5; ++r)
        for (int c = 1; c <= 5; ++c)
            if (r == 1 || r == 5 || c == 1 || c == 5) expected.insert({c, r});
    REQUIRE(expected.size() == 16);
    REQUIRE(as_set(contour) == expected);
}

TEST_CASE("trace_contour: a single blocked cell is ringed by its 8 neighbors") {
    GridMap g(5, 5);
    g.register_obstacle(0, false);
    g.set_blocked({2, 2}, 0);
    auto contour = trace_contour(g, {1, 2});
    REQUIRE(contour.size() == 8);
    for (CellIndex c : contour)
        REQUIRE((std::abs(c.col - 2) <= 1 && std::abs(c.row - 2) <= 1));
}

TEST_CASE("trace_contour: full-width wall exposes only the seed's side") {
    GridMap g(7, 7);
    g.register_obstacle(0, false);
    for (int c = 0; c < 7; ++c) g.set_blocked({c, 3}, 0);
    auto contour = trace_contour(g, {3, 2});
    std::set<CellIndex> expected;
    for (int c = 0; c < 7; ++c) expected.insert({c, 2});
    REQUIRE(as_set(contour) == expected);
}

TEST_CASE("trace_contour: seeds without wall contact are rejected") {
    GridMap g(5, 5);
    g.register_obstacle(0, false);
    g.set_blocked({4, 4}, 0);
    REQUIRE_THROWS_AS(trace_contour(g, {0, 0}), not_a_seed);
    REQUIRE_THROWS_AS(trace_contour(g, {4, 4}), not_a_seed);
}

TEST_CASE("trace_contour: seed touching two components across a gap traces both") {
    GridMap g(9, 9);
    g.register_obstacle(0, false);
    g.register_obstacle(1, true);
    for (int r = 0; r <= 3; ++r) g.set_blocked({3, r}, 0);
    for (int r = 5; r <= 8; ++r) g.set_blocked({3, r}, 1);
    // (2,4) touches both walls diagonally across the one-cell gap at (3,4).
    auto contour = trace_contour(g, {2, 4});
    REQUIRE(as_set(contour) == oracles::contour_brute_force(g, {2, 4}));
    bool touches_upper = false, touches_lower = false;
    for (CellIndex c : contour) {
        if (c.row <= 3) touches_upper = true;
        if (c.row >= 5) touches_lower = true;
    }
    REQUIRE(touches_upper);
    REQUIRE(touches_lower);
}

TEST_CASE("trace_contour equals the brute-force enumeration on random instances") {
    std::mt19937 rng(4242);
    for (int trial = 0; trial < 200; ++trial) {
        GridMap g(14 + rng() % 10, 14 + rng() % 10);
        int blobs = 1 + rng() % 2;
        for (int b = 0; b < blobs; ++b) {
            CellIndex at{1 + static_cast<int>(rng() % (g.width() - 2)),
                         1 + static_cast<int>(rng() % (g.height() - 2))};
            if (!g.traversable(at)) continue;
            grow_blob(rng, g, b, at, 3 + rng() % 12, 0);
        }
        // Any free cell with wall contact works as a seed.
        CellIndex seed{-1, -1};
        for (int r = 0; r < g.height() && seed.col < 0; ++r)
            for (int c = 0; c < g.width() && seed.col < 0; ++c) {
                CellIndex cand{c, r};
                if (!g.traversable(cand)) continue;
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx)
                        if (g.in_bounds({c + dx, r + dy}) && !g.traversable({c + dx, r + dy}))
                            seed = cand;
            }
        if (seed.col < 0) continue;
        auto contour = trace_contour(g, seed);
        REQUIRE(as_set(contour) == oracles::contour_brute_force(g, seed));
    }
}

TEST_CASE("trace_contour: walk terminates within 4 steps per contour cell") {
    std::mt19937 rng(1717);
    for (int trial = 0; trial < 100; ++trial) {
        GridMap g(20, 20);
        // Interior blob, clear of the border, so the walk never leaves the ring.
        grow_blob(rng, g, 0, {9, 9}, 4 + rng() % 20, 3);
        CellIndex seed{9, 8};
        while (!g.traversable(seed)) seed.row--;
        TraceStats stats;
        auto contour = trace_contour(g, seed, &stats);
        REQUIRE(stats.steps <= 4 * contour.size());
        REQUIRE(stats.steps <= 4 * stats.visited_cells);
    }
}

TEST_CASE("classify: single destroyable obstacle") {
    GridMap g(7, 7);
    g.register_obstacle(3, true);
    for (int r = 2; r <= 4; ++r)
        for (int c = 2; c <= 4; ++c) g.set_blocked({c, r}, 3);
    SearchResult r = astar(g, {0, 0}, {3, 3}, true);
    REQUIRE(r.outcome == SearchOutcome::NoPath);
    ContourReport report = identify_blockage(g, r.closed, {3, 3});
    REQUIRE(report.obstacle_ids == std::vector<ObstacleId>{3});
    REQUIRE(report.destroyable);
    REQUIRE(as_set(report.reachable_contour) == as_set(report.contour));
    REQUIRE(std::binary_search(report.contour.begin(), report.contour.end(), report.seed));
}

TEST_CASE("classify: merged destroyable and non-destroyable parts are not destroyable") {
    // One wall column made of two obstacles stacked on top of each other.
    GridMap g(8, 5);
    g.register_obstacle(0, false);
    g.register_obstacle(1, true);
    for (int r = 0; r < 3; ++r) g.set_blocked({3, r}, 0);
    for (int r = 3; r < 5; ++r) g.set_blocked({3, r}, 1);
    SearchResult r = astar(g, {0, 2}, {7, 2}, true);
    ContourReport report = identify_blockage(g, r.closed, {7, 2});
    REQUIRE(report.obstacle_ids == std::vector<ObstacleId>{0, 1});
    REQUIRE_FALSE(report.destroyable);
}

TEST_CASE("classify: reachable contour is the intersection with CLOSED") {
    GridMap g(5, 5);
    g.register_obstacle(0, true);
    g.set_blocked({2, 2}, 0);
    auto contour = trace_contour(g, {1, 2});
    std::vector<std::pair<CellIndex, double>> partial_closed = {{{1, 2}, 0.0}, {{1, 1}, 0.0},
                                                                {{0, 0}, 0.0}};
    ContourReport report = classify(g, {1, 2}, contour, partial_closed);
    REQUIRE(as_set(report.reachable_contour) == std::set<CellIndex>{{1, 1}, {1, 2}});
}

TEST_CASE("detection pipeline: a single artificial blocker is identified exactly") {
    std::mt19937 rng(90210);
    for (int trial = 0; trial < 50; ++trial) {
        int w = 10 + static_cast<int>(rng() % 20);
        int h = 8 + static_cast<int>(rng() % 16);
        GridMap g(w, h);
        ObstacleId blocker = 7;
        g.register_obstacle(blocker, true);
        int wall_col = 2 + static_cast<int>(rng() % (w - 4));
        for (int r = 0; r < h; ++r) g.set_blocked({wall_col, r}, blocker);
        CellIndex start{static_cast<int>(rng() % wall_col), static_cast<int>(rng() % h)};
        CellIndex goal{wall_col + 1 + static_cast<int>(rng() % (w - wall_col - 1)),
                       static_cast<int>(rng() % h)};
        SearchResult r = astar(g, start, goal, true);
        REQUIRE(r.outcome == SearchOutcome::NoPath);
        ContourReport report = identify_blockage(g, r.closed, goal);
        REQUIRE(report.obstacle_ids == std::vector<ObstacleId>{blocker});
        REQUIRE(report.destroyable);
        for (CellIndex c : report.contour) {
            REQUIRE(g.traversable(c));
            bool adj = false;
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx)
                    if (g.obstacle_at({c.col + dx, c.row + dy}) == blocker) adj = true;
            REQUIRE(adj);
        }
    }
}
