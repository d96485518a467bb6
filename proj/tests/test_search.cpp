#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "signpath/search.hpp"
#include "oracles.hpp"

using namespace signpath;

namespace {

// Path obeys the move rules end to end and its cost is the sum of step costs.
void require_valid_path(const GridMap& g, const SearchResult& r, CellIndex start, CellIndex goal) {
    REQUIRE(r.outcome == SearchOutcome::Found);
    REQUIRE_FALSE(r.path.empty());
    REQUIRE(r.path.front() == start);
    REQUIRE(r.path.back() == goal);
    double cost = 0.0;
    for (std::size_t i = 1; i < r.path.size(); ++i) {
        auto ns = neighbors(g, r.path[i - 1]);
        auto it = std::find_if(ns.begin(), ns.end(),
                               [&](auto& p) { return p.first == r.path[i]; });
        REQUIRE(it != ns.end());
        cost += it->second;
    }
    REQUIRE_THAT(r.cost, Catch::Matchers::WithinAbs(cost, 1e-9));
}

GridMap column_wall_5x5() {
    GridMap g(5, 5);
    g.register_obstacle(0, false);
    for (int r = 0; r < 5; ++r) g.set_blocked({2, r}, 0);
    return g;
}

} // namespace

TEST_CASE("octile distance formula") {
    REQUIRE(octile({0, 0}, {0, 0}) == 0.0);
    REQUIRE_THAT(octile({0, 0}, {3, 1}),
                 Catch::Matchers::WithinAbs(2.0 + std::numbers::sqrt2, 1e-12));
    REQUIRE_THAT(octile({2, 2}, {5, 5}),
                 Catch::Matchers::WithinAbs(3.0 * std::numbers::sqrt2, 1e-12));
    REQUIRE(octile({4, 7}, {1, 2}) == octile({1, 2}, {4, 7}));
}

TEST_CASE("octile is admissible and consistent") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        GridMap g = oracles::random_grid(rng, 16, 16, 0.25);
        CellIndex goal = oracles::random_free_cell(rng, g);
        auto dist = oracles::dijkstra_all(g, goal);
        for (int r = 0; r < g.height(); ++r) {
            for (int c = 0; c < g.width(); ++c) {
                CellIndex a{c, r};
                if (!g.traversable(a)) continue;
                if (std::isfinite(dist[g.index(a)]))
                    REQUIRE(octile(a, goal) <= dist[g.index(a)] + 1e-9);
                for (auto [n, step] : neighbors(g, a))
                    REQUIRE(octile(a, goal) <= step + octile(n, goal) + 1e-9);
            }
        }
    }
}

TEST_CASE("astar: straight diagonal on an empty 3x3 grid") {
    GridMap g(3, 3);
    SearchResult r = astar(g, {0, 0}, {2, 2});
    require_valid_path(g, r, {0, 0}, {2, 2});
    REQUIRE_THAT(r.cost, Catch::Matchers::WithinAbs(2.0 * std::numbers::sqrt2, 1e-9));
}

TEST_CASE("astar: start equals goal") {
    GridMap g(3, 3);
    SearchResult r = astar(g, {1, 1}, {1, 1});
    REQUIRE(r.outcome == SearchOutcome::Found);
    REQUIRE(r.path == std::vector<CellIndex>{{1, 1}});
    REQUIRE(r.cost == 0.0);
}

TEST_CASE("astar: blocked start is an error, blocked goal is not") {
    GridMap g(3, 3);
    g.register_obstacle(0, false);
    g.set_blocked({0, 0}, 0);
    g.set_blocked({2, 2}, 0);
    REQUIRE_THROWS_AS(astar(g, {0, 0}, {2, 2}), invalid_start);
    SearchResult r = astar(g, {1, 1}, {2, 2}, true);
    REQUIRE(r.outcome == SearchOutcome::NoPath);
    REQUIRE(r.closed.size() == 7); // everything reachable
}

TEST_CASE("astar: full-height wall yields NoPath with the complete reachable region") {
    GridMap g = column_wall_5x5();
    SearchResult r = astar(g, {0, 0}, {4, 0}, true);
    REQUIRE(r.outcome == SearchOutcome::NoPath);
    REQUIRE(r.path.empty());
    REQUIRE(r.expanded == 10);

    std::set<CellIndex> closed_cells;
    for (auto& [cell, h] : r.closed) {
        closed_cells.insert(cell);
        REQUIRE(h == octile(cell, {4, 0}));
    }
    REQUIRE(closed_cells == oracles::flood_fill_reachable(g, {0, 0}));
    for (CellIndex c : closed_cells) REQUIRE(c.col <= 1);
    REQUIRE(closed_cells.size() == 10);
}

TEST_CASE("astar: CLOSED set is not retained unless requested") {
    GridMap g = column_wall_5x5();
    REQUIRE(astar(g, {0, 0}, {4, 0}).closed.empty());
}

TEST_CASE("astar matches the Dijkstra oracle on 100 random 32x32 grids") {
    std::mt19937 rng(2024);
    int solvable = 0;
    for (int trial = 0; trial < 100; ++trial) {
        GridMap g = oracles::random_grid(rng, 32, 32, 0.20);
        CellIndex start = oracles::random_free_cell(rng, g);
        CellIndex goal = oracles::random_free_cell(rng, g);
        auto oracle = oracles::dijkstra(g, start, goal);
        SearchResult r = astar(g, start, goal);
        REQUIRE((r.outcome == SearchOutcome::Found) == oracle.found);
        if (oracle.found) {
            ++solvable;
            REQUIRE_THAT(r.cost, Catch::Matchers::WithinAbs(oracle.cost, 1e-9));
            require_valid_path(g, r, start, goal);
        }
    }
    REQUIRE(solvable > 50);
}

TEST_CASE("astar: on failure CLOSED equals the flood-filled reachable region") {
    std::mt19937 rng(99);
    int failures = 0;
    while (failures < 25) {
        GridMap g = oracles::random_grid(rng, 24, 24, 0.45);
        CellIndex start = oracles::random_free_cell(rng, g);
        CellIndex goal = oracles::random_free_cell(rng, g);
        if (oracles::dijkstra(g, start, goal).found) continue;
        ++failures;
        SearchResult r = astar(g, start, goal, true);
        REQUIRE(r.outcome == SearchOutcome::NoPath);
        std::set<CellIndex> closed_cells;
        for (auto& [cell, h] : r.closed) {
            (void)h;
            closed_cells.insert(cell);
        }
        REQUIRE(closed_cells == oracles::flood_fill_reachable(g, start));
    }
}

TEST_CASE("jump: goal inside an empty corridor is the jump point") {
    GridMap g(6, 1);
    REQUIRE(jump(g, {0, 0}, {1, 0}, {5, 0}) == CellIndex{5, 0});
}

TEST_CASE("jump: scan into a wall comes back empty") {
    GridMap g(7, 3);
    g.register_obstacle(0, false);
    for (int r = 0; r < 3; ++r) g.set_blocked({3, r}, 0);
    REQUIRE(jump(g, {0, 0}, {1, 0}, {6, 0}) == std::nullopt);
}

TEST_CASE("jump: obstacle beside the scan line forces a stop next to its corner") {
    GridMap g(7, 4);
    g.register_obstacle(0, false);
    g.set_blocked({2, 1}, 0);
    // Scanning east along row 2: at (3,2) the side cell (3,1) is open but
    // (2,1) behind it is walled, so (3,2) is a jump point.
    REQUIRE(jump(g, {0, 2}, {1, 0}, {6, 2}) == CellIndex{3, 2});
}

TEST_CASE("jps: trivial diagonal matches astar and expands no more nodes") {
    GridMap g(3, 3);
    SearchResult a = astar(g, {0, 0}, {2, 2});
    SearchResult j = jps(g, {0, 0}, {2, 2});
    require_valid_path(g, j, {0, 0}, {2, 2});
    REQUIRE_THAT(j.cost, Catch::Matchers::WithinAbs(a.cost, 1e-9));
    REQUIRE(j.expanded <= a.expanded);
}

TEST_CASE("jps: NoPath on the column wall, same verdict as astar") {
    GridMap g = column_wall_5x5();
    REQUIRE(jps(g, {0, 0}, {4, 0}).outcome == SearchOutcome::NoPath);
    REQUIRE(astar(g, {0, 0}, {4, 0}).outcome == SearchOutcome::NoPath);
}

TEST_CASE("jps: blocked start is an error") {
    GridMap g(3, 3);
    g.register_obstacle(0, false);
    g.set_blocked({0, 0}, 0);
    REQUIRE_THROWS_AS(jps(g, {0, 0}, {2, 2}), invalid_start);
}

TEST_CASE("jps equals astar on 100 random 64x64 grids") {
    std::mt19937 rng(31337);
    std::size_t astar_exp = 0, jps_exp = 0;
    int solvable = 0;
    for (int trial = 0; trial < 100; ++trial) {
        GridMap g = oracles::random_grid(rng, 64, 64, 0.25);
        CellIndex start = oracles::random_free_cell(rng, g);
        CellIndex goal = oracles::random_free_cell(rng, g);
        SearchResult a = astar(g, start, goal);
        SearchResult j = jps(g, start, goal);
        REQUIRE(a.outcome == j.outcome);
        if (a.outcome == SearchOutcome::Found) {
            ++solvable;
            REQUIRE_THAT(j.cost, Catch::Matchers::WithinAbs(a.cost, 1e-9));
            require_valid_path(g, j, start, goal);
            astar_exp += a.expanded;
            jps_exp += j.expanded;
        }
    }
    REQUIRE(solvable > 40);
    // The efficiency claim that motivates running JPS first.
    REQUIRE(jps_exp < astar_exp);
}

TEST_CASE("search is deterministic for identical inputs") {
    std::mt19937 rng(77);
    GridMap g = oracles::random_grid(rng, 48, 48, 0.3);
    CellIndex start = oracles::random_free_cell(rng, g);
    CellIndex goal = oracles::random_free_cell(rng, g);
    SearchResult a1 = astar(g, start, goal, true);
    SearchResult a2 = astar(g, start, goal, true);
    REQUIRE(a1.outcome == a2.outcome);
    REQUIRE(a1.path == a2.path);
    REQUIRE(a1.expanded == a2.expanded);
    REQUIRE(a1.closed == a2.closed);
    SearchResult j1 = jps(g, start, goal);
    SearchResult j2 = jps(g, start, goal);
    REQUIRE(j1.path == j2.path);
    REQUIRE(j1.expanded == j2.expanded);
}
