#pragma once

#include <set>
#include <string>
#include <variant>
#include <vector>

#include "signpath/blockage.hpp"
#include "signpath/grid.hpp"
#include "signpath/polar.hpp"
#include "signpath/search.hpp"
#include "signpath/signworld.hpp"

namespace signpath {

// --- execution trace ---------------------------------------------------------

struct SymbolicActionEvent {
    GroundAction action;
};

struct GridPathEvent {
    std::vector<CellIndex> cells;
    double cost = 0.0;
    int revision = 0; // grid revision the path was planned on
};

struct DetectionEvent {
    ContourReport report;
};

struct DestroyEvent {
    ObstacleId obstacle = 0;
};

using TraceEvent = std::variant<SymbolicActionEvent, GridPathEvent, DetectionEvent, DestroyEvent>;

enum class TraceStatus { GoalReached, Unsolvable };

enum class UnsolvableReason { None, BlockedByIndestructible, ResourceExhausted, SymbolicFailure };

/// Interleaved record of symbolic actions, grid paths, detections and
/// destroys. Consecutive grid paths chain: each starts where the previous
/// one ended.
struct ExecutionTrace {
    std::vector<TraceEvent> events;
    TraceStatus status = TraceStatus::Unsolvable;
    UnsolvableReason reason = UnsolvableReason::None;
    int rounds = 0;

    template <typename T>
    std::size_t count() const {
        std::size_t n = 0;
        for (const TraceEvent& e : events)
            if (std::holds_alternative<T>(e)) ++n;
        return n;
    }
};

struct SrtLimits {
    int max_rounds = -1; // default: number of obstacles + 1
    PlanLimits plan_limits;
    double min_goal_side = 1.0; // smallest goal square for polar goals, meters
};

/// Orchestrator state for one relocation task.
struct SrtState {
    WorldDescription world;
    GridMap grid;
    CellIndex agent_cell;
    CellIndex goal_cell;
    Situation situation;
    int round = 0;
    int revision = 0;
};

// --- symbolic task -------------------------------------------------------------

/// The relocation domain: regions the agent can occupy and obstacles it can
/// approach and destroy. Destroying the blocker is what makes the goal
/// region passable.
inline const char* srt_domain_text() {
    return R"((define (domain srt)
  (:requirements :strips :typing)
  (:types region obstacle)
  (:predicates
    (at ?r - region)
    (goal-region ?r - region)
    (near-region ?o - obstacle ?r - region)
    (blocking ?o - obstacle)
    (destroyable ?o - obstacle)
    (near ?o - obstacle)
    (cleared ?o - obstacle)
    (passable ?r - region))
  (:action move-to-region
    :parameters (?from - region ?to - region)
    :precondition (and (at ?from) (passable ?to))
    :effect (and (at ?to) (not (at ?from))))
  (:action approach-obstacle
    :parameters (?o - obstacle ?from - region ?r - region)
    :precondition (and (at ?from) (blocking ?o) (destroyable ?o) (near-region ?o ?r))
    :effect (and (at ?r) (near ?o) (not (at ?from))))
  (:action destroy-obstacle
    :parameters (?o - obstacle ?r - region ?g - region)
    :precondition (and (at ?r) (near ?o) (near-region ?o ?r) (destroyable ?o) (blocking ?o)
                       (goal-region ?g))
    :effect (and (cleared ?o) (passable ?g) (not (blocking ?o)) (not (near ?o)))))
)";
}

namespace srt_detail {

inline std::string obstacle_object(ObstacleId id) { return "obs" + std::to_string(id); }
inline std::string contour_region(ObstacleId id) { return "near-obs" + std::to_string(id); }

inline std::string problem_text(const WorldDescription& world) {
    std::string s = "(define (problem relocation)\n  (:domain srt)\n  (:objects agent-zone "
                    "goal-zone";
    for (const Obstacle& o : world.obstacles) s += " " + contour_region(o.id);
    s += " - region";
    for (const Obstacle& o : world.obstacles) s += " " + obstacle_object(o.id);
    if (!world.obstacles.empty()) s += " - obstacle";
    s += ")\n  (:init (at agent-zone) (goal-region goal-zone))\n"
         "  (:goal (and (at goal-zone))))";
    return s;
}

// Current-round situation, rebuilt from ground truth: where the agent
// stands, what the detector reported, what is already rubble.
inline Situation build_situation(const SignNetwork& net, const WorldDescription& world,
                                 const ContourReport* report,
                                 const std::set<ObstacleId>& destroyed) {
    Situation sit;
    sit.insert({"at", {"agent-zone"}});
    sit.insert({"goal-region", {"goal-zone"}});
    if (report) {
        for (ObstacleId id : report->obstacle_ids) {
            sit.insert({"blocking", {obstacle_object(id)}});
            sit.insert({"destroyable", {obstacle_object(id)}});
            sit.insert({"near-region", {obstacle_object(id), contour_region(id)}});
        }
    }
    for (ObstacleId id : destroyed) sit.insert({"cleared", {obstacle_object(id)}});
    for (const auto& [name, type] : net.object_types()) sit.insert({type, {name}});
    (void)world;
    return sit;
}

inline ObstacleId parse_obstacle_object(const std::string& name) {
    return std::stoi(name.substr(3));
}

} // namespace srt_detail

/// Replays the spec'd loop: JPS toward the goal; on failure run A* with the
/// CLOSED set, find the seed, trace and classify the blocking obstacle; if
/// destroyable, replan symbolically, approach the nearest reachable contour
/// cell, destroy, and go again. Terminates with GoalReached, with
/// BlockedByIndestructible after a non-destroyable detection, or with
/// ResourceExhausted when the round budget runs out.
inline ExecutionTrace solve_srt(WorldDescription world, const SrtLimits& limits = {},
                                SignNetwork* persistent = nullptr) {
    ExecutionTrace trace;
    SrtState st;
    st.world = std::move(world);
    st.grid = rasterize(st.world);
    st.agent_cell = *st.grid.agent_cell();
    st.goal_cell = *st.grid.goal_cell();

    int max_rounds = limits.max_rounds >= 0
                         ? limits.max_rounds
                         : static_cast<int>(st.world.obstacles.size()) + 1;

    SignNetwork local;
    SignNetwork& net = persistent ? *persistent : local;
    if (net.signs().empty()) {
        TaskDescription task =
            parse_pddl(srt_domain_text(), srt_detail::problem_text(st.world));
        net = build_sign_network(task);
    }

    std::set<ObstacleId> destroyed;
    Situation goal_sit = {{"at", {"goal-zone"}}};

    while (true) {
        ++st.round;
        if (st.round > max_rounds) {
            trace.status = TraceStatus::Unsolvable;
            trace.reason = UnsolvableReason::ResourceExhausted;
            break;
        }

        SearchResult direct = jps(st.grid, st.agent_cell, st.goal_cell);
        if (direct.outcome == SearchOutcome::Found) {
            trace.events.push_back(GridPathEvent{direct.path, direct.cost, st.revision});
            st.agent_cell = st.goal_cell;
            trace.status = TraceStatus::GoalReached;
            break;
        }

        SearchResult survey = astar(st.grid, st.agent_cell, st.goal_cell, /*keep_closed=*/true);
        ContourReport report = identify_blockage(st.grid, survey.closed, st.goal_cell);
        trace.events.push_back(DetectionEvent{report});

        if (!report.destroyable) {
            trace.status = TraceStatus::Unsolvable;
            trace.reason = UnsolvableReason::BlockedByIndestructible;
            break;
        }

        st.situation = srt_detail::build_situation(net, st.world, &report, destroyed);
        PlanResult plan = map_plan(net, st.situation, goal_sit, limits.plan_limits);
        if (plan.status != PlanStatus::Found) {
            trace.status = TraceStatus::Unsolvable;
            trace.reason = plan.status == PlanStatus::ResourceExhausted
                               ? UnsolvableReason::ResourceExhausted
                               : UnsolvableReason::SymbolicFailure;
            break;
        }

        for (const PlanStep& step : plan.plan.steps) {
            if (step.action.name == "approach-obstacle") {
                // Walk to the nearest cell of the reachable contour.
                CellIndex target = report.reachable_contour.front();
                for (CellIndex c : report.reachable_contour) {
                    double dc = octile(st.agent_cell, c);
                    double dt = octile(st.agent_cell, target);
                    if (dc < dt || (dc == dt && c < target)) target = c;
                }
                SearchResult leg = jps(st.grid, st.agent_cell, target);
                trace.events.push_back(SymbolicActionEvent{step.action});
                trace.events.push_back(GridPathEvent{leg.path, leg.cost, st.revision});
                st.agent_cell = target;
                st.world.agent_position = st.grid.cell_center(st.agent_cell);
            } else if (step.action.name == "destroy-obstacle") {
                ObstacleId id = srt_detail::parse_obstacle_object(step.action.args.front());
                trace.events.push_back(SymbolicActionEvent{step.action});
                trace.events.push_back(DestroyEvent{id});
                destroy_obstacle(st.grid, st.world, id);
                destroyed.insert(id);
                ++st.revision;
            }
            // move-to-region is realized by the next round's goal search.
        }
        record_plan_execution(net, plan.plan);
    }

    trace.rounds = st.round;
    return trace;
}

/// Polar-goal entry point: the fuzzy sector is translated to the containing
/// goal square first, then the relocation loop runs as usual.
inline ExecutionTrace solve_srt(WorldDescription world, const PolarRegion& goal_region,
                                double agent_heading = 0.0, const SrtLimits& limits = {},
                                SignNetwork* persistent = nullptr) {
    AgentPose pose{world.agent_position, agent_heading};
    double min_side =
        std::max(limits.min_goal_side, 2.0 * world.agent_radius * 1.001);
    Square goal = polar_to_square(goal_region, pose, min_side);
    auto corners = goal.corners();
    std::copy(corners.begin(), corners.end(), world.goal_square.begin());
    return solve_srt(std::move(world), limits, persistent);
}

} // namespace signpath
