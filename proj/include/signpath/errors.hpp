#pragma once

#include <stdexcept>
#include <string>

namespace signpath {

/// Base class for all errors raised by the library.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// World description violates a structural invariant (bad bounds, degenerate
/// polygon, goal square too small for the agent, ...).
struct invalid_world : error {
    using error::error;
};

/// The agent's own cell is blocked after obstacle inflation.
struct invalid_start : error {
    using error::error;
};

/// The goal cell is fully covered by a non-destroyable obstacle.
struct invalid_goal : error {
    using error::error;
};

/// Referenced obstacle id does not exist.
struct not_found : error {
    using error::error;
};

/// Attempt to destroy an obstacle whose destroyable flag is false.
struct not_destroyable : error {
    using error::error;
};

/// Seed-cell lookup was handed an empty CLOSED set.
struct no_closed_set : error {
    using error::error;
};

/// Contour tracing started from a cell that touches no wall.
struct not_a_seed : error {
    using error::error;
};

/// A blockage generator cannot realize the requested geometry.
struct geometry_error : error {
    using error::error;
};

/// Render overlay references an out-of-bounds cell.
struct render_error : error {
    using error::error;
};

/// Polar goal region has an empty Cartesian image.
struct empty_region : error {
    using error::error;
};

/// The agent position lies inside the square being converted to polar form.
struct agent_inside_region : error {
    using error::error;
};

} // namespace signpath
