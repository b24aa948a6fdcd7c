#pragma once

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "colav/geometry.hpp"
#include "colav/risk.hpp"

namespace colav::guidance {

struct Waypoint {
    double x = 0.0;  // North [m]
    double y = 0.0;  // East [m]
};

/// Ordered waypoints with the index of the waypoint currently steered to.
/// The active leg runs from waypoints()[active_index() - 1] to waypoints()[active_index()].
class Route {
public:
    /// Throws std::invalid_argument for fewer than two waypoints, non-finite
    /// coordinates or coincident consecutive waypoints.
    explicit Route(std::vector<Waypoint> waypoints, std::size_t active_index = 1);

    const std::vector<Waypoint>& waypoints() const { return waypoints_; }
    std::size_t active_index() const { return active_index_; }
    const Waypoint& active() const { return waypoints_[active_index_]; }
    const Waypoint& previous() const { return waypoints_[active_index_ - 1]; }
    bool at_final() const { return active_index_ + 1 == waypoints_.size(); }

    Route advanced() const { return Route(waypoints_, at_final() ? active_index_ : active_index_ + 1, 0); }

private:
    Route(std::vector<Waypoint> waypoints, std::size_t active_index, int /*unchecked*/)
        : waypoints_(std::move(waypoints)), active_index_(active_index) {}

    std::vector<Waypoint> waypoints_;
    std::size_t active_index_;
};

/// Leg-relative position of the vessel.
struct PathFrame {
    double leg_length = 0.0;   // [m]
    double leg_heading = 0.0;  // [rad]
    double along_track = 0.0;  // distance still to go along the leg [m]
    double wp_angle = 0.0;     // leg heading minus bearing to the active waypoint [rad]
    double cross_track = 0.0;  // [m], positive when starboard of the leg
};

struct GuidanceParams {
    double mu = 200.0;                          // cross-track damping distance [m]
    double k_colav = 0.9;                       // avoidance gain [rad]
    risk::ZmfKnees range_knees{400.0, 1200.0};  // avoidance range weight knees [m]
    double acceptance_radius = 100.0;           // [m]

    void validate() const;
};

/// Thrown by los_heading when the vessel sits exactly on the waypoint.
class WaypointReached : public std::runtime_error {
public:
    WaypointReached() : std::runtime_error("vessel is at the waypoint") {}
};

/// Bearing from the vessel to the waypoint, in (-pi, pi].
double los_heading(Vec2 vessel, const Waypoint& wp);

/// Throws std::invalid_argument for a zero-length leg.
PathFrame path_frame(Vec2 vessel, const Waypoint& wp_prev, const Waypoint& wp);

/// -atan(cross_track / mu).
double cte_correction(const PathFrame& frame, double mu);

/// Reactive avoidance heading offset K_Dir * K_COLAV * w_R(range) * w_beta(bearing).
/// w_R is a Z-shaped weight over range, w_beta = max(0, cos(bearing)).
double colav_offset(double range, double bearing, Turn turn, const GuidanceParams& params);

/// Wrapped sum of the three heading terms.
double desired_heading(double los, double cte, double colav);

/// Moves to the next waypoint once inside the acceptance radius of the
/// active one. The final waypoint stays active.
Route advance_waypoint(const Route& route, Vec2 vessel, double acceptance_radius);

}  // namespace colav::guidance
