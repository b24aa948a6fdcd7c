#include "colav/guidance.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace colav::guidance {

Route::Route(std::vector<Waypoint> waypoints, std::size_t active_index)
    : waypoints_(std::move(waypoints)), active_index_(active_index) {
    if (waypoints_.size() < 2) throw std::invalid_argument("route: at least two waypoints are required");
    if (active_index_ < 1 || active_index_ >= waypoints_.size())
        throw std::invalid_argument("route: active index out of range");
    for (std::size_t i = 0; i < waypoints_.size(); ++i) {
        const auto& w = waypoints_[i];
        if (!std::isfinite(w.x) || !std::isfinite(w.y))
            throw std::invalid_argument("route: waypoint " + std::to_string(i) + " is not finite");
        if (i > 0 && w.x == waypoints_[i - 1].x && w.y == waypoints_[i - 1].y)
            throw std::invalid_argument("route: waypoints " + std::to_string(i - 1) + " and " +
                                        std::to_string(i) + " coincide");
    }
}

void GuidanceParams::validate() const {
    if (!std::isfinite(mu) || !(mu > 0.0)) throw std::invalid_argument("guidance.mu: must be > 0");
    if (!std::isfinite(k_colav)) throw std::invalid_argument("guidance.k_colav: must be finite");
    try {
        range_knees.validate();
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string("guidance.range_knees: ") + e.what());
    }
    if (!std::isfinite(acceptance_radius) || !(acceptance_radius > 0.0))
        throw std::invalid_argument("guidance.acceptance_radius: must be > 0");
}

double los_heading(Vec2 vessel, const Waypoint& wp) {
    const double dx = wp.x - vessel.x;
    const double dy = wp.y - vessel.y;
    if (dx == 0.0 && dy == 0.0) throw WaypointReached();
    return wrap_angle(std::atan2(dy, dx));
}

PathFrame path_frame(Vec2 vessel, const Waypoint& wp_prev, const Waypoint& wp) {
    const Vec2 leg{wp.x - wp_prev.x, wp.y - wp_prev.y};
    PathFrame f;
    f.leg_length = norm(leg);
    if (!(f.leg_length > 0.0)) throw std::invalid_argument("path_frame: degenerate leg");
    f.leg_heading = std::atan2(leg.y, leg.x);

    const Vec2 to_wp{wp.x - vessel.x, wp.y - vessel.y};
    f.along_track = dot(to_wp, leg) / f.leg_length;
    const double dist = norm(to_wp);
    if (dist == 0.0) return f;  // on the waypoint: no cross-track error

    f.wp_angle = wrap_angle(f.leg_heading - std::atan2(to_wp.y, to_wp.x));
    // along_track * tan(wp_angle), written as dist * sin(wp_angle) so it stays
    // finite when the vessel is abeam of the waypoint.
    f.cross_track = dist * std::sin(f.wp_angle);
    return f;
}

double cte_correction(const PathFrame& frame, double mu) { return -std::atan(frame.cross_track / mu); }

double colav_offset(double range, double bearing, Turn turn, const GuidanceParams& params) {
    if (turn == Turn::none) return 0.0;
    const double w_range = risk::zmf(range, params.range_knees);
    const double w_bearing = std::max(0.0, std::cos(bearing));
    return turn_sign(turn) * params.k_colav * w_range * w_bearing;
}

double desired_heading(double los, double cte, double colav) { return wrap_angle(los + cte + colav); }

Route advance_waypoint(const Route& route, Vec2 vessel, double acceptance_radius) {
    if (route.at_final()) return route;
    const auto& wp = route.active();
    if (std::hypot(wp.x - vessel.x, wp.y - vessel.y) < acceptance_radius) return route.advanced();
    return route;
}

}  // namespace colav::guidance
