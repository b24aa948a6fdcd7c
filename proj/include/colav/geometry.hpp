#pragma once

// Planar conventions shared by every module: x is North, y is East, angles are
// measured clockwise from North, so a positive heading change is a turn to
// starboard.

#include <cmath>
#include <numbers>

namespace colav {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Vec2 {
    double x = 0.0;  // North [m]
    double y = 0.0;  // East [m]
};

inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
// z-component of a x b; positive when b lies clockwise (starboard) of a.
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }

/// Wrap an angle to (-pi, pi]. NaN and infinities propagate as NaN.
inline double wrap_angle(double a) {
    double r = std::remainder(a, kTwoPi);
    return r <= -kPi ? r + kTwoPi : r;
}

/// Wrap an angle in degrees to (-180, 180].
inline double wrap_degrees(double a) {
    double r = std::remainder(a, 360.0);
    return r <= -180.0 ? r + 360.0 : r;
}

inline constexpr double deg2rad(double d) { return d * std::numbers::pi / 180.0; }
inline constexpr double rad2deg(double r) { return r * 180.0 / std::numbers::pi; }

// Unit vector along a heading.
inline Vec2 heading_vector(double heading) { return {std::cos(heading), std::sin(heading)}; }

/// Turn direction; the numeric value is the K_Dir factor of the avoidance term.
enum class Turn : int { port = -1, none = 0, starboard = 1 };

inline int turn_sign(Turn t) { return static_cast<int>(t); }

}  // namespace colav
