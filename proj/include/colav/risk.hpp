#pragma once

#include <limits>

#include "colav/dynamics.hpp"

namespace colav::risk {

/// Relative situation of a target as seen from own ship.
struct EncounterGeometry {
    double range = 0.0;             // [m]
    double bearing = 0.0;           // target bearing relative to own bow [rad], starboard positive
    double relative_heading = 0.0;  // wrap(psi_target - psi_own) [rad]
    double cpa_angle = 0.0;         // angle between target->own line of sight and relative velocity [rad], [0, pi]
    double relative_speed = 0.0;    // |v_target - v_own| [m/s]
    double d_cpa = 0.0;             // [m], 0 <= d_cpa <= range
    double t_cpa = 0.0;             // [s], negative once past CPA, +inf when relative_speed == 0
    double range_rate = 0.0;        // d(range)/dt [m/s]
    double own_speed = 0.0;         // [m/s]
    double target_speed = 0.0;      // [m/s]

    bool closing() const { return t_cpa > 0.0 && t_cpa < std::numeric_limits<double>::infinity(); }
};

struct ZmfKnees {
    double a = 0.0;  // membership is 1 at and below a
    double b = 1.0;  // membership is 0 at and above b

    void validate() const;
};

struct RiskKnees {
    ZmfKnees d_cpa{120.0, 420.0};
    ZmfKnees t_cpa{60.0, 240.0};
    ZmfKnees range{1000.0, 4000.0};

    void validate() const;
};

struct RiskBreakdown {
    double f_dcpa = 0.0;
    double f_tcpa = 0.0;
    double f_range = 0.0;
    double risk = 0.0;
};

/// Speeds below this are treated as zero relative motion.
inline constexpr double kMinRelativeSpeed = 1e-9;

/// Range, bearings and CPA quantities for a target. Throws std::invalid_argument
/// when the two vessels are coincident.
EncounterGeometry relative_geometry(const dynamics::VesselState& own,
                                    const dynamics::VesselState& target);

/// Z-shaped membership: 1 for x <= a, 0 for x >= b, the usual two-piece
/// quadratic spline in between (0.5 at the midpoint).
double zmf(double x, const ZmfKnees& knees);

/// Mean of the three memberships. Non-positive or infinite t_cpa contributes 0.
RiskBreakdown risk_index(const EncounterGeometry& g, const ZmfKnees& knees_dcpa,
                         const ZmfKnees& knees_tcpa, const ZmfKnees& knees_range);

inline RiskBreakdown risk_index(const EncounterGeometry& g, const RiskKnees& knees) {
    return risk_index(g, knees.d_cpa, knees.t_cpa, knees.range);
}

}  // namespace colav::risk
