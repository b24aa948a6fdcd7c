#include "colav/risk.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "colav/geometry.hpp"

namespace colav::risk {

void ZmfKnees::validate() const {
    if (!std::isfinite(a) || !std::isfinite(b) || !(a < b))
        throw std::invalid_argument("zmf knees must be finite with a < b");
}

void RiskKnees::validate() const {
    auto check = [](const ZmfKnees& k, const char* name) {
        try {
            k.validate();
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument(std::string("risk_knees.") + name + ": " + e.what());
        }
    };
    check(d_cpa, "d_cpa");
    check(t_cpa, "t_cpa");
    check(range, "range");
}

EncounterGeometry relative_geometry(const dynamics::VesselState& own,
                                    const dynamics::VesselState& target) {
    const Vec2 p_own{own.x, own.y};
    const Vec2 p_tgt{target.x, target.y};
    const Vec2 delta = p_tgt - p_own;
    const double range = norm(delta);
    if (!(range > 0.0)) throw std::invalid_argument("relative_geometry: vessels are coincident");

    EncounterGeometry g;
    g.range = range;
    g.bearing = wrap_angle(std::atan2(delta.y, delta.x) - own.heading);
    g.relative_heading = wrap_angle(target.heading - own.heading);
    g.own_speed = own.speed;
    g.target_speed = target.speed;

    const Vec2 v_rel = target.speed * heading_vector(target.heading) - own.speed * heading_vector(own.heading);
    const Vec2 line_of_sight = p_own - p_tgt;  // target -> own
    g.relative_speed = norm(v_rel);
    g.range_rate = dot(delta, v_rel) / range;

    if (g.relative_speed < kMinRelativeSpeed) {
        g.cpa_angle = 0.0;
        g.d_cpa = range;
        g.t_cpa = std::numeric_limits<double>::infinity();
        return g;
    }

    g.cpa_angle = std::atan2(std::abs(cross(line_of_sight, v_rel)), dot(line_of_sight, v_rel));
    g.d_cpa = std::min(range, std::abs(range * std::sin(g.cpa_angle)));
    g.t_cpa = range * std::cos(g.cpa_angle) / g.relative_speed;
    return g;
}

double zmf(double x, const ZmfKnees& k) {
    if (x <= k.a) return 1.0;
    if (x >= k.b) return 0.0;
    const double span = k.b - k.a;
    if (x <= 0.5 * (k.a + k.b)) {
        const double t = (x - k.a) / span;
        return 1.0 - 2.0 * t * t;
    }
    const double t = (x - k.b) / span;
    return 2.0 * t * t;
}

RiskBreakdown risk_index(const EncounterGeometry& g, const ZmfKnees& knees_dcpa,
                         const ZmfKnees& knees_tcpa, const ZmfKnees& knees_range) {
    RiskBreakdown r;
    r.f_dcpa = zmf(g.d_cpa, knees_dcpa);
    r.f_tcpa = (g.t_cpa > 0.0 && std::isfinite(g.t_cpa)) ? zmf(g.t_cpa, knees_tcpa) : 0.0;
    r.f_range = zmf(g.range, knees_range);
    r.risk = (r.f_dcpa + r.f_tcpa + r.f_range) / 3.0;
    return r;
}

}  // namespace colav::risk
