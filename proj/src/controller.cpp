#include "colav/controller.hpp"

#include <cmath>
#include <stdexcept>

#include "colav/dynamics.hpp"
#include "colav/geometry.hpp"

namespace colav::control {

void ControllerGains::validate() const {
    if (!std::isfinite(kp) || !(kp > 0.0)) throw std::invalid_argument("controller.kp: must be > 0");
    if (!std::isfinite(kd) || kd < 0.0) throw std::invalid_argument("controller.kd: must be >= 0");
}

double control(double desired_heading, double heading, double yaw_rate, const ControllerGains& gains,
               double limit) {
    const double error = wrap_angle(desired_heading - heading);
    return dynamics::saturate(gains.kp * error - gains.kd * yaw_rate, limit);
}

}  // namespace colav::control
