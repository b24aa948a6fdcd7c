#pragma once

namespace colav::control {

struct ControllerGains {
    double kp = 40.0;   // control units per rad of heading error
    double kd = 120.0;  // control units per rad/s of yaw rate

    void validate() const;
};

/// PD heading autopilot: saturate(kp * wrap(desired - heading) - kd * yaw_rate, limit).
/// The heading error is wrapped first so a command across the +-180 deg seam
/// never turns the long way round.
double control(double desired_heading, double heading, double yaw_rate, const ControllerGains& gains,
               double limit);

}  // namespace colav::control
