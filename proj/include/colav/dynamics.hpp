#pragma once

#include <stdexcept>
#include <string>

namespace colav::dynamics {

/// Raised when a state or parameter set is non-finite, which almost always
/// means the closed loop has blown up upstream.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct VesselState {
    double x = 0.0;            // North [m]
    double y = 0.0;            // East [m]
    double heading = 0.0;      // [rad], (-pi, pi], clockwise from North
    double yaw_rate = 0.0;     // [rad/s]
    double speed = 0.0;        // surge speed [m/s]
    double disturbance = 0.0;  // Markov disturbance, thrust units

    bool operator==(const VesselState&) const = default;
};

/// First-order yaw (Nomoto) and speed responses plus a first-order Markov
/// disturbance acting against thrust.
struct VesselParams {
    double t_psi = 10.0;        // yaw time constant [s]
    double k_psi = 0.005;       // yaw gain [(rad/s)/control unit]
    double t_u = 20.0;          // speed time constant [s]
    double k_u = 1.0;           // speed gain [(m/s)/thrust unit]
    double t_d = 50.0;          // disturbance time constant [s]
    double sigma_omega = 0.0;   // std-dev of the disturbance driving noise, per sample
    double u_c_max = 20.0;      // control torque saturation
    double thrust_cmd = 0.0;    // tau, held constant over a run

    /// Throws std::invalid_argument naming the first bad field.
    void validate() const;
};

/// Clamp to [-limit, +limit].
double saturate(double value, double limit);

/// Advance one vessel by a single fixed RK4 step.
///
/// `u_c` is saturated to `params.u_c_max` here, so no caller can exceed the
/// actuator limit. `noise` is the disturbance driving sample for this step and
/// is held constant across the RK4 stages; the module owns no RNG. The
/// returned heading is wrapped to (-pi, pi].
VesselState step(const VesselState& state, double u_c, const VesselParams& params, double dt,
                 double noise);

}  // namespace colav::dynamics
