#include "colav/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "colav/geometry.hpp"

namespace colav::dynamics {

namespace {

using Vec6 = std::array<double, 6>;

Vec6 to_vec(const VesselState& s) {
    return {s.x, s.y, s.heading, s.yaw_rate, s.speed, s.disturbance};
}

Vec6 derivative(const Vec6& s, double u_c, const VesselParams& p, double noise) {
    const double psi = s[2], r = s[3], u = s[4], d = s[5];
    return {
        u * std::cos(psi),
        u * std::sin(psi),
        r,
        (-r + p.k_psi * u_c) / p.t_psi,
        (-u + p.k_u * (p.thrust_cmd - d)) / p.t_u,
        -d / p.t_d + noise,
    };
}

Vec6 axpy(const Vec6& x, double a, const Vec6& k) {
    Vec6 out;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i] + a * k[i];
    return out;
}

bool all_finite(const VesselState& s) {
    for (double v : to_vec(s))
        if (!std::isfinite(v)) return false;
    return true;
}

}  // namespace

void VesselParams::validate() const {
    auto require = [](bool ok, const char* field, const char* what) {
        if (!ok) throw std::invalid_argument(std::string("vessel.") + field + ": " + what);
    };
    require(std::isfinite(t_psi) && t_psi > 0.0, "t_psi", "must be finite and > 0");
    require(std::isfinite(k_psi), "k_psi", "must be finite");
    require(std::isfinite(t_u) && t_u > 0.0, "t_u", "must be finite and > 0");
    require(std::isfinite(k_u), "k_u", "must be finite");
    require(std::isfinite(t_d) && t_d > 0.0, "t_d", "must be finite and > 0");
    require(std::isfinite(sigma_omega) && sigma_omega >= 0.0, "sigma_omega", "must be finite and >= 0");
    require(std::isfinite(u_c_max) && u_c_max > 0.0, "u_c_max", "must be finite and > 0");
    require(std::isfinite(thrust_cmd), "thrust_cmd", "must be finite");
}

double saturate(double value, double limit) { return std::clamp(value, -limit, limit); }

VesselState step(const VesselState& state, double u_c, const VesselParams& params, double dt,
                 double noise) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("step: dt must be finite and > 0");
    if (!all_finite(state)) throw NumericalError("step: non-finite vessel state");
    if (!std::isfinite(u_c) || !std::isfinite(noise))
        throw NumericalError("step: non-finite control or noise input");
    try {
        params.validate();
    } catch (const std::invalid_argument& e) {
        throw NumericalError(std::string("step: invalid parameters: ") + e.what());
    }

    const double uc = saturate(u_c, params.u_c_max);
    const Vec6 s0 = to_vec(state);
    const Vec6 k1 = derivative(s0, uc, params, noise);
    const Vec6 k2 = derivative(axpy(s0, 0.5 * dt, k1), uc, params, noise);
    const Vec6 k3 = derivative(axpy(s0, 0.5 * dt, k2), uc, params, noise);
    const Vec6 k4 = derivative(axpy(s0, dt, k3), uc, params, noise);

    Vec6 s1;
    for (std::size_t i = 0; i < s1.size(); ++i)
        s1[i] = s0[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

    VesselState next{s1[0], s1[1], wrap_angle(s1[2]), s1[3], s1[4], s1[5]};
    if (!all_finite(next)) throw NumericalError("step: integration produced a non-finite state");
    return next;
}

}  // namespace colav::dynamics
