#include "rotor/controller.hpp"

#include <algorithm>

namespace rotor {

std::optional<RotorCommand> control_step(ControllerState& state, double t_sp, double t_hat,
                                         double timestamp) {
    if (timestamp <= state.prev_timestamp) {
        return std::nullopt;
    }

    const double dt = timestamp - state.prev_timestamp;
    const double e = t_sp - t_hat;
    // First period: no error history yet, so the trapezoid degenerates to
    // e*dt and the derivative starts at zero.
    const double e_prev = state.started ? state.prev_error : e;

    // Derivative on the error through a first-order low-pass with a time
    // constant of four periods.
    const double d_raw = (e - e_prev) / dt;
    const double deriv = state.deriv_filt + 0.2 * (d_raw - state.deriv_filt);

    double integral = state.integral + 0.5 * dt * (e + e_prev);

    const auto mix = [&](double integ) {
        RotorCommand c;
        c.ff = state.gains.kff * t_sp;
        c.p = state.gains.kp * e;
        c.i = state.gains.ki * integ;
        c.d = state.gains.kd * deriv;
        c.u = c.ff + c.p + c.i + c.d;
        return c;
    };

    RotorCommand cmd = mix(integral);
    // Conditional integration: freeze the integral while the output is
    // saturated in the error's direction.
    if ((cmd.u > 1.0 && e > 0.0) || (cmd.u < 0.0 && e < 0.0)) {
        integral = state.integral;
        cmd = mix(integral);
    }
    cmd.u = std::clamp(cmd.u, 0.0, 1.0);

    state.integral = integral;
    state.prev_error = e;
    state.prev_timestamp = timestamp;
    state.deriv_filt = deriv;
    state.started = true;
    return cmd;
}

double static_map_command(double ct, double thrust_rel, double voltage_gain, double v_ref,
                          double v_now) {
    double w = static_map(1.0 - ct, ct, thrust_rel);
    if (voltage_gain != 0.0 && v_ref > 0.0 && v_now > 0.0) {
        w *= 1.0 + voltage_gain * (v_ref - v_now) / v_ref;
    }
    return std::clamp(w, 0.0, 1.0);
}

std::optional<double> calibrate_max_thrust(ControllerState& state,
                                           std::span<const ThrustEstimate> estimates) {
    if (estimates.empty()) {
        return std::nullopt;
    }
    double best = estimates[0].thrust_n;
    for (const auto& e : estimates) {
        best = std::max(best, e.thrust_n);
    }
    state.max_thrust_n = best;
    return best;
}

} // namespace rotor
