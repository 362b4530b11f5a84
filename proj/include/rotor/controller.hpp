#pragma once

// Per-rotor closed-loop thrust control: feedforward PID on normalized thrust
// error with conditional-integration anti-windup, plus the open-loop
// thrust-to-speed map used as the comparison baseline.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>

#include "rotor/estimator.hpp"

namespace rotor {

struct PidGains {
    double kff = 0.0;
    double kp = 0.0;
    double ki = 0.0; // per second
    double kd = 0.0; // seconds

    bool valid() const {
        return std::isfinite(kff) && std::isfinite(kp) && std::isfinite(ki) &&
               std::isfinite(kd) && kff >= 0.0 && kff <= 2.0;
    }
};

// Flight-tuned presets for the two reference platforms.
inline constexpr PidGains gains_250mm{.kff = 0.8, .kp = 1.0, .ki = 0.3, .kd = 0.0};
inline constexpr PidGains gains_500mm{.kff = 0.9, .kp = 2.15, .ki = 0.5, .kd = 0.0};

struct RotorCommand {
    double u = 0.0; // clamp(ff + p + i + d) into [0, 1]
    double ff = 0.0;
    double p = 0.0;
    double i = 0.0;
    double d = 0.0;
};

struct ControllerState {
    PidGains gains;
    double integral = 0.0;   // time integral of error, seconds
    double prev_error = 0.0;
    double prev_timestamp = 0.0;
    double deriv_filt = 0.0; // low-passed de/dt
    bool started = false;
    std::optional<double> max_thrust_n; // set by calibration

    void reset() {
        integral = 0.0;
        prev_error = 0.0;
        prev_timestamp = 0.0;
        deriv_filt = 0.0;
        started = false;
    }
};

// Absolute thrust -> [0, 1] against the calibrated maximum.
// nullopt signals not-calibrated.
inline std::optional<double> normalize_thrust(const ControllerState& state, double thrust_n) {
    if (!state.max_thrust_n || !(*state.max_thrust_n > 0.0)) {
        return std::nullopt;
    }
    return std::clamp(thrust_n / *state.max_thrust_n, 0.0, 1.0);
}

// One control period. nullopt signals non-monotonic time; the state is left
// untouched in that case.
std::optional<RotorCommand> control_step(ControllerState& state, double t_sp, double t_hat,
                                         double timestamp);

// Positive root of ct0*w + ct*w^2 = thrust; requires ct > 0.
inline double static_map(double ct0, double ct, double thrust) {
    const double disc = ct0 * ct0 + 4.0 * ct * thrust;
    return (-ct0 + std::sqrt(disc)) / (2.0 * ct);
}

// Normalized baseline command: ct0 = 1 - ct so full thrust maps to full
// speed, with an optional linear battery-voltage correction.
double static_map_command(double ct, double thrust_rel, double voltage_gain = 0.0,
                          double v_ref = 0.0, double v_now = 0.0);

// Maximum estimated thrust over a full-throttle run; stored into the state as
// the normalization bound. nullopt on an empty sequence.
std::optional<double> calibrate_max_thrust(ControllerState& state,
                                           std::span<const ThrustEstimate> estimates);

} // namespace rotor
