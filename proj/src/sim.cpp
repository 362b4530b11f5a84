#include "rotor/sim.hpp"

#include <algorithm>
#include <cmath>

#include "rotor/errors.hpp"

namespace rotor {

namespace {

constexpr std::uint64_t stream_wind = 1;
constexpr std::uint64_t stream_current = 2;
constexpr std::uint64_t stream_speed = 3;

// Below this speed the rotor is treated as unloaded.
constexpr double omega_floor = 1.0; // rad/s

// Solve (beta - alpha*i)*i = p for the physical (smaller) root; falls back to
// the rate-free current when the transient has no real solution.
double synth_current(double p, double alpha, double beta, double kq0) {
    if (alpha == 0.0) {
        return p / beta;
    }
    const double disc = beta * beta - 4.0 * alpha * p;
    if (disc < 0.0) {
        return p / kq0;
    }
    return 2.0 * p / (beta + std::sqrt(disc));
}

} // namespace

RotorSim::RotorSim(const MotorPlant& plant, const AeroCoefficients& coef,
                   const DisturbanceProfile& dist, KqRateTerm kq_term)
    : plant_(plant), coef_(coef), dist_(dist), kq_term_(kq_term), rng_{dist.seed} {
    reset();
}

void RotorSim::reset() {
    omega_ = plant_.initial_omega;
    wind_ = dist_.wind_mean_mps;
    current_ = 0.0;
    prev_omega_meas_ = plant_.initial_omega;
    prev_current_meas_ = 0.0;
    consumed_mah_ = 0.0;
    time_ = 0.0;
    step_idx_ = 0;
}

double RotorSim::battery_voltage() const {
    return plant_.supply_voltage_v - dist_.voltage_sag_v_per_mah * consumed_mah_;
}

SimStep RotorSim::step(double command_u, double dt) {
    if (!(dt > 0.0) || dt > 0.01) {
        throw NumericalError("RotorSim::step: dt must be in (0, 0.01]");
    }
    const double u = std::clamp(command_u, 0.0, 1.0);

    // motor: first-order lag toward the command-implied steady state, with
    // supply droop from the previous load current
    const double v_batt = battery_voltage();
    const double v_eff = std::max(0.0, v_batt - plant_.resistance_ohm * std::max(current_, 0.0));
    const double w_ss = u * plant_.omega_max(v_eff);
    const double w_prev = omega_;
    omega_ = w_ss + (omega_ - w_ss) * std::exp(-dt / plant_.time_constant_s);
    const double omega_dot = (omega_ - w_prev) / dt;

    // vertical wind, OU process
    const double theta = dist_.wind_tau_s > 0.0 ? std::min(1.0, dt / dist_.wind_tau_s) : 1.0;
    wind_ += theta * (dist_.wind_mean_mps - wind_) +
             dist_.wind_gust_mps * std::sqrt(2.0 * theta) * rng_.normal(stream_wind, step_idx_);

    // ground-truth aerodynamics
    double lambda_s = 0.0;
    double thrust = 0.0;
    double cpam = 0.0;
    if (omega_ > omega_floor) {
        const double hi = std::min(1.0, coef_.c2);
        lambda_s = std::clamp(wind_ / (omega_ * plant_.geometry.radius_m), -1.0, hi);
        if (const auto sol = solve_inflow(coef_, lambda_s)) {
            thrust = static_thrust(coef_, sol->ct, omega_);
            cpam = sol->cpam;
        }
    }

    // invert the power balance for the motor current
    const double p_am = cpam * omega_ * omega_ * omega_;
    const double p_m = p_am + plant_.geometry.rotor_inertia * omega_ * omega_dot;
    double current = 0.0;
    if (omega_ > omega_floor) {
        const double p = p_m / omega_;
        const double kq0 = plant_.geometry.motor_kq0;
        const double kq1 = plant_.geometry.motor_kq1;
        if (kq_term_ == KqRateTerm::current_rate) {
            // K_q uses di/dt = (i - i_prev)/dt, matching the backward
            // difference the estimator sees
            current = synth_current(p, kq1 / dt, kq0 + (kq1 / dt) * current_, kq0);
        } else {
            current = synth_current(p, kq1, kq0, kq0);
        }
    }

    // measured channels
    double w_meas = omega_;
    double i_meas = current;
    if (dist_.speed_noise_rad_s > 0.0) {
        w_meas = std::max(0.0, omega_ + dist_.speed_noise_rad_s * rng_.normal(stream_speed, step_idx_));
    }
    if (dist_.current_noise_a > 0.0) {
        i_meas = current + dist_.current_noise_a * rng_.normal(stream_current, step_idx_);
    }

    time_ += dt;
    TelemetrySample t;
    t.timestamp = time_;
    t.omega = w_meas;
    t.omega_dot = (w_meas - prev_omega_meas_) / dt;
    t.current_a = i_meas;
    t.current_rate = (i_meas - prev_current_meas_) / dt;
    t.voltage = v_batt;

    prev_omega_meas_ = w_meas;
    prev_current_meas_ = i_meas;
    current_ = current;
    consumed_mah_ += std::max(current, 0.0) * dt / 3.6;
    step_idx_ += 1;

    SimStep out;
    out.telemetry = t;
    out.true_thrust_n = thrust;
    out.true_lambda_s = lambda_s;
    out.wind_mps = wind_;
    out.command = u;
    return out;
}

double SetpointProfile::at(double t) const {
    switch (kind) {
    case Kind::constant:
        return level_a;
    case Kind::step:
        return t < t_switch ? level_a : level_b;
    case Kind::square: {
        if (period <= 0.0) {
            return level_a;
        }
        const double phase = std::fmod(t, period);
        return phase < 0.5 * period ? level_a : level_b;
    }
    }
    return level_a;
}

ClosedLoopResult run_closed_loop(const MotorPlant& plant, const AeroCoefficients& coef,
                                 const DisturbanceProfile& dist, const SetpointProfile& profile,
                                 const ClosedLoopOptions& opt) {
    const double dt = 1.0 / opt.rate_hz;
    ClosedLoopResult res;

    // calibration: clean air, full throttle, track the peak estimate
    {
        DisturbanceProfile clean;
        RotorSim sim(plant, coef, clean, opt.estimator.kq_term);
        EstimatorState es;
        double tmax = 0.0;
        const int n = static_cast<int>(std::lround(opt.calibration_s * opt.rate_hz));
        for (int i = 0; i < n; ++i) {
            const SimStep st = sim.step(1.0, dt);
            const ThrustEstimate e = estimate_step(es, opt.estimator, plant.geometry, coef,
                                                   st.telemetry);
            if (e.converged) {
                tmax = std::max(tmax, e.thrust_n);
            }
        }
        res.max_thrust_n = tmax;
    }
    if (!(res.max_thrust_n > 0.0)) {
        throw NumericalError("calibration produced no converged thrust estimate");
    }

    RotorSim sim(plant, coef, dist, opt.estimator.kq_term);
    EstimatorState es;
    ControllerState cs;
    cs.gains = opt.gains;
    cs.max_thrust_n = res.max_thrust_n;

    const int n = static_cast<int>(std::lround(opt.duration_s * opt.rate_hz));
    res.rows.reserve(static_cast<std::size_t>(n));
    double feedback = 0.0;
    double v_prev = plant.supply_voltage_v;

    for (int i = 0; i < n; ++i) {
        const double t = (i + 1) * dt;
        const double sp = profile.at(t);

        double u = 0.0;
        if (opt.method == ControlMethod::thrust_control) {
            const auto cmd = control_step(cs, sp, feedback, t);
            u = cmd ? cmd->u : 0.0;
        } else {
            u = static_map_command(opt.static_map_ct, sp, opt.static_map_voltage_gain,
                                   plant.supply_voltage_v, v_prev);
        }

        const SimStep st = sim.step(u, dt);
        const ThrustEstimate e =
            opt.collect_timing
                ? estimate_step_timed(es, opt.estimator, plant.geometry, coef, st.telemetry)
                : estimate_step(es, opt.estimator, plant.geometry, coef, st.telemetry);

        feedback = normalize_thrust(cs, e.thrust_n).value_or(0.0);
        if (!e.converged) {
            res.nonconverged += 1;
        }
        v_prev = st.telemetry.voltage;

        TraceRow row;
        row.t = t;
        row.setpoint = sp;
        row.estimate = feedback;
        row.command = u;
        row.true_thrust = st.true_thrust_n / res.max_thrust_n;
        row.converged = e.converged;
        row.iterations = e.iterations;
        row.compute_us = e.compute_time_s * 1e6;
        res.rows.push_back(row);
    }
    res.consumed_mah = sim.consumed_mah();
    return res;
}

} // namespace rotor
