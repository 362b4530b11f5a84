#pragma once

// Synthetic rotor plant for closed-loop testing: first-order motor speed lag,
// ground-truth aerodynamics from the same coefficient chain the estimator
// inverts, and seeded disturbances (vertical wind, battery sag, sensor
// noise). Current is synthesized from the power balance so that, with zero
// noise, the estimator sees exactly the power it models.

#include <cstdint>
#include <vector>

#include "rotor/aero.hpp"
#include "rotor/controller.hpp"
#include "rotor/estimator.hpp"
#include "rotor/rng.hpp"

namespace rotor {

struct MotorPlant {
    RotorGeometry geometry;
    double kv_rpm_per_v = 950.0;
    double resistance_ohm = 0.05;  // supply droop under load
    double time_constant_s = 0.02; // command-to-speed lag
    double supply_voltage_v = 16.8;
    double initial_omega = 0.0;

    double omega_max(double voltage) const {
        return rpm_to_rad_s(kv_rpm_per_v * voltage);
    }
};

struct DisturbanceProfile {
    // Vertical wind time series: Ornstein-Uhlenbeck around the mean.
    // Positive wind flows down through the disc (climb/updraft sense), so it
    // raises the stream inflow and lowers thrust at fixed speed.
    double wind_mean_mps = 0.0;
    double wind_gust_mps = 0.0; // stationary gust sigma
    double wind_tau_s = 1.0;    // gust correlation time
    double voltage_sag_v_per_mah = 0.0;
    double current_noise_a = 0.0;
    double speed_noise_rad_s = 0.0;
    std::uint64_t seed = 0;
};

struct SimStep {
    TelemetrySample telemetry;
    double true_thrust_n = 0.0;
    double true_lambda_s = 0.0;
    double wind_mps = 0.0;
    double command = 0.0;
};

class RotorSim {
  public:
    RotorSim(const MotorPlant& plant, const AeroCoefficients& coef,
             const DisturbanceProfile& dist, KqRateTerm kq_term = KqRateTerm::current_rate);

    // Advance one period; dt in (0, 0.01].
    SimStep step(double command_u, double dt);

    void reset();

    double omega() const { return omega_; }
    double consumed_mah() const { return consumed_mah_; }
    double battery_voltage() const;
    const MotorPlant& plant() const { return plant_; }

  private:
    MotorPlant plant_;
    AeroCoefficients coef_;
    DisturbanceProfile dist_;
    KqRateTerm kq_term_;
    CounterRng rng_;

    double omega_ = 0.0;
    double wind_ = 0.0;
    double current_ = 0.0;
    double prev_omega_meas_ = 0.0;
    double prev_current_meas_ = 0.0;
    double consumed_mah_ = 0.0;
    double time_ = 0.0;
    std::uint64_t step_idx_ = 0;
};

struct SetpointProfile {
    enum class Kind { constant, step, square };
    Kind kind = Kind::step;
    double level_a = 0.3;
    double level_b = 0.6;
    double t_switch = 2.0; // step time
    double period = 2.0;   // square-wave period

    double at(double t) const;
};

enum class ControlMethod { thrust_control, static_map };

struct TraceRow {
    double t = 0.0;
    double setpoint = 0.0;
    double estimate = 0.0; // relative thrust fed back to the controller
    double command = 0.0;
    double true_thrust = 0.0; // relative
    bool converged = false;
    int iterations = 0;
    double compute_us = 0.0;
};

struct ClosedLoopOptions {
    double rate_hz = 500.0;
    double duration_s = 10.0;
    ControlMethod method = ControlMethod::thrust_control;
    PidGains gains = gains_250mm;
    EstimatorConfig estimator;
    double static_map_ct = 1.0;          // baseline map coefficient, ct0 = 1 - ct
    double static_map_voltage_gain = 0.0;
    double calibration_s = 1.0; // full-throttle pre-run for max thrust
    bool collect_timing = false;
};

struct ClosedLoopResult {
    std::vector<TraceRow> rows;
    double max_thrust_n = 0.0;
    double consumed_mah = 0.0;
    int nonconverged = 0;
};

// Calibration pre-run (clean air, full throttle) followed by the trial.
// Module failures are flagged per row; the run never aborts.
ClosedLoopResult run_closed_loop(const MotorPlant& plant, const AeroCoefficients& coef,
                                 const DisturbanceProfile& dist, const SetpointProfile& profile,
                                 const ClosedLoopOptions& opt);

} // namespace rotor
