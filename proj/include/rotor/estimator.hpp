#pragma once

// Per-rotor thrust estimation: each telemetry sample yields a measured power
// coefficient C_Pam(t) = P_am/omega^3; a warm-started secant iteration on the
// stream inflow lambda_s drives the model coefficient onto the measurement,
// after which thrust follows from C_T.

#include <array>
#include <cstdint>
#include <optional>

#include "rotor/aero.hpp"

namespace rotor {

struct EstimatorConfig {
    int max_iterations = 20;       // N
    double initial_offset = 0.1;   // Delta, first seed is old - Delta
    double convergence_eps = 1e-5; // relative residual-difference threshold
    double omega_min = default_omega_min;
    KqRateTerm kq_term = KqRateTerm::current_rate;

    bool valid() const {
        return max_iterations >= 2 && initial_offset > 0.0 && convergence_eps > 0.0;
    }
};

enum class EstimateStatus {
    ok,
    below_min_speed,
    no_admissible_root,
    secant_stall,
    max_iterations
};

struct ThrustEstimate {
    double thrust_n = 0.0;
    double ct = 0.0;
    double lambda_s = 0.0;
    int iterations = 0;
    bool converged = false;
    EstimateStatus status = EstimateStatus::ok;
    double compute_time_s = 0.0; // filled by estimate_step_timed only
};

struct EstimatorState {
    double old_lambda_s = 0.0;
    std::optional<InflowSolution> last_solution;
    std::uint64_t sample_count = 0;

    // Restores the cold-start state; call on arm/disarm transitions.
    void reset() { *this = EstimatorState{}; }
};

ThrustEstimate estimate_step(EstimatorState& state, const EstimatorConfig& config,
                             const RotorGeometry& geom, const AeroCoefficients& coef,
                             const TelemetrySample& sample);

// Same step with compute_time_s measured around the call.
ThrustEstimate estimate_step_timed(EstimatorState& state, const EstimatorConfig& config,
                                   const RotorGeometry& geom, const AeroCoefficients& coef,
                                   const TelemetrySample& sample);

// Four independent rotors, no cross coupling.
std::array<ThrustEstimate, 4> estimate_bank(std::array<EstimatorState, 4>& states,
                                            const EstimatorConfig& config,
                                            const RotorGeometry& geom,
                                            const AeroCoefficients& coef,
                                            const std::array<TelemetrySample, 4>& samples);

} // namespace rotor
