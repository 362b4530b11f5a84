#include "rotor/estimator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace rotor {

namespace {

// Failure path: hold the persistent state, report the previous solution's
// thrust re-evaluated at the current speed (zero if none yet).
ThrustEstimate hold_previous(const EstimatorState& state, const AeroCoefficients& coef,
                             double omega, int iterations, EstimateStatus status) {
    ThrustEstimate out;
    out.status = status;
    out.converged = false;
    out.iterations = iterations;
    out.lambda_s = state.old_lambda_s;
    if (state.last_solution) {
        out.ct = state.last_solution->ct;
        out.thrust_n = static_thrust(coef, out.ct, omega);
    }
    return out;
}

} // namespace

ThrustEstimate estimate_step(EstimatorState& state, const EstimatorConfig& config,
                             const RotorGeometry& geom, const AeroCoefficients& coef,
                             const TelemetrySample& sample) {
    state.sample_count += 1;

    const auto cpam_t = cpam_measured(aerodynamic_power(geom, sample, config.kq_term),
                                      sample.omega, config.omega_min);
    if (!cpam_t) {
        return hold_previous(state, coef, sample.omega, 0, EstimateStatus::below_min_speed);
    }

    // The quadratic has no admissible root past c2, so iterates are confined
    // to the feasible interval.
    const double lo = -1.0;
    const double hi = std::max(lo, std::min(1.0, coef.c2));
    const auto confine = [&](double x) { return std::clamp(x, lo, hi); };

    // Break threshold scaled to the measured coefficient (c3 floors the
    // zero-power case).
    const double thresh = config.convergence_eps * std::max(std::abs(*cpam_t), coef.c3);

    double ls_curr = confine(state.old_lambda_s - config.initial_offset);
    double ls_last = 0.0;
    double f_last = 0.0;
    double ls_eval = ls_curr;
    InflowSolution sol{};
    EstimateStatus status = EstimateStatus::max_iterations;

    int k = 0;
    for (; k < config.max_iterations; ++k) {
        if (k == 1) {
            ls_curr = confine(state.old_lambda_s);
        }
        const auto maybe = solve_inflow(coef, ls_curr);
        if (!maybe) {
            return hold_previous(state, coef, sample.omega, k + 1,
                                 EstimateStatus::no_admissible_root);
        }
        sol = *maybe;
        ls_eval = ls_curr;
        const double f_curr = *cpam_t - sol.cpam;

        if (k > 1 && std::abs(f_curr - f_last) < thresh) {
            status = EstimateStatus::ok;
            break;
        }
        if (k >= 1) {
            const double df = f_curr - f_last;
            if (df == 0.0) {
                status = EstimateStatus::secant_stall;
                break;
            }
            const double next = ls_curr - f_curr * (ls_curr - ls_last) / df;
            ls_last = ls_curr;
            f_last = f_curr;
            ls_curr = confine(next);
        } else {
            ls_last = ls_curr;
            f_last = f_curr;
        }
    }

    state.old_lambda_s = ls_eval;
    state.last_solution = sol;

    ThrustEstimate out;
    out.status = status;
    out.converged = status == EstimateStatus::ok;
    out.iterations = std::min(k + 1, config.max_iterations);
    out.lambda_s = ls_eval;
    out.ct = sol.ct;
    out.thrust_n = static_thrust(coef, sol.ct, sample.omega);
    return out;
}

ThrustEstimate estimate_step_timed(EstimatorState& state, const EstimatorConfig& config,
                                   const RotorGeometry& geom, const AeroCoefficients& coef,
                                   const TelemetrySample& sample) {
    const auto t0 = std::chrono::steady_clock::now();
    ThrustEstimate out = estimate_step(state, config, geom, coef, sample);
    const auto t1 = std::chrono::steady_clock::now();
    out.compute_time_s = std::chrono::duration<double>(t1 - t0).count();
    return out;
}

std::array<ThrustEstimate, 4> estimate_bank(std::array<EstimatorState, 4>& states,
                                            const EstimatorConfig& config,
                                            const RotorGeometry& geom,
                                            const AeroCoefficients& coef,
                                            const std::array<TelemetrySample, 4>& samples) {
    std::array<ThrustEstimate, 4> out;
    for (std::size_t i = 0; i < 4; ++i) {
        out[i] = estimate_step(states[i], config, geom, coef, samples[i]);
    }
    return out;
}

} // namespace rotor
