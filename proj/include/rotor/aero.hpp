#pragma once

// Rotor aerodynamics from combined blade-element / momentum theory, reduced to
// the coefficient form used by the thrust estimator:
//
//   P_r    = I_r·ω·ω̇                      shaft acceleration power
//   P_m    = K_q·i_a·ω                     mechanical power, K_q = K_q0 − K_q1·i̇_a
//   P_am   = P_m − P_r                     aerodynamic mechanical power
//   C_Pam  = P_am / ω³                     measured power coefficient
//   C_T    = c1·(c2 − λ)                   blade-element thrust coefficient
//   C_T    = c4·λⁱ·λ                       momentum-theory thrust coefficient
//   κ      = d0 + d1·C_T                   induced power factor
//   C_Pam  = c3 + C_T·(κ·λⁱ + λˢ)·c0       model power coefficient
//   T      = scale·C_T·ω²                  static thrust
//
// λ = λˢ + λⁱ is the vertical inflow ratio. Equating the two C_T forms gives
// the induced-inflow quadratic
//
//   c4·(λⁱ)² + λⁱ·(c4·λˢ + c1) + c1·(λˢ − c2) = 0.
//
// All speeds are rad/s; convert from RPM at the boundary.

#include <cmath>
#include <numbers>
#include <optional>

namespace rotor {

struct RotorGeometry {
    double radius_m = 0.0;      // R
    double disc_area_m2 = 0.0;  // A = pi R^2, set by make()
    int blade_count = 2;        // N_b, one of {2,3,4}
    double tip_chord_m = 0.0;   // c_tip
    double tip_pitch_rad = 0.0; // theta_tip
    double lift_slope = 0.0;    // C_l_alpha
    double profile_drag = 0.0;  // C_d0
    double air_density = 1.225; // rho, kg/m^3
    double rotor_inertia = 0.0; // I_r, kg m^2
    double motor_kq0 = 0.0;     // N m / A
    double motor_kq1 = 0.0;     // torque-constant current sensitivity

    static RotorGeometry make(double radius_m, int blade_count, double tip_chord_m,
                              double tip_pitch_rad, double lift_slope, double profile_drag,
                              double air_density, double rotor_inertia, double motor_kq0,
                              double motor_kq1);

    bool valid() const;

    // Rotor the built-in coefficient baseline was identified on
    // (950KV outrunner, 10-in dual-blade propeller).
    static RotorGeometry baseline();
};

struct AeroCoefficients {
    double c0 = 0.0; // m (rotor radius)
    double c1 = 0.0;
    double c2 = 0.0; // rad (tip pitch)
    double c3 = 0.0;
    double c4 = 0.0; // 2 rho A c0^2
    double d0 = 0.0;
    double d1 = 0.0;
    double thrust_scale = 1.0; // platform fit, 1.0 = raw baseline model

    // Built-in calibrated baseline set.
    static AeroCoefficients baseline();

    // Derive the coefficient reduction from physical rotor constants.
    static AeroCoefficients from_geometry(const RotorGeometry& g, double d0, double d1);
};

struct TelemetrySample {
    double omega = 0.0;        // rad/s
    double omega_dot = 0.0;    // rad/s^2
    double current_a = 0.0;    // A
    double current_rate = 0.0; // A/s
    double voltage = 0.0;      // V
    double timestamp = 0.0;    // s
};

// Wraps raw ESC frames into TelemetrySample, filling the rate channels by
// backward difference. The first sample gets zero rates.
struct SampleBuilder {
    bool started = false;
    double prev_time = 0.0;
    double prev_omega = 0.0;
    double prev_current = 0.0;

    TelemetrySample next(double timestamp, double omega, double current, double voltage);
    // Variant for telemetry streams that already carry the speed rate.
    TelemetrySample next_with_rate(double timestamp, double omega, double omega_dot,
                                   double current, double voltage);
    void reset() { *this = SampleBuilder{}; }
};

struct InflowSolution {
    double lambda_s = 0.0;
    double lambda_i = 0.0;
    double ct = 0.0;
    double kappa = 0.0;
    double cpam = 0.0;
};

enum class KqRateTerm {
    current_rate, // K_q = K_q0 - K_q1 * di_a/dt (literal form)
    current       // K_q = K_q0 - K_q1 * i_a
};

inline double kq_effective(const RotorGeometry& g, const TelemetrySample& s,
                           KqRateTerm term = KqRateTerm::current_rate) {
    const double x = term == KqRateTerm::current_rate ? s.current_rate : s.current_a;
    return g.motor_kq0 - g.motor_kq1 * x;
}

inline double shaft_friction_power(const RotorGeometry& g, double omega, double omega_dot) {
    return g.rotor_inertia * omega * omega_dot;
}

inline double mechanical_power(const RotorGeometry& g, const TelemetrySample& s,
                               KqRateTerm term = KqRateTerm::current_rate) {
    return kq_effective(g, s, term) * s.current_a * s.omega;
}

inline double aerodynamic_power(const RotorGeometry& g, const TelemetrySample& s,
                                KqRateTerm term = KqRateTerm::current_rate) {
    return mechanical_power(g, s, term) - shaft_friction_power(g, s.omega, s.omega_dot);
}

// Below this speed the omega^3 division amplifies sensor noise beyond use;
// callers hold their previous output instead.
inline constexpr double default_omega_min = 50.0; // rad/s

// nullopt signals below-minimum-speed.
inline std::optional<double> cpam_measured(double p_am, double omega,
                                           double omega_min = default_omega_min) {
    if (omega <= omega_min) {
        return std::nullopt;
    }
    return p_am / (omega * omega * omega);
}

// Admissible (non-negative, smallest) root of the induced-inflow quadratic.
// nullopt when the discriminant is negative or both roots are negative.
std::optional<double> lambda_i_from_lambda_s(const AeroCoefficients& coef, double lambda_s);

inline double ct_from_inflow(const AeroCoefficients& coef, double lambda_s, double lambda_i) {
    return coef.c1 * (coef.c2 - (lambda_s + lambda_i));
}

inline double kappa_from_ct(const AeroCoefficients& coef, double ct) {
    return coef.d0 + coef.d1 * ct;
}

inline double cpam_model(const AeroCoefficients& coef, double ct, double kappa,
                         double lambda_i, double lambda_s) {
    return coef.c3 + ct * (kappa * lambda_i + lambda_s) * coef.c0;
}

inline double static_thrust(const AeroCoefficients& coef, double ct, double omega) {
    return coef.thrust_scale * ct * omega * omega;
}

// Full forward chain for one stream-inflow value.
std::optional<InflowSolution> solve_inflow(const AeroCoefficients& coef, double lambda_s);

inline constexpr double rpm_to_rad_s(double rpm) {
    return rpm * 2.0 * std::numbers::pi / 60.0;
}

inline constexpr double rad_s_to_rpm(double rad_s) {
    return rad_s * 60.0 / (2.0 * std::numbers::pi);
}

} // namespace rotor
