#include "rotor/aero.hpp"

namespace rotor {

RotorGeometry RotorGeometry::make(double radius_m, int blade_count, double tip_chord_m,
                                  double tip_pitch_rad, double lift_slope, double profile_drag,
                                  double air_density, double rotor_inertia, double motor_kq0,
                                  double motor_kq1) {
    RotorGeometry g;
    g.radius_m = radius_m;
    g.disc_area_m2 = std::numbers::pi * radius_m * radius_m;
    g.blade_count = blade_count;
    g.tip_chord_m = tip_chord_m;
    g.tip_pitch_rad = tip_pitch_rad;
    g.lift_slope = lift_slope;
    g.profile_drag = profile_drag;
    g.air_density = air_density;
    g.rotor_inertia = rotor_inertia;
    g.motor_kq0 = motor_kq0;
    g.motor_kq1 = motor_kq1;
    return g;
}

bool RotorGeometry::valid() const {
    if (!(radius_m > 0.0) || !(air_density > 0.0) || rotor_inertia < 0.0) {
        return false;
    }
    if (blade_count < 2 || blade_count > 4) {
        return false;
    }
    const double area = std::numbers::pi * radius_m * radius_m;
    return std::abs(disc_area_m2 - area) <= 1e-12 * area;
}

RotorGeometry RotorGeometry::baseline() {
    // Chord and drag back-solved so from_geometry() reproduces the baseline
    // coefficient set.
    return make(0.0724, 2, 0.024048612041626515, 0.2993, 5.5, 0.016058174127042177,
                1.225, 5.0e-5, 0.242, 0.0014);
}

AeroCoefficients AeroCoefficients::baseline() {
    AeroCoefficients c;
    c.c0 = 0.0724;
    c.c1 = 6.1490e-5;
    c.c2 = 0.2993;
    c.c3 = 1.2998e-8;
    const double area = std::numbers::pi * c.c0 * c.c0;
    c.c4 = 2.0 * 1.225 * area * c.c0 * c.c0;
    c.d0 = 4.2959;
    c.d1 = -1.7154e5;
    c.thrust_scale = 1.0;
    return c;
}

AeroCoefficients AeroCoefficients::from_geometry(const RotorGeometry& g, double d0, double d1) {
    AeroCoefficients c;
    const double r = g.radius_m;
    const double r3 = r * r * r;
    c.c0 = r;
    c.c1 = 0.5 * g.blade_count * g.air_density * g.tip_chord_m * r3 * g.lift_slope;
    c.c2 = g.tip_pitch_rad;
    c.c3 = 0.5 * g.air_density * g.tip_chord_m * g.blade_count * g.profile_drag * r3 * r;
    c.c4 = 2.0 * g.air_density * g.disc_area_m2 * r * r;
    c.d0 = d0;
    c.d1 = d1;
    c.thrust_scale = 1.0;
    return c;
}

TelemetrySample SampleBuilder::next(double timestamp, double omega, double current,
                                    double voltage) {
    TelemetrySample s;
    s.timestamp = timestamp;
    s.omega = omega;
    s.current_a = current;
    s.voltage = voltage;
    if (started && timestamp > prev_time) {
        const double dt = timestamp - prev_time;
        s.omega_dot = (omega - prev_omega) / dt;
        s.current_rate = (current - prev_current) / dt;
    }
    started = true;
    prev_time = timestamp;
    prev_omega = omega;
    prev_current = current;
    return s;
}

TelemetrySample SampleBuilder::next_with_rate(double timestamp, double omega, double omega_dot,
                                              double current, double voltage) {
    TelemetrySample s = next(timestamp, omega, current, voltage);
    s.omega_dot = omega_dot;
    return s;
}

std::optional<double> lambda_i_from_lambda_s(const AeroCoefficients& coef, double lambda_s) {
    const double a = coef.c4;
    const double b = coef.c4 * lambda_s + coef.c1;
    const double c = coef.c1 * (lambda_s - coef.c2);

    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) {
        return std::nullopt;
    }

    // Cancellation-free form: q has the sign opposite to b.
    const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    const double r1 = q / a;
    const double r2 = q != 0.0 ? c / q : r1;

    const bool ok1 = r1 >= 0.0;
    const bool ok2 = r2 >= 0.0;
    if (ok1 && ok2) {
        return std::min(r1, r2);
    }
    if (ok1) {
        return r1;
    }
    if (ok2) {
        return r2;
    }
    return std::nullopt;
}

std::optional<InflowSolution> solve_inflow(const AeroCoefficients& coef, double lambda_s) {
    const auto li = lambda_i_from_lambda_s(coef, lambda_s);
    if (!li) {
        return std::nullopt;
    }
    InflowSolution sol;
    sol.lambda_s = lambda_s;
    sol.lambda_i = *li;
    sol.ct = ct_from_inflow(coef, lambda_s, *li);
    sol.kappa = kappa_from_ct(coef, sol.ct);
    sol.cpam = cpam_model(coef, sol.ct, sol.kappa, *li, lambda_s);
    return sol;
}

} // namespace rotor
