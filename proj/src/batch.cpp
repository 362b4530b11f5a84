#include "rotor/batch.hpp"

#include <array>

#include "rotor/csv.hpp"
#include "rotor/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rotor {

std::vector<TrialSpec> make_trial_list(const ExperimentConfig& cfg) {
    std::vector<TrialSpec> specs;
    specs.reserve(2 * static_cast<std::size_t>(cfg.trials_per_method));
    for (ControlMethod m : {ControlMethod::thrust_control, ControlMethod::static_map}) {
        for (int i = 0; i < cfg.trials_per_method; ++i) {
            TrialSpec s;
            s.index = i;
            s.method = m;
            // paired design: trial i uses the same seed and wind under both methods
            s.seed = cfg.base_seed + static_cast<std::uint64_t>(i);
            s.wind_mean = cfg.wind_levels.empty()
                              ? 0.0
                              : cfg.wind_levels[static_cast<std::size_t>(i) % cfg.wind_levels.size()];
            specs.push_back(s);
        }
    }
    return specs;
}

TrialResult run_trial(const ExperimentConfig& cfg, const TrialSpec& spec) {
    DisturbanceProfile dist = cfg.disturbance;
    dist.wind_mean_mps = spec.wind_mean;
    dist.seed = spec.seed;

    ClosedLoopOptions opt = cfg.loop;
    opt.method = spec.method;

    TrialResult r;
    r.spec = spec;
    r.run = run_closed_loop(cfg.plant, cfg.coef, dist, cfg.profile, opt);

    std::vector<double> sp;
    std::vector<double> est;
    std::vector<double> tru;
    sp.reserve(r.run.rows.size());
    est.reserve(r.run.rows.size());
    tru.reserve(r.run.rows.size());
    for (const auto& row : r.run.rows) {
        sp.push_back(row.setpoint);
        est.push_back(row.estimate);
        tru.push_back(row.true_thrust);
    }
    r.rmse_estimate = rmse(sp, est);
    r.rmse_true = rmse(sp, tru);
    r.consumed_mah = r.run.consumed_mah;
    r.nonconverged_frac =
        r.run.rows.empty() ? 0.0
                           : static_cast<double>(r.run.nonconverged) /
                                 static_cast<double>(r.run.rows.size());
    return r;
}

std::vector<TrialResult> run_trials_serial(const ExperimentConfig& cfg) {
    const auto specs = make_trial_list(cfg);
    std::vector<TrialResult> out(specs.size());
    for (std::size_t i = 0; i < specs.size(); ++i) {
        out[i] = run_trial(cfg, specs[i]);
    }
    return out;
}

std::vector<TrialResult> run_trials_parallel(const ExperimentConfig& cfg, int jobs) {
    const auto specs = make_trial_list(cfg);
    std::vector<TrialResult> out(specs.size());
    const int n = static_cast<int>(specs.size());
#ifdef _OPENMP
    if (jobs > 0) {
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
        for (int i = 0; i < n; ++i) {
            out[static_cast<std::size_t>(i)] = run_trial(cfg, specs[static_cast<std::size_t>(i)]);
        }
    } else {
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < n; ++i) {
            out[static_cast<std::size_t>(i)] = run_trial(cfg, specs[static_cast<std::size_t>(i)]);
        }
    }
#else
    (void)jobs;
    for (int i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = run_trial(cfg, specs[static_cast<std::size_t>(i)]);
    }
#endif
    return out;
}

const char* method_name(ControlMethod m) {
    return m == ControlMethod::thrust_control ? "thrust-control" : "static-map";
}

BatchSummary summarize(const std::vector<TrialResult>& results) {
    BatchSummary s;
    for (ControlMethod m : {ControlMethod::thrust_control, ControlMethod::static_map}) {
        std::vector<double> re;
        std::vector<double> rt;
        std::vector<double> mah;
        for (const auto& r : results) {
            if (r.spec.method != m) {
                continue;
            }
            re.push_back(r.rmse_estimate);
            rt.push_back(r.rmse_true);
            mah.push_back(r.consumed_mah);
        }
        MethodSummary ms;
        ms.method = method_name(m);
        ms.trials = static_cast<int>(re.size());
        if (!re.empty()) {
            ms.rmse_estimate = aggregate(re);
            ms.rmse_true = aggregate(rt);
            ms.consumed_mah = aggregate(mah);
        }
        (m == ControlMethod::thrust_control ? s.thrust_control : s.static_map) = ms;
    }
    return s;
}

// --- configuration assembly -------------------------------------------------

namespace {

constexpr std::array<std::string_view, 40> known_keys = {
    "rotor.radius_m",       "rotor.blade_count",    "rotor.tip_chord_m",
    "rotor.tip_pitch_rad",  "rotor.lift_slope",     "rotor.profile_drag",
    "rotor.air_density",    "rotor.inertia_kg_m2",  "rotor.kq0",
    "rotor.kq1",            "coef.use_geometry",    "coef.d0",
    "coef.d1",              "coef.thrust_scale",    "motor.kv_rpm_per_v",
    "motor.resistance_ohm", "motor.time_constant_s", "motor.supply_voltage_v",
    "estimator.max_iterations", "estimator.initial_offset", "estimator.epsilon",
    "estimator.omega_min",  "estimator.kq_term",    "controller.preset",
    "controller.kff",       "controller.kp",        "controller.ki",
    "controller.kd",        "staticmap.ct",         "staticmap.voltage_gain",
    "wind.mean_mps",        "wind.gust_mps",        "wind.tau_s",
    "noise.current_sigma_a", "noise.speed_sigma_rad_s", "battery.sag_v_per_mah",
    "sim.rate_hz",          "sim.duration_s",       "sim.seed",
    "sim.calibration_s",
};

constexpr std::array<std::string_view, 8> known_keys_extra = {
    "setpoint.kind", "setpoint.a",          "setpoint.b",    "setpoint.t_switch",
    "setpoint.period", "batch.trials",      "batch.wind_levels", "limits.max_nonconverged",
};

PidGains gains_from_config(const Config& cfg) {
    const std::string preset = cfg.get_string("controller.preset", "250mm");
    PidGains g;
    if (preset == "250mm") {
        g = gains_250mm;
    } else if (preset == "500mm") {
        g = gains_500mm;
    } else if (preset == "custom") {
        g = PidGains{};
    } else {
        throw ConfigError("controller.preset must be 250mm, 500mm or custom, got '" + preset +
                          "'");
    }
    g.kff = cfg.get_double("controller.kff", g.kff);
    g.kp = cfg.get_double("controller.kp", g.kp);
    g.ki = cfg.get_double("controller.ki", g.ki);
    g.kd = cfg.get_double("controller.kd", g.kd);
    if (!g.valid()) {
        throw ConfigError("controller gains out of range");
    }
    return g;
}

} // namespace

void apply_preset(Config& cfg, const std::string& preset) {
    if (preset == "250mm") {
        // 2300KV motor, 3-blade 5045 propeller
        cfg.set("rotor.radius_m", "0.0635");
        cfg.set("rotor.blade_count", "3");
        cfg.set("motor.kv_rpm_per_v", "2300");
        cfg.set("coef.thrust_scale", "0.10554167106488072");
        cfg.set("controller.preset", "250mm");
    } else if (preset == "500mm") {
        // 700KV motor, 2-blade 13x4.4 propeller
        cfg.set("rotor.radius_m", "0.165");
        cfg.set("rotor.blade_count", "2");
        cfg.set("motor.kv_rpm_per_v", "700");
        cfg.set("coef.thrust_scale", "1.644971303291189");
        cfg.set("controller.preset", "500mm");
    } else {
        throw ConfigError("unknown preset '" + preset + "' (expected 250mm or 500mm)");
    }
}

ExperimentConfig experiment_from_config(const Config& cfg) {
    std::vector<std::string_view> known(known_keys.begin(), known_keys.end());
    known.insert(known.end(), known_keys_extra.begin(), known_keys_extra.end());
    cfg.check_known(known);

    ExperimentConfig ec;

    const RotorGeometry base = RotorGeometry::baseline();
    const RotorGeometry geom = RotorGeometry::make(
        cfg.get_double("rotor.radius_m", base.radius_m),
        cfg.get_int("rotor.blade_count", base.blade_count),
        cfg.get_double("rotor.tip_chord_m", base.tip_chord_m),
        cfg.get_double("rotor.tip_pitch_rad", base.tip_pitch_rad),
        cfg.get_double("rotor.lift_slope", base.lift_slope),
        cfg.get_double("rotor.profile_drag", base.profile_drag),
        cfg.get_double("rotor.air_density", base.air_density),
        cfg.get_double("rotor.inertia_kg_m2", base.rotor_inertia),
        cfg.get_double("rotor.kq0", base.motor_kq0),
        cfg.get_double("rotor.kq1", base.motor_kq1));
    if (!geom.valid()) {
        throw ConfigError("rotor geometry violates its invariants");
    }

    if (cfg.get_bool("coef.use_geometry", false)) {
        ec.coef = AeroCoefficients::from_geometry(geom, cfg.get_double("coef.d0", 4.2959),
                                                  cfg.get_double("coef.d1", -1.7154e5));
    } else {
        ec.coef = AeroCoefficients::baseline();
    }
    ec.coef.thrust_scale = cfg.get_double("coef.thrust_scale", 1.0);
    if (!(ec.coef.thrust_scale > 0.0)) {
        throw ConfigError("coef.thrust_scale must be positive");
    }

    ec.plant.geometry = geom;
    ec.plant.kv_rpm_per_v = cfg.get_double("motor.kv_rpm_per_v", 950.0);
    ec.plant.resistance_ohm = cfg.get_double("motor.resistance_ohm", 0.05);
    ec.plant.time_constant_s = cfg.get_double("motor.time_constant_s", 0.02);
    ec.plant.supply_voltage_v = cfg.get_double("motor.supply_voltage_v", 16.8);

    ec.loop.estimator.max_iterations = cfg.get_int("estimator.max_iterations", 20);
    ec.loop.estimator.initial_offset = cfg.get_double("estimator.initial_offset", 0.1);
    ec.loop.estimator.convergence_eps = cfg.get_double("estimator.epsilon", 1e-5);
    ec.loop.estimator.omega_min = cfg.get_double("estimator.omega_min", default_omega_min);
    const std::string kq = cfg.get_string("estimator.kq_term", "rate");
    if (kq == "rate") {
        ec.loop.estimator.kq_term = KqRateTerm::current_rate;
    } else if (kq == "current") {
        ec.loop.estimator.kq_term = KqRateTerm::current;
    } else {
        throw ConfigError("estimator.kq_term must be 'rate' or 'current'");
    }
    if (!ec.loop.estimator.valid()) {
        throw ConfigError("estimator configuration violates its invariants");
    }

    ec.loop.gains = gains_from_config(cfg);
    ec.loop.static_map_ct = cfg.get_double("staticmap.ct", 1.0);
    if (!(ec.loop.static_map_ct > 0.0)) {
        throw ConfigError("staticmap.ct must be positive");
    }
    ec.loop.static_map_voltage_gain = cfg.get_double("staticmap.voltage_gain", 0.0);
    ec.loop.rate_hz = cfg.get_double("sim.rate_hz", 500.0);
    if (ec.loop.rate_hz < 100.0 || ec.loop.rate_hz > 2000.0) {
        throw ConfigError("sim.rate_hz must be in [100, 2000]");
    }
    ec.loop.duration_s = cfg.get_double("sim.duration_s", 10.0);
    ec.loop.calibration_s = cfg.get_double("sim.calibration_s", 1.0);

    ec.disturbance.wind_mean_mps = cfg.get_double("wind.mean_mps", 0.0);
    ec.disturbance.wind_gust_mps = cfg.get_double("wind.gust_mps", 0.0);
    ec.disturbance.wind_tau_s = cfg.get_double("wind.tau_s", 1.0);
    ec.disturbance.current_noise_a = cfg.get_double("noise.current_sigma_a", 0.0);
    ec.disturbance.speed_noise_rad_s = cfg.get_double("noise.speed_sigma_rad_s", 0.0);
    ec.disturbance.voltage_sag_v_per_mah = cfg.get_double("battery.sag_v_per_mah", 0.0);
    ec.disturbance.seed = cfg.get_u64("sim.seed", 1);
    ec.base_seed = ec.disturbance.seed;

    const std::string kind = cfg.get_string("setpoint.kind", "step");
    if (kind == "constant") {
        ec.profile.kind = SetpointProfile::Kind::constant;
    } else if (kind == "step") {
        ec.profile.kind = SetpointProfile::Kind::step;
    } else if (kind == "square") {
        ec.profile.kind = SetpointProfile::Kind::square;
    } else {
        throw ConfigError("setpoint.kind must be constant, step or square");
    }
    ec.profile.level_a = cfg.get_double("setpoint.a", 0.3);
    ec.profile.level_b = cfg.get_double("setpoint.b", 0.6);
    ec.profile.t_switch = cfg.get_double("setpoint.t_switch", 2.0);
    ec.profile.period = cfg.get_double("setpoint.period", 2.0);

    ec.trials_per_method = cfg.get_int("batch.trials", 16);
    if (ec.trials_per_method < 1) {
        throw ConfigError("batch.trials must be >= 1");
    }
    constexpr std::array<double, 4> default_winds = {1.0, 2.0, 3.0, 4.0};
    ec.wind_levels = cfg.get_list("batch.wind_levels", default_winds);
    ec.max_nonconverged_frac = cfg.get_double("limits.max_nonconverged", 0.25);
    return ec;
}

// --- file output -------------------------------------------------------------

void write_trace_csv(const std::filesystem::path& path, const ClosedLoopResult& run) {
    static const std::vector<std::string> header = {"timestamp", "setpoint",    "estimate",
                                                    "command",   "true_thrust", "converged",
                                                    "iter",      "compute_us"};
    CsvWriter w(path, header);
    for (const auto& r : run.rows) {
        w.row(std::array<double, 8>{r.t, r.setpoint, r.estimate, r.command, r.true_thrust,
                                    r.converged ? 1.0 : 0.0, static_cast<double>(r.iterations),
                                    r.compute_us});
    }
    w.close();
}

void write_summary_csv(const std::filesystem::path& path, const BatchSummary& summary) {
    std::ofstream out(path.string() + ".tmp", std::ios::trunc);
    if (!out) {
        throw DataError("cannot write '" + path.string() + ".tmp'");
    }
    out << "method,metric,axis,mean,median,stddev\n";
    const auto emit = [&](const MethodSummary& ms, const char* metric, const char* axis,
                          const Aggregate& a) {
        out << ms.method << ',' << metric << ',' << axis << ',' << format_num(a.mean) << ','
            << format_num(a.median) << ',' << format_num(a.stddev) << "\n";
    };
    for (const MethodSummary* ms : {&summary.thrust_control, &summary.static_map}) {
        emit(*ms, "rmse", "thrust", ms->rmse_estimate);
        emit(*ms, "rmse", "true_thrust", ms->rmse_true);
        emit(*ms, "consumed_mah", "-", ms->consumed_mah);
    }
    out.flush();
    if (!out) {
        throw DataError("write failed: '" + path.string() + ".tmp'");
    }
    out.close();
    std::filesystem::rename(path.string() + ".tmp", path);
}

void write_trial_traces(const std::filesystem::path& out_dir,
                        const std::vector<TrialResult>& results) {
    for (const auto& r : results) {
        const std::string name = std::string("trial_") + method_name(r.spec.method) + "_" +
                                 std::to_string(r.spec.index) + ".csv";
        write_trace_csv(out_dir / name, r.run);
    }
}

} // namespace rotor
