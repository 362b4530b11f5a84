#pragma once

// Experiment harness: paired closed-loop trial matrices (thrust control vs
// the static thrust-to-speed map) over seeds x wind levels, with aggregate
// statistics. Trials are independent, so the parallel runner distributes
// them with OpenMP; the serial runner is the reference and must produce
// bit-identical results.

#include <filesystem>
#include <string>
#include <vector>

#include "rotor/config.hpp"
#include "rotor/sim.hpp"
#include "rotor/stats.hpp"

namespace rotor {

struct ExperimentConfig {
    MotorPlant plant;
    AeroCoefficients coef;
    DisturbanceProfile disturbance; // wind mean replaced per trial
    SetpointProfile profile;
    ClosedLoopOptions loop;
    std::vector<double> wind_levels{1.0, 2.0, 3.0, 4.0};
    int trials_per_method = 16;
    std::uint64_t base_seed = 1;
    double max_nonconverged_frac = 0.25; // beyond this a run is a numerical failure
};

struct TrialSpec {
    int index = 0;
    ControlMethod method = ControlMethod::thrust_control;
    std::uint64_t seed = 0;
    double wind_mean = 0.0;
};

struct TrialResult {
    TrialSpec spec;
    double rmse_estimate = 0.0; // rmse(setpoint, estimated relative thrust)
    double rmse_true = 0.0;     // rmse(setpoint, true relative thrust)
    double consumed_mah = 0.0;
    double nonconverged_frac = 0.0;
    ClosedLoopResult run;
};

std::vector<TrialSpec> make_trial_list(const ExperimentConfig& cfg);
TrialResult run_trial(const ExperimentConfig& cfg, const TrialSpec& spec);

std::vector<TrialResult> run_trials_serial(const ExperimentConfig& cfg);
// jobs <= 0 means the OpenMP default.
std::vector<TrialResult> run_trials_parallel(const ExperimentConfig& cfg, int jobs = 0);

struct MethodSummary {
    std::string method;
    Aggregate rmse_estimate;
    Aggregate rmse_true;
    Aggregate consumed_mah;
    int trials = 0;
};

struct BatchSummary {
    MethodSummary thrust_control;
    MethodSummary static_map;
};

BatchSummary summarize(const std::vector<TrialResult>& results);

const char* method_name(ControlMethod m);

// --- configuration assembly -------------------------------------------------

// Platform presets: plant radius/KV plus the fitted thrust scale and gains.
void apply_preset(Config& cfg, const std::string& preset);

ExperimentConfig experiment_from_config(const Config& cfg);

// --- file output -------------------------------------------------------------

void write_trace_csv(const std::filesystem::path& path, const ClosedLoopResult& run);
void write_summary_csv(const std::filesystem::path& path, const BatchSummary& summary);
void write_trial_traces(const std::filesystem::path& out_dir,
                        const std::vector<TrialResult>& results);

} // namespace rotor
