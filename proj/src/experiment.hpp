#pragma once
#include <string>
#include <vector>

#include "config.hpp"

namespace fishmpc {

// One completed closed-loop run with its metrics row.
struct RunOutcome {
    Controller controller;
    double noise_db = 0.0;  // 0 = noise disabled
    int horizon = 0;
    std::uint64_t seed = 0;
    PerformanceReport report;
    ClosedLoopResult run;
};

struct SweepRow {
    Controller controller;
    int N = 0;
    double mse = 0.0;
    double feed_g = 0.0;
    double elapsed_s = 0.0;  // median solver time over the configured repeats
};

// Paired noise-study rows; condition "delta" carries noisy minus clean metrics.
struct NoiseRow {
    Controller controller;
    std::uint64_t seed = 0;
    std::string condition;  // no_noise | noise | delta
    double mse = 0.0;
    double final_weight_g = 0.0;
    double feed_g = 0.0;
    double revenue = 0.0;
    double profit = 0.0;
    double profit_pct = 0.0;
    double fcr = 0.0;
    double noise_z_std_f = 0.0;  // measured injected noise / configured std
    double noise_z_std_T = 0.0;
};

ControllerSpec make_controller(const ExperimentConfig& cfg, Controller which);
ReferenceTrajectory build_reference(const ExperimentConfig& cfg);

// Single closed-loop run under the config's horizon with an explicit noise setup.
RunOutcome execute_run(const ExperimentConfig& cfg, Controller which, const NoiseConfig& noise,
                       const ReferenceTrajectory& ref);

// Comparison study: one run per selected controller. Writes comparison.csv,
// trajectory_<controller>.csv and report.json under cfg.out_dir.
std::vector<RunOutcome> run_experiment(const ExperimentConfig& cfg);

// Controller x horizon grid with repeats behind the wall-time medians; writes sweep.csv.
std::vector<SweepRow> horizon_sweep(const ExperimentConfig& cfg, const std::vector<int>& horizons);

// Clean/noisy pairs per seed at one SNR; writes noise.csv.
std::vector<NoiseRow> noise_comparison(const ExperimentConfig& cfg, double snr_db,
                                       const std::vector<std::uint64_t>& seeds);

// Shortest round-trip decimal formatting shared by all writers, so identical
// values always serialize to identical bytes.
std::string format_double(double v);

} // namespace fishmpc
