#pragma once
#include <cstdint>
#include <vector>

#include "cost_functions.hpp"
#include "reference.hpp"

namespace fishmpc {

struct HorizonConfig {
    int N = 3;             // prediction horizon, sampling periods
    int N_o = 3;           // terminal-cost horizon length
    double epsilon = 1.0;  // days per sampling period

    void validate() const;
};

struct ControlPlan {
    std::vector<ControlInput> actions;  // one per sampling period
};

struct OcpResult {
    ControlPlan plan;
    double cost = 0.0;
    int iterations = 0;
    bool converged = false;
};

struct NoiseConfig {
    bool enabled = false;
    double snr_db = 50.0;   // actuator signal-to-noise ratio
    std::uint64_t seed = 0;

    void validate() const;
};

// Running tally of injected noise draws normalized by the std in force when
// each was drawn; std of the tally should sit near 1 when calibrated.
struct NoiseStats {
    long long count = 0;
    double sum = 0.0;
    double sum_sq = 0.0;

    void add(double z) { ++count; sum += z; sum_sq += z * z; }
    double stddev() const;
};

struct SolverStats {
    double cost = 0.0;
    double warm_cost = 0.0;  // objective at the shifted warm start
    int iterations = 0;
    bool converged = false;
    double solve_seconds = 0.0;
};

struct ClosedLoopResult {
    std::vector<FishState> states;             // duration/epsilon + 1 entries
    std::vector<ControlInput> commanded;       // per step, pre-noise
    std::vector<ControlInput> applied;         // per step, substep mean post-noise
    std::vector<double> per_step_feed;         // g/day, from applied feeding rate
    std::vector<SolverStats> solver_stats;
    double wall_time = 0.0;                    // s, whole loop
    double solver_time = 0.0;                  // s, solve calls only
    NoiseStats noise_f, noise_T;
};

// Stage cost plus terminal-cost configuration selects the controller.
struct ControllerSpec {
    StageCost stage;
    TerminalCostParams terminal;
};

// Open-loop rollout from the measured state; noise never enters prediction.
std::vector<FishState> predict(const FishState& s_k, const ControlPlan& plan,
                               const SimConfig& cfg, const GrowthParams& p);

// Left-endpoint rectangle quadrature of the stage cost plus the terminal cost.
// Non-finite stage values propagate as +infinity for the optimizer to reject.
double horizon_cost(const std::vector<FishState>& predicted, const ReferenceTrajectory& ref,
                    const ControlPlan& plan, const StageCost& stage,
                    const TerminalCostParams& term, double epsilon);

// Projected quasi-Newton over the 3N flattened plan, inputs scaled to [0,1]
// per channel. Runs from the warm start and from mid-bounds and keeps the
// better local solution; the returned cost never exceeds the warm start's.
// Restarting matters: the anabolism term is multiplicative in f and sigma(DO),
// so the all-lower-bounds corner is a stationary point that a single gradient
// descent cannot leave once a shifted plan lands there.
OcpResult solve_ocp(const FishState& s_k, const ReferenceTrajectory& ref, const StageCost& stage,
                    const TerminalCostParams& term, const ControlBounds& bounds,
                    const ControlPlan& warm, const HorizonConfig& hz, const SimConfig& cfg,
                    const GrowthParams& p);

// Drop the first action, duplicate the last.
ControlPlan shift_warm_start(const ControlPlan& prev);

// Receding-horizon loop: solve, apply the first action with optional actuator
// noise on f and T per integration substep, integrate one period, repeat.
ClosedLoopResult run_closed_loop(double w0, int duration_days, const ControllerSpec& controller,
                                 const ControlBounds& bounds, const NoiseConfig& noise,
                                 const ReferenceTrajectory& ref, const HorizonConfig& hz,
                                 const SimConfig& cfg, const GrowthParams& p);

} // namespace fishmpc
