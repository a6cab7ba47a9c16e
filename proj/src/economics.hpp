#pragma once
#include <optional>

#include "mpc.hpp"

namespace fishmpc {

struct FarmConfig {
    int n_fish = 1000;  // population scales the per-fish simulation linearly
    double w0 = 20.0;   // g initial weight per fish

    void validate() const;
};

struct CostLedger {
    double revenue = 0.0;           // USD
    double feed_cost = 0.0;         // USD
    double heating_cost = 0.0;      // USD
    double oxygenation_cost = 0.0;  // USD
    double total_costs = 0.0;       // USD
    double profit = 0.0;            // USD
    double profit_percentage = 0.0; // percent of total costs
};

struct PerformanceReport {
    double tracking_mse = 0.0;
    std::optional<double> fcr;   // undefined when the fish did not gain weight
    double final_weight = 0.0;   // g
    double total_feed = 0.0;     // g per fish
    CostLedger ledger;
    double elapsed = 0.0;        // s, summed solver time
};

enum class MseMode { relative, absolute };

// Feed mass over weight gain, both kg; gain must be positive.
double compute_fcr(double total_feed_kg, double final_kg, double initial_kg);

double compute_revenue(int n_fish, double final_w_kg, double P_s);

// Tank-level accounting: feed scales with the population, heating and aeration
// are per-tank utilities.
CostLedger compute_cost_ledger(const ClosedLoopResult& run, const FarmConfig& farm,
                               const EconomicCostParams& econ);

std::pair<double, double> profit_and_percentage(double revenue, double total_costs);

// Relative mode: 100 x mean squared relative error; absolute: mean squared g error.
double tracking_mse(const std::vector<FishState>& states, const ReferenceTrajectory& ref,
                    MseMode mode = MseMode::relative);

PerformanceReport summarize_run(const ClosedLoopResult& run, const ReferenceTrajectory& ref,
                                const FarmConfig& farm, const EconomicCostParams& econ);

} // namespace fishmpc
