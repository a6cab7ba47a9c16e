#include "economics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fishmpc {

void FarmConfig::validate() const {
    if (n_fish < 1) throw_config("farm: n_fish must be >= 1");
    if (!(w0 > 0.0)) throw_config("farm: w0 must be positive");
}

double compute_fcr(double total_feed_kg, double final_kg, double initial_kg) {
    const double gain = final_kg - initial_kg;
    if (!(gain > 0.0)) throw Error(Status::invalid, "fcr undefined: no positive weight gain");
    return total_feed_kg / gain;
}

double compute_revenue(int n_fish, double final_w_kg, double P_s) {
    return n_fish * final_w_kg * P_s;
}

CostLedger compute_cost_ledger(const ClosedLoopResult& run, const FarmConfig& farm,
                               const EconomicCostParams& econ) {
    CostLedger ledger;
    if (run.states.empty()) return ledger;

    const double days_per_step = run.states.size() > 1 ? run.states[1].t - run.states[0].t : 1.0;
    double feed_g = 0.0;
    for (double r : run.per_step_feed) feed_g += r * days_per_step;
    ledger.feed_cost = econ.P_f * (feed_g / 1000.0) * farm.n_fish;

    for (const auto& u : run.applied) {
        const double lift = std::max(u.T - econ.T_amb, 0.0);
        ledger.heating_cost += econ.P_e * econ.c_p * econ.L * econ.m_w * lift / 3600.0 * days_per_step;
        const double duty = std::clamp(u.DO / econ.DO_ref, 0.0, 1.0);
        ledger.oxygenation_cost += 24.0 * econ.P_e * econ.P_max * duty * days_per_step;
    }

    ledger.revenue = compute_revenue(farm.n_fish, run.states.back().w / 1000.0, econ.P_s);
    ledger.total_costs = ledger.feed_cost + ledger.heating_cost + ledger.oxygenation_cost;
    if (ledger.total_costs > 0.0) {
        const auto [profit, pct] = profit_and_percentage(ledger.revenue, ledger.total_costs);
        ledger.profit = profit;
        ledger.profit_percentage = pct;
    } else {
        ledger.profit = ledger.revenue;
    }
    return ledger;
}

std::pair<double, double> profit_and_percentage(double revenue, double total_costs) {
    if (!(total_costs > 0.0)) throw Error(Status::invalid, "profit percentage undefined at zero cost");
    const double profit = revenue - total_costs;
    return {profit, 100.0 * profit / total_costs};
}

double tracking_mse(const std::vector<FishState>& states, const ReferenceTrajectory& ref, MseMode mode) {
    if (states.empty()) throw_invalid("tracking_mse: need at least one state");
    double acc = 0.0;
    for (const auto& s : states) {
        const double w_d = sample_reference(ref, s.t);
        if (mode == MseMode::relative) {
            if (!(w_d > 0.0)) throw_invalid("tracking_mse: reference must be positive in relative mode");
            const double e = (s.w - w_d) / w_d;
            acc += 100.0 * e * e;
        } else {
            const double e = s.w - w_d;
            acc += e * e;
        }
    }
    return acc / static_cast<double>(states.size());
}

PerformanceReport summarize_run(const ClosedLoopResult& run, const ReferenceTrajectory& ref,
                                const FarmConfig& farm, const EconomicCostParams& econ) {
    PerformanceReport rep;
    rep.tracking_mse = tracking_mse(run.states, ref, MseMode::relative);
    rep.final_weight = run.states.back().w;
    const double days_per_step = run.states.size() > 1 ? run.states[1].t - run.states[0].t : 1.0;
    rep.total_feed = std::accumulate(run.per_step_feed.begin(), run.per_step_feed.end(), 0.0) * days_per_step;
    const double gain_kg = (rep.final_weight - run.states.front().w) / 1000.0;
    if (gain_kg > 0.0) rep.fcr = compute_fcr(rep.total_feed / 1000.0, rep.final_weight / 1000.0,
                                             run.states.front().w / 1000.0);
    rep.ledger = compute_cost_ledger(run, farm, econ);
    rep.elapsed = run.solver_time;
    return rep;
}

} // namespace fishmpc
