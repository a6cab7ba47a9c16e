#include "cost_functions.hpp"

#include <algorithm>
#include <cmath>

namespace fishmpc {

void EconomicCostParams::validate() const {
    const double vals[] = {P_s, P_f, P_e, c_p, L, m_w, P_max, DO_ref};
    for (double v : vals)
        if (!(v > 0.0)) throw_config("economic params: prices and physical constants must be positive");
    if (!(alpha >= 0.0 && beta1 >= 0.0 && beta2 >= 0.0))
        throw_config("economic params: weights must be non-negative");
    if (!(T_amb >= 0.0)) throw_config("economic params: T_amb must be >= 0");
}

double stage_cost_tracking(double w_pred, double w_ref, const ControlInput& u,
                           const TrackingCostParams& params, const ControlBounds& bounds) {
    if (!(w_ref > 0.0)) throw_invalid("stage_cost_tracking: reference weight must be positive");
    const double err_pct = 100.0 * (w_pred - w_ref) / w_ref;
    auto unit = [](double x, double lo, double hi) { return hi > lo ? (x - lo) / (hi - lo) : 0.0; };
    const double uf = unit(u.f, bounds.lower.f, bounds.upper.f);
    const double uT = unit(u.T, bounds.lower.T, bounds.upper.T);
    const double uD = unit(u.DO, bounds.lower.DO, bounds.upper.DO);
    return err_pct * err_pct + params.lambda * (uf * uf + uT * uT + uD * uD);
}

double stage_cost_fcr(double u1, double delta_w_step, const FcrCostParams& params) {
    return std::max(u1, params.u1_floor) / std::max(delta_w_step, params.delta_w_floor);
}

double stage_cost_economic(double w_pred, double w_ref, const ControlInput& u,
                           const EconomicCostParams& params) {
    const double shortfall = params.P_s * (w_pred - w_ref) / 1000.0;  // USD vs plan
    const double feeding = params.P_f * u.f;                          // feed duty at feed price
    const double du2 = std::max(u.T - params.T_amb, 0.0);             // heating lift, degC
    const double heating = params.P_e * params.c_p * params.L * params.m_w * du2 / 3600.0;
    const double duty = std::clamp(u.DO / params.DO_ref, 0.0, 1.0);
    const double aeration = 24.0 * params.P_e * params.P_max * duty;
    return params.alpha * shortfall * shortfall + feeding * feeding +
           params.beta1 * heating * heating + params.beta2 * aeration * aeration;
}

double terminal_cost(double w_term, double w_ref_term, const TerminalCostParams& params) {
    if (params.mode == TerminalCostParams::Mode::off) return 0.0;
    if (!(w_ref_term > 0.0)) throw_invalid("terminal_cost: reference weight must be positive");
    const double rel = (w_term - w_ref_term) / w_ref_term;
    return params.N_o * rel * rel;
}

StageCost make_tracking_stage(const TrackingCostParams& params, const ControlBounds& bounds) {
    return [params, bounds](const StageInput& in) {
        return stage_cost_tracking(in.w_pred, in.w_ref, in.u, params, bounds);
    };
}

StageCost make_fcr_stage(const FcrCostParams& params) {
    return [params](const StageInput& in) { return stage_cost_fcr(in.u.f, in.delta_w, params); };
}

StageCost make_economic_stage(const EconomicCostParams& params) {
    return [params](const StageInput& in) {
        return stage_cost_economic(in.w_pred, in.w_ref, in.u, params);
    };
}

} // namespace fishmpc
