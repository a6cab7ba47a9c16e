#pragma once
#include <functional>

#include "growth_model.hpp"

namespace fishmpc {

struct TrackingCostParams {
    double lambda = 0.1;  // input-penalty weight on bounds-scaled controls
};

struct FcrCostParams {
    double delta_w_floor = 1e-3;  // g; keeps the feed/gain ratio finite
    // Floor on the feed rate as well. Without it the ratio collapses to zero
    // at u1=0 even while the fish shrinks, making starvation the cheapest
    // plan; flooring both sides prices a non-growing step at >= 1 per day,
    // which is above the cost of any growing plan.
    double u1_floor = 1e-3;
};

// Pricing and plant constants for the economic stage cost and the cost ledger.
struct EconomicCostParams {
    double alpha = 100.0;   // tracking regularization weight
    double P_s = 1.2;       // USD/kg fish selling price
    double P_f = 0.4;       // USD/kg feed price
    double beta1 = 0.1;     // heater duty regularizer
    double beta2 = 0.1;     // air-pump duty regularizer
    double P_e = 0.14;      // USD/kWh electricity
    double c_p = 4.2;       // kJ/(kg*degC) specific heat of water
    double L = 454.0;       // liters tank volume
    double m_w = 1.0;       // kg water per liter
    double P_max = 0.102;   // kW air-pump rating
    double T_amb = 24.0;    // degC ambient water temperature
    double DO_ref = 8.0;    // mg/l aeration normalization level

    void validate() const;
};

struct TerminalCostParams {
    enum class Mode { off, tracking };
    int N_o = 3;                  // terminal horizon length
    Mode mode = Mode::tracking;
};

// What a stage cost gets to see at one sampling instant of the prediction.
struct StageInput {
    double w_pred;    // g, predicted weight at the instant
    double w_ref;     // g, reference weight at the same instant
    ControlInput u;   // plan action held over the period
    double delta_w;   // g, predicted gain over the period (ratio costs)
};

// Non-negative per-unit-time penalty; summed by rectangle quadrature.
using StageCost = std::function<double(const StageInput&)>;

// Percent-relative tracking error squared plus lambda * ||u||^2 with u scaled
// componentwise to [0,1] via bounds. Measuring the error in percent keeps the
// tracking term dominant over the input penalty at realistic error sizes; on
// the raw relative scale the penalty would tolerate errors of tens of percent.
double stage_cost_tracking(double w_pred, double w_ref, const ControlInput& u,
                           const TrackingCostParams& params, const ControlBounds& bounds);

// Feed-to-gain ratio for the current period, with both sides floored.
double stage_cost_fcr(double u1, double delta_w_step, const FcrCostParams& params);

// Squared daily dollar terms: revenue shortfall, feeding at the feed price,
// heating energy above ambient, and aeration duty.
double stage_cost_economic(double w_pred, double w_ref, const ControlInput& u,
                           const EconomicCostParams& params);

// Relative quadratic error at the horizon end, weighted by N_o; or disabled.
double terminal_cost(double w_term, double w_ref_term, const TerminalCostParams& params);

// StageCost adapters over the functions above.
StageCost make_tracking_stage(const TrackingCostParams& params, const ControlBounds& bounds);
StageCost make_fcr_stage(const FcrCostParams& params);
StageCost make_economic_stage(const EconomicCostParams& params);

} // namespace fishmpc
