#pragma once
#include <vector>

#include "errors.hpp"

namespace fishmpc {

// Bioenergetic constants for Nile tilapia. Growth is the difference between
// anabolism, fed by the ration and damped by water quality, and temperature-
// driven fasting catabolism.
struct GrowthParams {
    double m_exp = 0.67;      // anabolism weight exponent
    double n_exp = 0.81;      // catabolism weight exponent
    double b_assim = 0.62;    // food assimilation efficiency
    double a_frac = 0.53;     // fraction of assimilated food lost to metabolism
    double h_coef = 0.8;      // food consumption coefficient, g^(1-m)/day
    double k_min = 0.00133;   // fasting catabolism floor, g^(1-n)/day
    double j_coef = 0.0132;   // catabolism temperature slope, 1/degC
    double kappa = 4.6;       // temperature response shape constant
    double rho = 1.0;         // photoperiod factor, in (0,2)
    double T_opt = 33.0;      // degC
    double T_min = 24.0;      // degC
    double T_max = 40.0;      // degC
    double UIA_crit = 0.06;   // mg/l, onset of ammonia stress
    double UIA_max = 1.4;     // mg/l, feeding stops entirely
    double DO_min = 0.3;      // mg/l, anabolism shuts off at or below
    double DO_crit = 1.0;     // mg/l, no oxygen limitation above
    double R_frac = 0.1;      // maximal daily ration as fraction of body weight

    void validate() const;    // throws Error(Status::config) on violated invariant
};

// Manipulated inputs: relative feeding rate, water temperature, dissolved oxygen.
struct ControlInput {
    double f = 0.0;   // dimensionless, in [0,1]
    double T = 0.0;   // degC
    double DO = 0.0;  // mg/l
};

// Admissible box for the control channels. Temperature spans the survivable
// range; the oxygen ceiling is a freshwater-saturation proxy.
struct ControlBounds {
    ControlInput lower{0.0, 24.0, 0.3};
    ControlInput upper{1.0, 40.0, 8.0};

    void validate() const;
    bool contains(const ControlInput& u) const;
    ControlInput clamp(const ControlInput& u) const;
};

struct FishState {
    double t = 0.0;  // days since simulation start
    double w = 0.0;  // g live weight
};

struct SimConfig {
    double epsilon = 1.0;  // days per sampling period
    int substeps = 24;     // RK4 substeps per sampling period
    double uia = 0.05;     // mg/l ambient un-ionized ammonia, held constant

    void validate() const;
};

// Piecewise environmental limiting factors, each mapping into [0,1].
double temperature_factor(double T, const GrowthParams& p);
double ammonia_factor(double uia, const GrowthParams& p);
double oxygen_factor(double dissolved_oxygen, const GrowthParams& p);

// Psi(f,T,DO) = h*rho*f*b*(1-a)*tau(T)*sigma(DO), g^(1-m)/day.
double anabolism_coefficient(const ControlInput& u, const GrowthParams& p);

// k(T) = k_min*exp(j*(T - T_min)), g^(1-n)/day.
double catabolism_coefficient(double T, const GrowthParams& p);

// dw/dt = Psi*v(UIA)*w^m - k(T)*w^n, g/day. Negative weights are treated as 0
// so fractional powers stay real during integrator stage evaluations.
double growth_rate(const FishState& s, const ControlInput& u, double uia, const GrowthParams& p);

// One sampling period of classical RK4 with cfg.substeps substeps; weight is
// clamped at 0 from below after every substep.
FishState step(const FishState& s, const ControlInput& u, const SimConfig& cfg, const GrowthParams& p);

// Rollout under a piecewise-constant schedule; returns schedule.size()+1 states,
// state[0] = (0, w0).
std::vector<FishState> simulate(double w0, const std::vector<ControlInput>& schedule,
                                const SimConfig& cfg, const GrowthParams& p);

// Daily ration r = f * R_frac * w in g/day.
double daily_feed_mass(double f, double w, const GrowthParams& p);

} // namespace fishmpc
