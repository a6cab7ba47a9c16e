#include "growth_model.hpp"

#include <cmath>
#include <sstream>

namespace fishmpc {

namespace {

bool finite(double x) { return std::isfinite(x); }

[[noreturn]] void bad_param(const std::string& what) {
    throw_config("growth params: " + what);
}

} // namespace

void GrowthParams::validate() const {
    if (!(T_min < T_opt && T_opt < T_max)) bad_param("need T_min < T_opt < T_max");
    if (!(UIA_crit < UIA_max)) bad_param("need UIA_crit < UIA_max");
    if (!(DO_min < DO_crit)) bad_param("need DO_min < DO_crit");
    if (!(m_exp > 0.0 && m_exp < 1.0)) bad_param("m_exp outside (0,1)");
    if (!(n_exp > 0.0 && n_exp < 1.0)) bad_param("n_exp outside (0,1)");
    if (!(b_assim > 0.0 && b_assim < 1.0)) bad_param("b_assim outside (0,1)");
    if (!(a_frac > 0.0 && a_frac < 1.0)) bad_param("a_frac outside (0,1)");
    if (!(h_coef > 0.0)) bad_param("h_coef must be positive");
    if (!(k_min > 0.0)) bad_param("k_min must be positive");
    if (!(j_coef > 0.0)) bad_param("j_coef must be positive");
    if (!(rho > 0.0 && rho < 2.0)) bad_param("rho outside (0,2)");
    if (!(R_frac > 0.0 && R_frac <= 1.0)) bad_param("R_frac outside (0,1]");
}

void ControlBounds::validate() const {
    if (!(lower.f <= upper.f && lower.T <= upper.T && lower.DO <= upper.DO))
        throw_config("control bounds: lower must not exceed upper in any channel");
}

bool ControlBounds::contains(const ControlInput& u) const {
    return u.f >= lower.f && u.f <= upper.f && u.T >= lower.T && u.T <= upper.T &&
           u.DO >= lower.DO && u.DO <= upper.DO;
}

ControlInput ControlBounds::clamp(const ControlInput& u) const {
    auto clip = [](double x, double lo, double hi) { return x < lo ? lo : (x > hi ? hi : x); };
    return {clip(u.f, lower.f, upper.f), clip(u.T, lower.T, upper.T), clip(u.DO, lower.DO, upper.DO)};
}

void SimConfig::validate() const {
    if (!(epsilon > 0.0)) throw_config("sim config: epsilon must be positive");
    if (substeps < 1) throw_config("sim config: substeps must be >= 1");
    if (!(uia >= 0.0)) throw_config("sim config: uia must be non-negative");
}

double temperature_factor(double T, const GrowthParams& p) {
    if (!finite(T)) throw_invalid("temperature_factor: non-finite T");
    if (T == p.T_opt) return 1.0;
    const double ratio = T > p.T_opt ? (T - p.T_opt) / (p.T_max - p.T_opt)
                                     : (p.T_opt - T) / (p.T_opt - p.T_min);
    const double r2 = ratio * ratio;
    return std::exp(-p.kappa * r2 * r2);
}

double ammonia_factor(double uia, const GrowthParams& p) {
    if (!finite(uia) || uia < 0.0) throw_invalid("ammonia_factor: UIA must be finite and >= 0");
    if (uia < p.UIA_crit) return 1.0;
    if (uia >= p.UIA_max) return 0.0;
    return (p.UIA_max - uia) / (p.UIA_max - p.UIA_crit);
}

double oxygen_factor(double dissolved_oxygen, const GrowthParams& p) {
    if (!finite(dissolved_oxygen) || dissolved_oxygen < 0.0)
        throw_invalid("oxygen_factor: DO must be finite and >= 0");
    if (dissolved_oxygen > p.DO_crit) return 1.0;
    if (dissolved_oxygen <= p.DO_min) return 0.0;
    return (dissolved_oxygen - p.DO_min) / (p.DO_crit - p.DO_min);
}

double anabolism_coefficient(const ControlInput& u, const GrowthParams& p) {
    return p.h_coef * p.rho * u.f * p.b_assim * (1.0 - p.a_frac) *
           temperature_factor(u.T, p) * oxygen_factor(u.DO, p);
}

double catabolism_coefficient(double T, const GrowthParams& p) {
    if (!finite(T)) throw_invalid("catabolism_coefficient: non-finite T");
    return p.k_min * std::exp(p.j_coef * (T - p.T_min));
}

double growth_rate(const FishState& s, const ControlInput& u, double uia, const GrowthParams& p) {
    if (!std::isfinite(s.w) || !std::isfinite(u.f) || !std::isfinite(u.T) || !std::isfinite(u.DO))
        throw_invalid("growth_rate: non-finite input");
    const double w = s.w > 0.0 ? s.w : 0.0;
    return anabolism_coefficient(u, p) * ammonia_factor(uia, p) * std::pow(w, p.m_exp) -
           catabolism_coefficient(u.T, p) * std::pow(w, p.n_exp);
}

FishState step(const FishState& s, const ControlInput& u, const SimConfig& cfg, const GrowthParams& p) {
    const double h = cfg.epsilon / cfg.substeps;
    double w = s.w;
    double t = s.t;
    for (int i = 0; i < cfg.substeps; ++i) {
        const double k1 = growth_rate({t, w}, u, cfg.uia, p);
        const double k2 = growth_rate({t + 0.5 * h, w + 0.5 * h * k1}, u, cfg.uia, p);
        const double k3 = growth_rate({t + 0.5 * h, w + 0.5 * h * k2}, u, cfg.uia, p);
        const double k4 = growth_rate({t + h, w + h * k3}, u, cfg.uia, p);
        w += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (w < 0.0) w = 0.0;
        t += h;
        if (!finite(w)) {
            std::ostringstream os;
            os << "step: non-finite weight at t=" << t;
            throw_invalid(os.str());
        }
    }
    return {s.t + cfg.epsilon, w};
}

std::vector<FishState> simulate(double w0, const std::vector<ControlInput>& schedule,
                                const SimConfig& cfg, const GrowthParams& p) {
    if (schedule.empty()) throw_invalid("simulate: empty control schedule");
    if (!(w0 > 0.0)) throw_invalid("simulate: w0 must be positive");
    std::vector<FishState> states;
    states.reserve(schedule.size() + 1);
    states.push_back({0.0, w0});
    for (const auto& u : schedule) states.push_back(step(states.back(), u, cfg, p));
    return states;
}

double daily_feed_mass(double f, double w, const GrowthParams& p) {
    return f * p.R_frac * w;
}

} // namespace fishmpc
