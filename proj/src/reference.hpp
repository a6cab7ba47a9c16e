#pragma once
#include <string>
#include <vector>

#include "growth_model.hpp"

namespace fishmpc {

// Desired live-weight curve w_d(t), piecewise-linear between daily samples.
struct ReferenceTrajectory {
    std::vector<double> t;    // days, strictly increasing
    std::vector<double> w_d;  // g, positive

    void validate() const;
};

// Rolls the growth model forward under constant nominal inputs and samples daily.
ReferenceTrajectory generate_nominal_reference(double w0, int duration_days,
                                               const ControlInput& u_nominal,
                                               const SimConfig& cfg, const GrowthParams& p);

// Two-column CSV (t_days, w_d_g), header row optional.
ReferenceTrajectory load_reference(const std::string& path);

// Linear interpolation, clamped to endpoint values outside the sampled range.
double sample_reference(const ReferenceTrajectory& r, double t_days);

} // namespace fishmpc
