#include "reference.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace fishmpc {

void ReferenceTrajectory::validate() const {
    if (t.size() != w_d.size()) throw_config("reference: time/weight column length mismatch");
    if (t.size() < 2) throw_config("reference: need at least 2 samples");
    for (size_t i = 0; i < t.size(); ++i) {
        if (!(w_d[i] > 0.0)) throw_config("reference: w_d must be positive at every sample");
        if (i > 0 && !(t[i] > t[i - 1])) throw_config("reference: t must be strictly increasing");
    }
}

ReferenceTrajectory generate_nominal_reference(double w0, int duration_days,
                                               const ControlInput& u_nominal,
                                               const SimConfig& cfg, const GrowthParams& p) {
    if (duration_days < 1) throw_config("reference: duration must be >= 1 day");
    if (!(u_nominal.f > 0.0)) throw_config("reference: nominal feeding rate must be positive, the reference must grow");
    SimConfig daily = cfg;
    daily.epsilon = 1.0;
    std::vector<ControlInput> schedule(static_cast<size_t>(duration_days), u_nominal);
    const auto states = simulate(w0, schedule, daily, p);
    ReferenceTrajectory r;
    r.t.reserve(states.size());
    r.w_d.reserve(states.size());
    for (const auto& s : states) {
        r.t.push_back(s.t);
        r.w_d.push_back(s.w);
    }
    r.validate();
    return r;
}

ReferenceTrajectory load_reference(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw_io("reference: cannot open " + path);
    ReferenceTrajectory r;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double t = 0.0, w = 0.0;
        if (!(row >> t >> w)) {
            if (lineno == 1) continue;  // header row
            std::ostringstream os;
            os << "reference: parse error in " << path << " line " << lineno;
            throw_config(os.str());
        }
        r.t.push_back(t);
        r.w_d.push_back(w);
    }
    r.validate();
    return r;
}

double sample_reference(const ReferenceTrajectory& r, double t_days) {
    const auto& t = r.t;
    if (t_days <= t.front()) return r.w_d.front();
    if (t_days >= t.back()) return r.w_d.back();
    const auto hi = std::upper_bound(t.begin(), t.end(), t_days);
    const size_t i = static_cast<size_t>(hi - t.begin());
    const double u = (t_days - t[i - 1]) / (t[i] - t[i - 1]);
    return r.w_d[i - 1] + u * (r.w_d[i] - r.w_d[i - 1]);
}

} // namespace fishmpc
