#include "mpc.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace fishmpc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

// --- small dense linear algebra for the quasi-Newton update (3N <= ~30) ---

struct Matrix {
    int n = 0;
    std::vector<double> a;  // row-major n*n

    explicit Matrix(int dim) : n(dim), a(static_cast<size_t>(dim) * dim, 0.0) {
        for (int i = 0; i < dim; ++i) at(i, i) = 1.0;
    }
    double& at(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
    double at(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }

    std::vector<double> mul(const std::vector<double>& x) const {
        std::vector<double> y(static_cast<size_t>(n), 0.0);
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int j = 0; j < n; ++j) s += at(i, j) * x[static_cast<size_t>(j)];
            y[static_cast<size_t>(i)] = s;
        }
        return y;
    }
    void reset_identity() {
        std::fill(a.begin(), a.end(), 0.0);
        for (int i = 0; i < n; ++i) at(i, i) = 1.0;
    }
};

double dot(const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

// BFGS inverse-Hessian update: H <- (I - r s y')H(I - r y s') + r s s'.
void bfgs_update(Matrix& H, const std::vector<double>& s, const std::vector<double>& y) {
    const double sy = dot(s, y);
    if (!(sy > 1e-12)) return;  // curvature too weak, keep H
    const double r = 1.0 / sy;
    const int n = H.n;
    const std::vector<double> Hy = H.mul(y);
    const double yHy = dot(y, Hy);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            H.at(i, j) += r * ((1.0 + r * yHy) * s[static_cast<size_t>(i)] * s[static_cast<size_t>(j)]
                               - Hy[static_cast<size_t>(i)] * s[static_cast<size_t>(j)]
                               - s[static_cast<size_t>(i)] * Hy[static_cast<size_t>(j)]);
}

std::vector<double> project_unit(std::vector<double> z) {
    for (double& v : z) v = std::clamp(v, 0.0, 1.0);
    return z;
}

struct PqnOutcome {
    std::vector<double> z;
    double cost = kInf;
    int iterations = 0;
    bool converged = false;
};

// Projected BFGS with central finite differences on [0,1]^n.
template <typename F>
PqnOutcome minimize_projected(const F& objective, std::vector<double> z0, int max_iter) {
    constexpr double fd_step = 1e-6;
    constexpr double grad_tol = 1e-6;
    constexpr double rel_decrease_tol = 1e-8;
    constexpr double armijo = 1e-4;

    const int n = static_cast<int>(z0.size());
    auto gradient = [&](const std::vector<double>& z) {
        std::vector<double> g(static_cast<size_t>(n), 0.0);
        std::vector<double> zp = z;
        for (int i = 0; i < n; ++i) {
            const double zi = z[static_cast<size_t>(i)];
            zp[static_cast<size_t>(i)] = zi + fd_step;
            const double fp = objective(zp);
            zp[static_cast<size_t>(i)] = zi - fd_step;
            const double fm = objective(zp);
            zp[static_cast<size_t>(i)] = zi;
            g[static_cast<size_t>(i)] = (fp - fm) / (2.0 * fd_step);
        }
        return g;
    };
    auto projected_gradient_norm = [&](const std::vector<double>& z, const std::vector<double>& g) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
            const double moved = std::clamp(z[static_cast<size_t>(i)] - g[static_cast<size_t>(i)], 0.0, 1.0);
            const double d = moved - z[static_cast<size_t>(i)];
            s += d * d;
        }
        return std::sqrt(s);
    };

    PqnOutcome out;
    out.z = project_unit(std::move(z0));
    out.cost = objective(out.z);
    if (!std::isfinite(out.cost)) return out;

    Matrix H(n);
    std::vector<double> g = gradient(out.z);

    for (int iter = 0; iter < max_iter; ++iter) {
        ++out.iterations;
        if (projected_gradient_norm(out.z, g) < grad_tol) {
            out.converged = true;
            break;
        }

        std::vector<double> d = H.mul(g);
        for (double& v : d) v = -v;
        if (dot(d, g) >= 0.0) {  // not a descent direction, reset to steepest
            H.reset_identity();
            d = g;
            for (double& v : d) v = -v;
        }

        bool accepted = false;
        std::vector<double> zn;
        double fn = kInf;
        for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
            double alpha = 1.0;
            for (int ls = 0; ls < 40; ++ls, alpha *= 0.5) {
                std::vector<double> trial = out.z;
                for (int i = 0; i < n; ++i) trial[static_cast<size_t>(i)] += alpha * d[static_cast<size_t>(i)];
                trial = project_unit(std::move(trial));
                const double ft = objective(trial);
                if (!std::isfinite(ft)) continue;
                std::vector<double> moved(static_cast<size_t>(n));
                for (int i = 0; i < n; ++i)
                    moved[static_cast<size_t>(i)] = trial[static_cast<size_t>(i)] - out.z[static_cast<size_t>(i)];
                const double slope = dot(g, moved);
                const double threshold = out.cost + armijo * std::min(slope, 0.0);
                if (ft <= threshold && ft < out.cost) {
                    zn = std::move(trial);
                    fn = ft;
                    accepted = true;
                    break;
                }
            }
            if (!accepted && attempt == 0) {  // quasi-Newton direction failed, steepest descent once
                H.reset_identity();
                d = g;
                for (double& v : d) v = -v;
            }
        }
        if (!accepted) break;  // stationary within line-search resolution

        std::vector<double> gn = gradient(zn);
        std::vector<double> s(static_cast<size_t>(n)), y(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) {
            s[static_cast<size_t>(i)] = zn[static_cast<size_t>(i)] - out.z[static_cast<size_t>(i)];
            y[static_cast<size_t>(i)] = gn[static_cast<size_t>(i)] - g[static_cast<size_t>(i)];
        }
        const double rel_decrease = (out.cost - fn) / std::max(1.0, std::abs(out.cost));
        out.z = std::move(zn);
        out.cost = fn;
        g = std::move(gn);
        bfgs_update(H, s, y);
        if (rel_decrease < rel_decrease_tol) {
            out.converged = true;
            break;
        }
    }
    return out;
}

std::vector<double> plan_to_unit(const ControlPlan& plan, const ControlBounds& b) {
    auto unit = [](double x, double lo, double hi) { return hi > lo ? (x - lo) / (hi - lo) : 0.0; };
    std::vector<double> z;
    z.reserve(plan.actions.size() * 3);
    for (const auto& u : plan.actions) {
        z.push_back(unit(u.f, b.lower.f, b.upper.f));
        z.push_back(unit(u.T, b.lower.T, b.upper.T));
        z.push_back(unit(u.DO, b.lower.DO, b.upper.DO));
    }
    return z;
}

ControlPlan unit_to_plan(const std::vector<double>& z, const ControlBounds& b) {
    ControlPlan plan;
    plan.actions.resize(z.size() / 3);
    for (size_t k = 0; k < plan.actions.size(); ++k) {
        plan.actions[k].f = b.lower.f + z[3 * k] * (b.upper.f - b.lower.f);
        plan.actions[k].T = b.lower.T + z[3 * k + 1] * (b.upper.T - b.lower.T);
        plan.actions[k].DO = b.lower.DO + z[3 * k + 2] * (b.upper.DO - b.lower.DO);
    }
    return plan;
}

} // namespace

void HorizonConfig::validate() const {
    if (N < 1) throw_config("horizon: N must be >= 1");
    if (N_o < 0) throw_config("horizon: N_o must be >= 0");
    if (!(epsilon > 0.0)) throw_config("horizon: epsilon must be positive");
}

void NoiseConfig::validate() const {
    if (enabled && !(snr_db > 0.0)) throw_config("noise: snr_db must be positive when enabled");
}

double NoiseStats::stddev() const {
    if (count < 2) return 0.0;
    const double mean = sum / static_cast<double>(count);
    const double var = sum_sq / static_cast<double>(count) - mean * mean;
    return var > 0.0 ? std::sqrt(var) : 0.0;
}

std::vector<FishState> predict(const FishState& s_k, const ControlPlan& plan,
                               const SimConfig& cfg, const GrowthParams& p) {
    std::vector<FishState> states;
    states.reserve(plan.actions.size() + 1);
    states.push_back(s_k);
    for (const auto& u : plan.actions) states.push_back(step(states.back(), u, cfg, p));
    return states;
}

double horizon_cost(const std::vector<FishState>& predicted, const ReferenceTrajectory& ref,
                    const ControlPlan& plan, const StageCost& stage,
                    const TerminalCostParams& term, double epsilon) {
    if (predicted.size() != plan.actions.size() + 1)
        throw_invalid("horizon_cost: predicted states must be plan length + 1");
    double total = 0.0;
    for (size_t k = 0; k < plan.actions.size(); ++k) {
        StageInput in;
        in.w_pred = predicted[k].w;
        in.w_ref = sample_reference(ref, predicted[k].t);
        in.u = plan.actions[k];
        in.delta_w = predicted[k + 1].w - predicted[k].w;
        const double l = stage(in);
        if (!std::isfinite(l)) return kInf;
        total += l * epsilon;
    }
    const auto& last = predicted.back();
    total += terminal_cost(last.w, sample_reference(ref, last.t), term);
    return std::isfinite(total) ? total : kInf;
}

OcpResult solve_ocp(const FishState& s_k, const ReferenceTrajectory& ref, const StageCost& stage,
                    const TerminalCostParams& term, const ControlBounds& bounds,
                    const ControlPlan& warm, const HorizonConfig& hz, const SimConfig& cfg,
                    const GrowthParams& p) {
    constexpr int max_iterations = 500;
    if (static_cast<int>(warm.actions.size()) != hz.N)
        throw_invalid("solve_ocp: warm-start plan length must equal N");
    for (const auto& u : warm.actions)
        if (!bounds.contains(u)) throw_invalid("solve_ocp: warm-start plan violates bounds");

    auto objective = [&](const std::vector<double>& z) {
        const ControlPlan plan = unit_to_plan(z, bounds);
        try {
            return horizon_cost(predict(s_k, plan, cfg, p), ref, plan, stage, term, hz.epsilon);
        } catch (const Error&) {
            return kInf;
        }
    };

    const std::vector<double> z_warm = plan_to_unit(warm, bounds);
    const double warm_cost = objective(z_warm);
    if (!std::isfinite(warm_cost)) throw_solver("solve_ocp: non-finite cost at warm start");

    PqnOutcome best = minimize_projected(objective, z_warm, max_iterations);
    PqnOutcome mid = minimize_projected(objective,
                                        std::vector<double>(static_cast<size_t>(3 * hz.N), 0.5),
                                        max_iterations);
    const int total_iterations = best.iterations + mid.iterations;
    if (mid.cost < best.cost) best = std::move(mid);

    OcpResult result;
    result.iterations = total_iterations;
    if (best.cost <= warm_cost) {
        result.plan = unit_to_plan(best.z, bounds);
        result.cost = best.cost;
        result.converged = best.converged;
    } else {  // keep the warm start, the contract forbids regressions
        result.plan = warm;
        result.cost = warm_cost;
        result.converged = false;
    }
    return result;
}

ControlPlan shift_warm_start(const ControlPlan& prev) {
    ControlPlan next = prev;
    if (next.actions.size() > 1) {
        next.actions.erase(next.actions.begin());
        next.actions.push_back(next.actions.back());
    }
    return next;
}

ClosedLoopResult run_closed_loop(double w0, int duration_days, const ControllerSpec& controller,
                                 const ControlBounds& bounds, const NoiseConfig& noise,
                                 const ReferenceTrajectory& ref, const HorizonConfig& hz,
                                 const SimConfig& cfg, const GrowthParams& p) {
    hz.validate();
    cfg.validate();
    noise.validate();
    bounds.validate();
    const double steps_real = duration_days / hz.epsilon;
    const int steps = static_cast<int>(std::llround(steps_real));
    if (steps < 1 || std::abs(steps_real - steps) > 1e-9)
        throw_config("closed loop: duration must be a whole multiple of epsilon");

    const double t_start = now_seconds();
    ClosedLoopResult out;
    out.states.reserve(static_cast<size_t>(steps) + 1);
    out.states.push_back({0.0, w0});

    ControlPlan warm;
    warm.actions.assign(static_cast<size_t>(hz.N),
                        ControlInput{0.5 * (bounds.lower.f + bounds.upper.f),
                                     0.5 * (bounds.lower.T + bounds.upper.T),
                                     0.5 * (bounds.lower.DO + bounds.upper.DO)});

    std::mt19937_64 rng(noise.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double noise_gain = std::pow(10.0, -noise.snr_db / 20.0);
    double cum_sq_f = 0.0, cum_sq_T = 0.0;
    long long cum_n = 0;

    const double h_sub = hz.epsilon / cfg.substeps;
    SimConfig sub_cfg = cfg;
    sub_cfg.epsilon = h_sub;
    sub_cfg.substeps = 1;

    for (int k = 0; k < steps; ++k) {
        const FishState& s_k = out.states.back();

        const double t0 = now_seconds();
        OcpResult ocp;
        try {
            ocp = solve_ocp(s_k, ref, controller.stage, controller.terminal, bounds, warm, hz, cfg, p);
        } catch (const Error& e) {
            std::ostringstream os;
            os << e.what() << " (closed-loop step " << k << ")";
            throw Error(e.status, os.str());
        }
        const double solve_s = now_seconds() - t0;

        const double warm_cost = horizon_cost(predict(s_k, warm, cfg, p), ref, warm,
                                              controller.stage, controller.terminal, hz.epsilon);
        if (ocp.cost > warm_cost + 1e-9 * std::max(1.0, std::abs(warm_cost))) {
            std::ostringstream os;
            os << "closed loop: solver regressed past the warm start at step " << k;
            throw_solver(os.str());
        }
        out.solver_stats.push_back({ocp.cost, warm_cost, ocp.iterations, ocp.converged, solve_s});
        out.solver_time += solve_s;

        const ControlInput u_cmd = ocp.plan.actions.front();
        out.commanded.push_back(u_cmd);

        // Per-channel noise std follows the RMS of everything commanded so far.
        cum_sq_f += u_cmd.f * u_cmd.f;
        cum_sq_T += u_cmd.T * u_cmd.T;
        ++cum_n;
        const double sigma_f = std::sqrt(cum_sq_f / static_cast<double>(cum_n)) * noise_gain;
        const double sigma_T = std::sqrt(cum_sq_T / static_cast<double>(cum_n)) * noise_gain;

        FishState s = s_k;
        double mean_f = 0.0, mean_T = 0.0;
        for (int i = 0; i < cfg.substeps; ++i) {
            ControlInput u_app = u_cmd;
            if (noise.enabled) {
                const double nf = gauss(rng) * sigma_f;
                const double nT = gauss(rng) * sigma_T;
                if (sigma_f > 0.0) out.noise_f.add(nf / sigma_f);
                if (sigma_T > 0.0) out.noise_T.add(nT / sigma_T);
                u_app.f += nf;
                u_app.T += nT;
                u_app = bounds.clamp(u_app);
            }
            mean_f += u_app.f;
            mean_T += u_app.T;
            s = step(s, u_app, sub_cfg, p);
            if (!std::isfinite(s.w)) {
                std::ostringstream os;
                os << "closed loop: non-finite state at step " << k;
                throw_solver(os.str());
            }
        }
        mean_f /= cfg.substeps;
        mean_T /= cfg.substeps;
        if (!noise.enabled) {  // keep clean runs bit-exact with the command
            mean_f = u_cmd.f;
            mean_T = u_cmd.T;
        }
        out.applied.push_back({mean_f, mean_T, u_cmd.DO});
        out.per_step_feed.push_back(daily_feed_mass(mean_f, s_k.w, p));
        out.states.push_back({s_k.t + hz.epsilon, s.w});

        warm = shift_warm_start(ocp.plan);
    }

    out.wall_time = now_seconds() - t_start;
    return out;
}

} // namespace fishmpc
