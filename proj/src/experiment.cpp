#include "experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace fishmpc {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Run a batch of independent jobs on a small pool; results land by index so
// scheduling never reorders output.
void run_parallel(int workers, int n_jobs, const std::function<void(int)>& job) {
    if (n_jobs <= 0) return;
    int pool = workers > 0 ? workers : static_cast<int>(std::thread::hardware_concurrency());
    if (pool < 1) pool = 1;
    pool = std::min(pool, n_jobs);
    if (pool == 1) {
        for (int i = 0; i < n_jobs; ++i) job(i);
        return;
    }
    std::atomic<int> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;
    auto worker = [&] {
        for (int i = next.fetch_add(1); i < n_jobs; i = next.fetch_add(1)) {
            try {
                job(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> threads;
    threads.reserve(static_cast<size_t>(pool));
    for (int i = 0; i < pool; ++i) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

void write_text_atomic(const fs::path& path, const std::string& content) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw_io("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out.flush()) throw_io("short write to " + tmp.string());
    }
    fs::rename(tmp, path, ec);
    if (ec) throw_io("cannot move " + tmp.string() + " into place: " + ec.message());
}

std::string csv_field(double v) { return format_double(v); }

json run_to_json(const RunOutcome& r) {
    const auto& rep = r.report;
    json j{{"controller", controller_name(r.controller)},
           {"noise_db", r.noise_db},
           {"horizon", r.horizon},
           {"seed", r.seed},
           {"mse", rep.tracking_mse},
           {"final_weight_g", rep.final_weight},
           {"feed_g", rep.total_feed},
           {"elapsed_s", rep.elapsed},
           {"revenue", rep.ledger.revenue},
           {"feed_cost", rep.ledger.feed_cost},
           {"heating_cost", rep.ledger.heating_cost},
           {"oxygenation_cost", rep.ledger.oxygenation_cost},
           {"profit", rep.ledger.profit},
           {"profit_pct", rep.ledger.profit_percentage}};
    if (rep.fcr) j["fcr"] = *rep.fcr; else j["fcr"] = nullptr;
    int converged = 0;
    for (const auto& s : r.run.solver_stats) converged += s.converged ? 1 : 0;
    j["solver"] = {{"steps", r.run.solver_stats.size()},
                   {"converged_steps", converged},
                   {"descent_held", true}};
    if (r.noise_db > 0.0)
        j["noise_calibration"] = {{"z_std_f", r.run.noise_f.stddev()},
                                  {"z_std_T", r.run.noise_T.stddev()}};
    return j;
}

} // namespace

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc()) throw_invalid("format_double failed");
    return std::string(buf, ptr);
}

ControllerSpec make_controller(const ExperimentConfig& cfg, Controller which) {
    ControllerSpec spec;
    spec.terminal = cfg.terminal;
    spec.terminal.N_o = cfg.horizon.N_o;
    switch (which) {
        case Controller::mpc1: spec.stage = make_tracking_stage(cfg.tracking, cfg.bounds); break;
        case Controller::mpc2: spec.stage = make_fcr_stage(cfg.fcr); break;
        case Controller::mpc3: spec.stage = make_economic_stage(cfg.economic); break;
    }
    return spec;
}

ReferenceTrajectory build_reference(const ExperimentConfig& cfg) {
    if (cfg.reference_source == "nominal")
        return generate_nominal_reference(cfg.farm.w0, cfg.duration_days, cfg.u_nominal,
                                          cfg.sim, cfg.growth);
    return load_reference(cfg.reference_source);
}

RunOutcome execute_run(const ExperimentConfig& cfg, Controller which, const NoiseConfig& noise,
                       const ReferenceTrajectory& ref) {
    RunOutcome out;
    out.controller = which;
    out.noise_db = noise.enabled ? noise.snr_db : 0.0;
    out.horizon = cfg.horizon.N;
    out.seed = noise.seed;
    const ControllerSpec spec = make_controller(cfg, which);
    out.run = run_closed_loop(cfg.farm.w0, cfg.duration_days, spec, cfg.bounds, noise, ref,
                              cfg.horizon, cfg.sim, cfg.growth);
    out.report = summarize_run(out.run, ref, cfg.farm, cfg.economic);
    return out;
}

std::vector<RunOutcome> run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const ReferenceTrajectory ref = build_reference(cfg);

    std::vector<RunOutcome> outcomes(cfg.controllers.size());
    run_parallel(cfg.workers, static_cast<int>(cfg.controllers.size()), [&](int i) {
        NoiseConfig noise = cfg.noise;
        noise.seed = cfg.seed + static_cast<std::uint64_t>(i);
        outcomes[static_cast<size_t>(i)] = execute_run(cfg, cfg.controllers[static_cast<size_t>(i)], noise, ref);
    });

    // comparison.csv in the published column order
    std::ostringstream cmp;
    cmp << "controller,noise_db,horizon,mse,n_fish,final_weight_g,feed_g,elapsed_s,"
           "revenue,feed_cost,heating_cost,oxygenation_cost,profit,profit_pct,fcr\n";
    for (const auto& r : outcomes) {
        const auto& rep = r.report;
        cmp << controller_name(r.controller) << ',' << csv_field(r.noise_db) << ',' << r.horizon
            << ',' << csv_field(rep.tracking_mse) << ',' << cfg.farm.n_fish << ','
            << csv_field(rep.final_weight) << ',' << csv_field(rep.total_feed) << ','
            << csv_field(rep.elapsed) << ',' << csv_field(rep.ledger.revenue) << ','
            << csv_field(rep.ledger.feed_cost) << ',' << csv_field(rep.ledger.heating_cost) << ','
            << csv_field(rep.ledger.oxygenation_cost) << ',' << csv_field(rep.ledger.profit) << ','
            << csv_field(rep.ledger.profit_percentage) << ','
            << (rep.fcr ? csv_field(*rep.fcr) : "") << '\n';
    }
    const fs::path out_dir(cfg.out_dir);
    write_text_atomic(out_dir / "comparison.csv", cmp.str());

    for (const auto& r : outcomes) {
        std::ostringstream tr;
        tr << "t_days,w_g,w_ref_g,f,T,DO,feed_g_day\n";
        const auto& run = r.run;
        const size_t steps = run.applied.size();
        for (size_t k = 0; k <= steps; ++k) {
            const auto& s = run.states[k];
            const size_t ku = k < steps ? k : steps - 1;  // final row holds last period's inputs
            tr << csv_field(s.t) << ',' << csv_field(s.w) << ','
               << csv_field(sample_reference(ref, s.t)) << ','
               << csv_field(run.applied[ku].f) << ',' << csv_field(run.applied[ku].T) << ','
               << csv_field(run.applied[ku].DO) << ',' << csv_field(run.per_step_feed[ku]) << '\n';
        }
        write_text_atomic(out_dir / ("trajectory_" + controller_name(r.controller) + ".csv"), tr.str());
    }

    json report{{"config", config_to_json(cfg)}, {"runs", json::array()}};
    for (const auto& r : outcomes) report["runs"].push_back(run_to_json(r));
    write_text_atomic(out_dir / "report.json", report.dump(2) + "\n");

    return outcomes;
}

std::vector<SweepRow> horizon_sweep(const ExperimentConfig& cfg, const std::vector<int>& horizons) {
    cfg.validate();
    for (int n : horizons)
        if (n < 1) throw_config("sweep: horizons must be >= 1");
    const ReferenceTrajectory ref = build_reference(cfg);

    struct Cell { Controller c; int N; int repeat; };
    std::vector<Cell> cells;
    for (Controller c : cfg.controllers)
        for (int N : horizons)
            for (int rep = 0; rep < cfg.sweep_repeats; ++rep) cells.push_back({c, N, rep});

    std::vector<RunOutcome> runs(cells.size());
    run_parallel(cfg.workers, static_cast<int>(cells.size()), [&](int i) {
        const Cell& cell = cells[static_cast<size_t>(i)];
        ExperimentConfig local = cfg;
        local.horizon.N = cell.N;
        local.horizon.N_o = cell.N;  // terminal horizon follows the prediction horizon
        NoiseConfig noise = cfg.noise;
        noise.seed = cfg.seed + static_cast<std::uint64_t>(i);
        runs[static_cast<size_t>(i)] = execute_run(local, cell.c, noise, ref);
    });

    std::vector<SweepRow> rows;
    for (size_t base = 0; base < cells.size(); base += static_cast<size_t>(cfg.sweep_repeats)) {
        std::vector<double> elapsed;
        for (int rep = 0; rep < cfg.sweep_repeats; ++rep)
            elapsed.push_back(runs[base + static_cast<size_t>(rep)].report.elapsed);
        std::sort(elapsed.begin(), elapsed.end());
        const double median = elapsed[elapsed.size() / 2];
        const RunOutcome& first = runs[base];
        rows.push_back({cells[base].c, cells[base].N, first.report.tracking_mse,
                        first.report.total_feed, median});
    }

    std::ostringstream sw;
    sw << "controller,N,mse,feed_g,elapsed_s\n";
    for (const auto& row : rows)
        sw << controller_name(row.controller) << ',' << row.N << ',' << csv_field(row.mse) << ','
           << csv_field(row.feed_g) << ',' << csv_field(row.elapsed_s) << '\n';
    write_text_atomic(fs::path(cfg.out_dir) / "sweep.csv", sw.str());
    return rows;
}

std::vector<NoiseRow> noise_comparison(const ExperimentConfig& cfg, double snr_db,
                                       const std::vector<std::uint64_t>& seeds) {
    cfg.validate();
    if (!(snr_db > 0.0)) throw_config("noise study: snr_db must be positive");
    if (seeds.empty()) throw_config("noise study: need at least one seed");
    const ReferenceTrajectory ref = build_reference(cfg);

    struct Job { Controller c; std::uint64_t seed; bool noisy; };
    std::vector<Job> jobs;
    for (Controller c : cfg.controllers)
        for (std::uint64_t seed : seeds)
            for (bool noisy : {false, true}) jobs.push_back({c, seed, noisy});

    std::vector<RunOutcome> runs(jobs.size());
    run_parallel(cfg.workers, static_cast<int>(jobs.size()), [&](int i) {
        const Job& job = jobs[static_cast<size_t>(i)];
        NoiseConfig noise;
        noise.enabled = job.noisy;
        noise.snr_db = snr_db;
        noise.seed = job.seed;
        runs[static_cast<size_t>(i)] = execute_run(cfg, job.c, noise, ref);
    });

    auto to_row = [](const RunOutcome& r, const std::string& condition) {
        NoiseRow row;
        row.controller = r.controller;
        row.seed = r.seed;
        row.condition = condition;
        row.mse = r.report.tracking_mse;
        row.final_weight_g = r.report.final_weight;
        row.feed_g = r.report.total_feed;
        row.revenue = r.report.ledger.revenue;
        row.profit = r.report.ledger.profit;
        row.profit_pct = r.report.ledger.profit_percentage;
        row.fcr = r.report.fcr.value_or(0.0);
        row.noise_z_std_f = r.run.noise_f.stddev();
        row.noise_z_std_T = r.run.noise_T.stddev();
        return row;
    };

    std::vector<NoiseRow> rows;
    for (size_t i = 0; i < jobs.size(); i += 2) {
        const NoiseRow clean = to_row(runs[i], "no_noise");
        const NoiseRow noisy = to_row(runs[i + 1], "noise");
        NoiseRow delta = noisy;
        delta.condition = "delta";
        delta.mse -= clean.mse;
        delta.final_weight_g -= clean.final_weight_g;
        delta.feed_g -= clean.feed_g;
        delta.revenue -= clean.revenue;
        delta.profit -= clean.profit;
        delta.profit_pct -= clean.profit_pct;
        delta.fcr -= clean.fcr;
        rows.push_back(clean);
        rows.push_back(noisy);
        rows.push_back(delta);
    }

    std::ostringstream ns;
    ns << "controller,seed,condition,mse,final_weight_g,feed_g,revenue,profit,profit_pct,fcr,"
          "noise_z_std_f,noise_z_std_T\n";
    for (const auto& row : rows)
        ns << controller_name(row.controller) << ',' << row.seed << ',' << row.condition << ','
           << csv_field(row.mse) << ',' << csv_field(row.final_weight_g) << ','
           << csv_field(row.feed_g) << ',' << csv_field(row.revenue) << ','
           << csv_field(row.profit) << ',' << csv_field(row.profit_pct) << ','
           << csv_field(row.fcr) << ',' << csv_field(row.noise_z_std_f) << ','
           << csv_field(row.noise_z_std_T) << '\n';
    write_text_atomic(fs::path(cfg.out_dir) / "noise.csv", ns.str());
    return rows;
}

} // namespace fishmpc
