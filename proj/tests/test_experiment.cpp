#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "experiment.hpp"

using namespace fishmpc;
namespace fs = std::filesystem;

namespace {

// Short desk run so the whole file stays fast.
ExperimentConfig tiny_config(const std::string& out_name) {
    ExperimentConfig cfg = default_config();
    cfg.duration_days = 10;
    cfg.controllers = {Controller::mpc1};
    cfg.out_dir = (fs::temp_directory_path() / out_name).string();
    cfg.workers = 2;
    return cfg;
}

std::vector<std::string> read_lines(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

}  // namespace

TEST_CASE("decimal formatting is shortest and round-trip exact") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(20.0) == "20");
    CHECK(format_double(-3.5) == "-3.5");
    const std::vector<double> probes = {1.0 / 3.0, 2.2250738585072014e-308, 1e300,
                                        123456.789012345, 8.881711048406467e-07};
    for (double v : probes) {
        const std::string s = format_double(v);
        double back = 0.0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), back);
        REQUIRE(res.ec == std::errc());
        CHECK(back == v);
    }
}

TEST_CASE("controller factory wires each stage cost with the shared terminal") {
    const ExperimentConfig cfg = default_config();
    StageInput in;
    in.w_pred = 100.0;
    in.w_ref = 90.0;
    in.u = {0.5, 30.0, 2.0};
    in.delta_w = 1.2;
    const auto c1 = make_controller(cfg, Controller::mpc1);
    CHECK(c1.stage(in) ==
          stage_cost_tracking(in.w_pred, in.w_ref, in.u, cfg.tracking, cfg.bounds));
    const auto c2 = make_controller(cfg, Controller::mpc2);
    CHECK(c2.stage(in) == stage_cost_fcr(in.u.f, in.delta_w, cfg.fcr));
    const auto c3 = make_controller(cfg, Controller::mpc3);
    CHECK(c3.stage(in) == stage_cost_economic(in.w_pred, in.w_ref, in.u, cfg.economic));
    CHECK(c1.terminal.N_o == cfg.horizon.N_o);
    CHECK(c1.terminal.mode == TerminalCostParams::Mode::tracking);
}

TEST_CASE("reference builder honors the configured source") {
    ExperimentConfig cfg = default_config();
    cfg.duration_days = 5;
    const auto nominal = build_reference(cfg);
    REQUIRE(nominal.t.size() == 6);
    CHECK(nominal.w_d.front() == cfg.farm.w0);

    const fs::path csv = fs::temp_directory_path() / "ref_custom.csv";
    std::ofstream(csv) << "t_days,w_d_g\n0,20\n5,30\n";
    cfg.reference_source = csv.string();
    const auto loaded = build_reference(cfg);
    CHECK(loaded.t.size() == 2);
    CHECK(loaded.w_d.back() == 30.0);
    fs::remove(csv);
}

TEST_CASE("a comparison run writes consistent artifacts") {
    const ExperimentConfig cfg = tiny_config("fishmpc_test_run");
    const auto outcomes = run_experiment(cfg);
    REQUIRE(outcomes.size() == 1);
    const auto& oc = outcomes[0];
    CHECK(oc.controller == Controller::mpc1);
    CHECK(oc.horizon == 3);
    REQUIRE(oc.run.states.size() == 11);
    CHECK(oc.report.final_weight == oc.run.states.back().w);

    const fs::path dir = cfg.out_dir;
    const auto comparison = read_lines(dir / "comparison.csv");
    REQUIRE(comparison.size() == 2);
    CHECK(comparison[0] ==
          "controller,noise_db,horizon,mse,n_fish,final_weight_g,feed_g,elapsed_s,revenue,"
          "feed_cost,heating_cost,oxygenation_cost,profit,profit_pct,fcr");
    CHECK(comparison[1].substr(0, 5) == "mpc1,");

    const auto traj = read_lines(dir / "trajectory_mpc1.csv");
    REQUIRE(traj.size() == 12);  // header + duration+1 samples
    CHECK(traj[0] == "t_days,w_g,w_ref_g,f,T,DO,feed_g_day");
    // trajectory rows mirror the run record exactly
    std::istringstream first(traj[1]);
    std::string cell;
    std::getline(first, cell, ',');
    CHECK(cell == "0");
    std::getline(first, cell, ',');
    CHECK(cell == format_double(oc.run.states[0].w));

    std::ifstream report(dir / "report.json");
    REQUIRE(report.good());
    nlohmann::json doc;
    report >> doc;
    CHECK(doc.contains("config"));
    REQUIRE(doc.at("runs").size() == 1);
    CHECK(doc.at("runs")[0].at("controller") == "mpc1");
    CHECK(doc.at("runs")[0].at("final_weight_g").get<double>() ==
          doctest::Approx(oc.report.final_weight));
    fs::remove_all(dir);
}

TEST_CASE("repeated runs of the same config produce identical artifacts") {
    ExperimentConfig a = tiny_config("fishmpc_det_a");
    ExperimentConfig b = tiny_config("fishmpc_det_b");
    run_experiment(a);
    run_experiment(b);
    const auto ta = read_lines(fs::path(a.out_dir) / "trajectory_mpc1.csv");
    const auto tb = read_lines(fs::path(b.out_dir) / "trajectory_mpc1.csv");
    CHECK(ta == tb);
    fs::remove_all(a.out_dir);
    fs::remove_all(b.out_dir);
}

TEST_CASE("horizon sweep emits one row per controller and horizon") {
    ExperimentConfig cfg = tiny_config("fishmpc_test_sweep");
    cfg.controllers = {Controller::mpc1, Controller::mpc3};
    cfg.sweep_repeats = 2;
    const auto rows = horizon_sweep(cfg, {1, 2});
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].controller == Controller::mpc1);
    CHECK(rows[0].N == 1);
    CHECK(rows[1].N == 2);
    CHECK(rows[2].controller == Controller::mpc3);
    for (const auto& r : rows) CHECK(r.elapsed_s >= 0.0);
    const auto lines = read_lines(fs::path(cfg.out_dir) / "sweep.csv");
    CHECK(lines[0] == "controller,N,mse,feed_g,elapsed_s");
    REQUIRE(lines.size() == 5);
    fs::remove_all(cfg.out_dir);
}

TEST_CASE("noise study pairs clean and noisy runs per seed") {
    ExperimentConfig cfg = tiny_config("fishmpc_test_noise");
    cfg.duration_days = 20;
    const auto rows = noise_comparison(cfg, 50.0, {5, 6});
    REQUIRE(rows.size() == 6);  // (no_noise, noise, delta) x 2 seeds
    CHECK(rows[0].condition == "no_noise");
    CHECK(rows[1].condition == "noise");
    CHECK(rows[2].condition == "delta");
    // clean baseline is seed-independent
    CHECK(rows[0].mse == rows[3].mse);
    // z-normalized noise spread is near one (loose at this sample count)
    CHECK(rows[1].noise_z_std_f == doctest::Approx(1.0).epsilon(0.2));
    CHECK(rows[1].noise_z_std_T == doctest::Approx(1.0).epsilon(0.2));
    CHECK(rows[2].mse == doctest::Approx(rows[1].mse - rows[0].mse).epsilon(1e-12));
    const auto lines = read_lines(fs::path(cfg.out_dir) / "noise.csv");
    CHECK(lines[0] ==
          "controller,seed,condition,mse,final_weight_g,feed_g,revenue,profit,profit_pct,fcr,"
          "noise_z_std_f,noise_z_std_T");
    REQUIRE(lines.size() == 7);
    fs::remove_all(cfg.out_dir);
}

TEST_CASE("experiment failures surface as typed errors") {
    ExperimentConfig cfg = tiny_config("fishmpc_test_bad");
    cfg.reference_source = "/nonexistent/ref.csv";
    CHECK_THROWS_AS(run_experiment(cfg), Error);
    cfg = tiny_config("fishmpc_test_bad2");
    cfg.duration_days = -3;
    CHECK_THROWS_AS(run_experiment(cfg), Error);
}
