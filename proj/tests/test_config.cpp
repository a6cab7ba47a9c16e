#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "config.hpp"

using namespace fishmpc;
using nlohmann::json;
namespace fs = std::filesystem;

TEST_CASE("defaults describe the 90-day three-controller comparison") {
    const ExperimentConfig cfg = default_config();
    CHECK_NOTHROW(cfg.validate());
    CHECK(cfg.duration_days == 90);
    CHECK(cfg.controllers.size() == 3);
    CHECK(cfg.growth.T_opt == 33.0);
    CHECK(cfg.growth.R_frac == 0.1);
    CHECK(cfg.economic.P_f == 0.4);
    CHECK(cfg.horizon.N == 3);
    CHECK(cfg.horizon.N_o == 3);
    CHECK(cfg.tracking.lambda == 0.1);
    CHECK(cfg.seed == 1);
    CHECK(!cfg.noise.enabled);
}

TEST_CASE("config survives a json round trip unchanged") {
    const ExperimentConfig cfg = default_config();
    const json j = config_to_json(cfg);
    const ExperimentConfig back = config_from_json(j);
    CHECK(config_to_json(back) == j);
}

TEST_CASE("modified fields survive the round trip") {
    ExperimentConfig cfg = default_config();
    cfg.growth.T_opt = 31.0;
    cfg.duration_days = 30;
    cfg.controllers = {Controller::mpc2};
    cfg.noise.enabled = true;
    cfg.noise.snr_db = 35.0;
    const ExperimentConfig back = config_from_json(config_to_json(cfg));
    CHECK(back.growth.T_opt == 31.0);
    CHECK(back.duration_days == 30);
    REQUIRE(back.controllers.size() == 1);
    CHECK(back.controllers[0] == Controller::mpc2);
    CHECK(back.noise.enabled);
    CHECK(back.noise.snr_db == 35.0);
}

TEST_CASE("unknown keys and malformed values are rejected with context") {
    CHECK_THROWS_WITH_AS(config_from_json(json{{"growht", json::object()}}),
                         doctest::Contains("growht"), Error);
    CHECK_THROWS_WITH_AS(config_from_json(json{{"growth", {{"T_optt", 33.0}}}}),
                         doctest::Contains("T_optt"), Error);
    CHECK_THROWS_AS(config_from_json(json{{"growth", {{"T_opt", "warm"}}}}), Error);
    CHECK_THROWS_AS(config_from_json(json::array()), Error);
}

TEST_CASE("file loading reports missing files and bad json") {
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), Error);
    const fs::path bad = fs::temp_directory_path() / "bad_config.json";
    std::ofstream(bad) << "{ not json";
    CHECK_THROWS_AS(load_config(bad.string()), Error);
    fs::remove(bad);

    const fs::path good = fs::temp_directory_path() / "good_config.json";
    std::ofstream(good) << R"({"experiment": {"duration_days": 30, "seed": 7}})";
    const ExperimentConfig cfg = load_config(good.string());
    CHECK(cfg.duration_days == 30);
    CHECK(cfg.seed == 7);
    CHECK(cfg.growth.T_opt == 33.0);  // unmentioned sections keep defaults
    fs::remove(good);
}

TEST_CASE("dotted keys address any field in the json layout") {
    ExperimentConfig cfg = default_config();
    set_config_key(cfg, "growth.T_opt", "31.5");
    CHECK(cfg.growth.T_opt == 31.5);
    set_config_key(cfg, "experiment.seed", "42");
    CHECK(cfg.seed == 42);
    set_config_key(cfg, "experiment.controllers", "mpc1,mpc3");
    REQUIRE(cfg.controllers.size() == 2);
    CHECK(cfg.controllers[1] == Controller::mpc3);
    set_config_key(cfg, "bounds.lower.DO", "0.5");
    CHECK(cfg.bounds.lower.DO == 0.5);
    set_config_key(cfg, "experiment.sweep_horizons", "2,4");
    REQUIRE(cfg.sweep_horizons.size() == 2);
    CHECK(cfg.sweep_horizons[1] == 4);
    set_config_key(cfg, "experiment.out_dir", "elsewhere");
    CHECK(cfg.out_dir == "elsewhere");
    CHECK_THROWS_AS(set_config_key(cfg, "growth.T_optt", "33"), Error);
    CHECK_THROWS_AS(set_config_key(cfg, "nosuchsection.x", "1"), Error);
    CHECK_THROWS_AS(set_config_key(cfg, "growth", "33"), Error);
}

TEST_CASE("environment variables override individual fields") {
    ExperimentConfig cfg = default_config();
    setenv("FISHMPC_GROWTH_T_OPT", "32.5", 1);
    setenv("FISHMPC_EXPERIMENT_SEED", "11", 1);
    setenv("FISHMPC_NOISE_SNR_DB", "40", 1);
    apply_env_overrides(cfg);
    unsetenv("FISHMPC_GROWTH_T_OPT");
    unsetenv("FISHMPC_EXPERIMENT_SEED");
    unsetenv("FISHMPC_NOISE_SNR_DB");
    CHECK(cfg.growth.T_opt == 32.5);
    CHECK(cfg.seed == 11);
    CHECK(cfg.noise.snr_db == 40.0);

    setenv("FISHMPC_GROWTH_NO_SUCH_FIELD", "1", 1);
    ExperimentConfig cfg2 = default_config();
    CHECK_THROWS_AS(apply_env_overrides(cfg2), Error);
    unsetenv("FISHMPC_GROWTH_NO_SUCH_FIELD");
}

TEST_CASE("validation rejects inconsistent experiment setups") {
    ExperimentConfig cfg = default_config();
    cfg.duration_days = 0;
    CHECK_THROWS_AS(cfg.validate(), Error);

    cfg = default_config();
    cfg.horizon.epsilon = 0.7;  // 90 days is not a whole number of periods
    cfg.sim.epsilon = 0.7;
    CHECK_THROWS_AS(cfg.validate(), Error);

    cfg = default_config();
    cfg.sim.epsilon = 0.5;  // disagrees with the horizon sampling period
    CHECK_THROWS_AS(cfg.validate(), Error);

    cfg = default_config();
    cfg.controllers.clear();
    CHECK_THROWS_AS(cfg.validate(), Error);

    cfg = default_config();
    cfg.noise_runs = 0;
    CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("controller names round trip") {
    for (Controller c : {Controller::mpc1, Controller::mpc2, Controller::mpc3})
        CHECK(controller_from_name(controller_name(c)) == c);
    CHECK_THROWS_AS(controller_from_name("mpc9"), Error);
}
