#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "economics.hpp"

namespace fishmpc {

enum class Controller { mpc1, mpc2, mpc3 };

std::string controller_name(Controller c);
Controller controller_from_name(const std::string& name);

// Everything a harness invocation needs; defaults run the 90-day desk
// comparison with all three controllers and no noise.
struct ExperimentConfig {
    GrowthParams growth;
    EconomicCostParams economic;
    TrackingCostParams tracking;
    FcrCostParams fcr;
    TerminalCostParams terminal;
    HorizonConfig horizon;
    ControlBounds bounds;
    SimConfig sim;
    FarmConfig farm;
    NoiseConfig noise;

    std::vector<Controller> controllers{Controller::mpc1, Controller::mpc2, Controller::mpc3};
    int duration_days = 90;
    std::string reference_source = "nominal";     // "nominal" or a CSV path
    ControlInput u_nominal{0.5, 33.0, 2.0};       // plan the reference is grown from
    std::string out_dir = "out";
    std::uint64_t seed = 1;
    int workers = 0;                              // 0 = hardware concurrency
    int noise_runs = 5;                           // seeds per controller, noise study
    std::vector<int> sweep_horizons{1, 2, 3, 5, 7, 10};
    int sweep_repeats = 3;                        // repeats behind the wall-time medians

    void validate() const;
};

ExperimentConfig default_config();
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

// Dotted path into the JSON layout, e.g. "growth.T_opt" or "experiment.seed".
// Values parse as JSON scalars/arrays; comma lists become arrays.
void set_config_key(ExperimentConfig& cfg, const std::string& dotted_key, const std::string& value);

// FISHMPC_<SECTION>_<FIELD> environment variables override config keys,
// e.g. FISHMPC_GROWTH_T_OPT=34 or FISHMPC_EXPERIMENT_SEED=7.
void apply_env_overrides(ExperimentConfig& cfg);

} // namespace fishmpc
