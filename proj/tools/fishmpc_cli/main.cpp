// Command-line front end. Talks to the library exclusively through the C API
// so it doubles as a smoke test of the shared-library boundary.
#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fishmpc/fishmpc.h"

namespace {

struct ConfigDeleter {
  void operator()(fishmpc_config* c) const { fishmpc_config_free(c); }
};
using ConfigPtr = std::unique_ptr<fishmpc_config, ConfigDeleter>;

int fail(int status) {
  std::fprintf(stderr, "fishmpc: %s error: %s\n", fishmpc_status_name(status),
               fishmpc_last_error());
  return status;
}

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::string controllers;
  std::int64_t seed = -1;
  int workers = -1;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config_path, "JSON config file")
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", o.out_dir, "output directory (default from config)");
  cmd->add_option("--controllers", o.controllers,
                  "comma list from mpc1,mpc2,mpc3");
  cmd->add_option("--seed", o.seed, "base RNG seed");
  cmd->add_option("--workers", o.workers,
                  "worker threads (0 = hardware concurrency)");
}

// Builds the effective config: file (or defaults), then environment
// overrides, then flags. Returns nullptr after printing the error.
ConfigPtr make_config(const CommonOpts& o, int& status) {
  ConfigPtr cfg(o.config_path.empty()
                    ? fishmpc_config_default()
                    : fishmpc_config_from_file(o.config_path.c_str()));
  if (!cfg) {
    status = o.config_path.empty() ? FISHMPC_ERR_INVALID : FISHMPC_ERR_CONFIG;
    return nullptr;
  }
  status = fishmpc_config_apply_env(cfg.get());
  if (status != FISHMPC_OK) return nullptr;
  if (o.seed >= 0) {
    status = fishmpc_config_set(cfg.get(), "experiment.seed",
                                std::to_string(o.seed).c_str());
    if (status != FISHMPC_OK) return nullptr;
  }
  if (o.workers >= 0) {
    status = fishmpc_config_set(cfg.get(), "experiment.workers",
                                std::to_string(o.workers).c_str());
    if (status != FISHMPC_OK) return nullptr;
  }
  if (!o.controllers.empty()) {
    status = fishmpc_config_set(cfg.get(), "experiment.controllers",
                                o.controllers.c_str());
    if (status != FISHMPC_OK) return nullptr;
  }
  status = FISHMPC_OK;
  return cfg;
}

const char* out_arg(const CommonOpts& o) {
  return o.out_dir.empty() ? nullptr : o.out_dir.c_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Closed-loop growth control studies for aquaculture ponds"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(fishmpc_version()));

  CommonOpts run_opts;
  auto* run = app.add_subcommand(
      "run", "simulate the configured controllers and write the comparison");
  add_common(run, run_opts);

  CommonOpts sweep_opts;
  std::vector<int> horizons;
  auto* sweep = app.add_subcommand(
      "sweep", "repeat the comparison across prediction horizon lengths");
  add_common(sweep, sweep_opts);
  sweep->add_option("--horizons", horizons,
                    "horizon lengths in days (default from config)")
      ->delimiter(',');

  CommonOpts noise_opts;
  double snr_db = 50.0;
  std::vector<std::uint64_t> seeds;
  auto* noise = app.add_subcommand(
      "noise", "compare clean and actuator-noise runs across seeds");
  add_common(noise, noise_opts);
  noise->add_option("--snr-db", snr_db, "actuator signal-to-noise ratio in dB");
  noise->add_option("--seeds", seeds, "explicit seed list (default seed..seed+runs-1)")
      ->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  int status = FISHMPC_OK;
  if (run->parsed()) {
    ConfigPtr cfg = make_config(run_opts, status);
    if (!cfg) return fail(status);
    status = fishmpc_run(cfg.get(), out_arg(run_opts));
  } else if (sweep->parsed()) {
    ConfigPtr cfg = make_config(sweep_opts, status);
    if (!cfg) return fail(status);
    status = fishmpc_sweep(cfg.get(), horizons.empty() ? nullptr : horizons.data(),
                           horizons.size(), out_arg(sweep_opts));
  } else if (noise->parsed()) {
    ConfigPtr cfg = make_config(noise_opts, status);
    if (!cfg) return fail(status);
    status = fishmpc_noise(cfg.get(), snr_db, seeds.empty() ? nullptr : seeds.data(),
                           seeds.size(), out_arg(noise_opts));
  }
  if (status != FISHMPC_OK) return fail(status);
  return 0;
}
