#include "fishmpc/fishmpc.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <vector>

#include "config.hpp"
#include "errors.hpp"
#include "experiment.hpp"
#include "growth_model.hpp"

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

int status_of(const std::exception& e) {
  if (const auto* err = dynamic_cast<const fishmpc::Error*>(&e))
    return static_cast<int>(err->status);
  return FISHMPC_ERR_INVALID;
}

// Runs fn, translating exceptions into status codes + the thread-local
// message. fn returns the success status (normally FISHMPC_OK).
template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    set_error(e.what());
    return status_of(e);
  } catch (...) {
    set_error("unknown error");
    return FISHMPC_ERR_INVALID;
  }
}

}  // namespace

struct fishmpc_config {
  fishmpc::ExperimentConfig cfg;
};

struct fishmpc_model {
  fishmpc::GrowthParams growth;
  fishmpc::SimConfig sim;
};

extern "C" {

const char* fishmpc_version(void) { return "0.1.0"; }

const char* fishmpc_last_error(void) { return g_last_error.c_str(); }

const char* fishmpc_status_name(int status) {
  switch (status) {
    case FISHMPC_OK: return "ok";
    case FISHMPC_ERR_INVALID: return "invalid";
    case FISHMPC_ERR_CONFIG: return "config";
    case FISHMPC_ERR_SOLVER: return "solver";
    case FISHMPC_ERR_IO: return "io";
    default: return "unknown";
  }
}

fishmpc_config* fishmpc_config_default(void) {
  try {
    return new fishmpc_config{fishmpc::default_config()};
  } catch (const std::exception& e) {
    set_error(e.what());
    return nullptr;
  }
}

fishmpc_config* fishmpc_config_from_file(const char* path) {
  if (!path) {
    set_error("config path is null");
    return nullptr;
  }
  try {
    return new fishmpc_config{fishmpc::load_config(path)};
  } catch (const std::exception& e) {
    set_error(e.what());
    return nullptr;
  }
}

int fishmpc_config_set(fishmpc_config* cfg, const char* key, const char* value) {
  if (!cfg || !key || !value) {
    set_error("null argument to fishmpc_config_set");
    return FISHMPC_ERR_INVALID;
  }
  return guarded([&] {
    fishmpc::set_config_key(cfg->cfg, key, value);
    return FISHMPC_OK;
  });
}

int fishmpc_config_apply_env(fishmpc_config* cfg) {
  if (!cfg) {
    set_error("null config handle");
    return FISHMPC_ERR_INVALID;
  }
  return guarded([&] {
    fishmpc::apply_env_overrides(cfg->cfg);
    return FISHMPC_OK;
  });
}

char* fishmpc_config_to_json(const fishmpc_config* cfg) {
  if (!cfg) {
    set_error("null config handle");
    return nullptr;
  }
  try {
    const std::string text = fishmpc::config_to_json(cfg->cfg).dump(2) + "\n";
    char* out = new char[text.size() + 1];
    std::memcpy(out, text.c_str(), text.size() + 1);
    return out;
  } catch (const std::exception& e) {
    set_error(e.what());
    return nullptr;
  }
}

void fishmpc_config_free(fishmpc_config* cfg) { delete cfg; }

void fishmpc_string_free(char* s) { delete[] s; }

int fishmpc_run(const fishmpc_config* cfg, const char* out_dir) {
  if (!cfg) {
    set_error("null config handle");
    return FISHMPC_ERR_INVALID;
  }
  return guarded([&] {
    fishmpc::ExperimentConfig local = cfg->cfg;
    if (out_dir) local.out_dir = out_dir;
    local.validate();
    fishmpc::run_experiment(local);
    return FISHMPC_OK;
  });
}

int fishmpc_sweep(const fishmpc_config* cfg, const int* horizons, size_t n_horizons,
                  const char* out_dir) {
  if (!cfg || (n_horizons > 0 && !horizons)) {
    set_error("null argument to fishmpc_sweep");
    return FISHMPC_ERR_INVALID;
  }
  return guarded([&] {
    fishmpc::ExperimentConfig local = cfg->cfg;
    if (out_dir) local.out_dir = out_dir;
    std::vector<int> ns = n_horizons > 0
                              ? std::vector<int>(horizons, horizons + n_horizons)
                              : local.sweep_horizons;
    local.validate();
    fishmpc::horizon_sweep(local, ns);
    return FISHMPC_OK;
  });
}

int fishmpc_noise(const fishmpc_config* cfg, double snr_db, const uint64_t* seeds,
                  size_t n_seeds, const char* out_dir) {
  if (!cfg || (n_seeds > 0 && !seeds)) {
    set_error("null argument to fishmpc_noise");
    return FISHMPC_ERR_INVALID;
  }
  return guarded([&] {
    fishmpc::ExperimentConfig local = cfg->cfg;
    if (out_dir) local.out_dir = out_dir;
    std::vector<std::uint64_t> seed_list(seeds, seeds + n_seeds);
    if (seed_list.empty())
      for (int i = 0; i < local.noise_runs; ++i)
        seed_list.push_back(local.seed + static_cast<std::uint64_t>(i));
    local.validate();
    fishmpc::noise_comparison(local, snr_db, seed_list);
    return FISHMPC_OK;
  });
}

fishmpc_model* fishmpc_model_create(const fishmpc_config* cfg) {
  if (!cfg) {
    set_error("null config handle");
    return nullptr;
  }
  try {
    cfg->cfg.growth.validate();
    cfg->cfg.sim.validate();
    return new fishmpc_model{cfg->cfg.growth, cfg->cfg.sim};
  } catch (const std::exception& e) {
    set_error(e.what());
    return nullptr;
  }
}

int fishmpc_model_growth_rate(const fishmpc_model* m, double w, double f, double T,
                              double dissolved_oxygen, double* rate_out) {
  if (!m || !rate_out) {
    set_error("null argument to fishmpc_model_growth_rate");
    return FISHMPC_ERR_INVALID;
  }
  return guarded([&] {
    const fishmpc::FishState s{0.0, w};
    *rate_out = fishmpc::growth_rate(s, {f, T, dissolved_oxygen}, m->sim.uia,
                                     m->growth);
    return FISHMPC_OK;
  });
}

int fishmpc_model_step(const fishmpc_model* m, double w, double f, double T,
                       double dissolved_oxygen, double* w_out) {
  if (!m || !w_out) {
    set_error("null argument to fishmpc_model_step");
    return FISHMPC_ERR_INVALID;
  }
  return guarded([&] {
    const fishmpc::FishState s{0.0, w};
    *w_out = fishmpc::step(s, {f, T, dissolved_oxygen}, m->sim, m->growth).w;
    return FISHMPC_OK;
  });
}

void fishmpc_model_free(fishmpc_model* m) { delete m; }

}  // extern "C"
