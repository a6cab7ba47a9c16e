#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

extern char** environ;

namespace fishmpc {

using nlohmann::json;

namespace {

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
    for (const auto& item : j.items()) {
        if (std::find_if(allowed.begin(), allowed.end(),
                         [&](const char* k) { return item.key() == k; }) == allowed.end())
            throw_config("config: unknown key \"" + item.key() + "\" in " + where);
    }
}

double num(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number()) throw_config(std::string("config: ") + key + " must be a number");
    return j.at(key).get<double>();
}

int integer(const json& j, const char* key, int fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number_integer()) throw_config(std::string("config: ") + key + " must be an integer");
    return j.at(key).get<int>();
}

ControlInput control_from_json(const json& j, const ControlInput& fallback, const std::string& where) {
    check_keys(j, {"f", "T", "DO"}, where);
    ControlInput u = fallback;
    u.f = num(j, "f", u.f);
    u.T = num(j, "T", u.T);
    u.DO = num(j, "DO", u.DO);
    return u;
}

json control_to_json(const ControlInput& u) {
    return json{{"f", u.f}, {"T", u.T}, {"DO", u.DO}};
}

} // namespace

std::string controller_name(Controller c) {
    switch (c) {
        case Controller::mpc1: return "mpc1";
        case Controller::mpc2: return "mpc2";
        case Controller::mpc3: return "mpc3";
    }
    throw_invalid("unreachable controller value");
}

Controller controller_from_name(const std::string& name) {
    if (name == "mpc1") return Controller::mpc1;
    if (name == "mpc2") return Controller::mpc2;
    if (name == "mpc3") return Controller::mpc3;
    throw_config("config: unknown controller \"" + name + "\" (expected mpc1|mpc2|mpc3)");
}

void ExperimentConfig::validate() const {
    growth.validate();
    economic.validate();
    horizon.validate();
    bounds.validate();
    sim.validate();
    farm.validate();
    noise.validate();
    if (controllers.empty()) throw_config("config: select at least one controller");
    if (duration_days < 1) throw_config("config: duration_days must be >= 1");
    const double steps = duration_days / horizon.epsilon;
    if (std::abs(steps - std::llround(steps)) > 1e-9)
        throw_config("config: duration_days must be a whole multiple of epsilon");
    if (std::abs(sim.epsilon - horizon.epsilon) > 1e-12)
        throw_config("config: sim epsilon and horizon epsilon must agree (one sampling period)");
    if (!(tracking.lambda >= 0.0)) throw_config("config: tracking lambda must be >= 0");
    if (!(fcr.delta_w_floor > 0.0)) throw_config("config: fcr delta_w floor must be positive");
    if (!(fcr.u1_floor >= 0.0)) throw_config("config: fcr u1 floor must be >= 0");
    if (terminal.N_o < 0) throw_config("config: terminal N_o must be >= 0");
    if (noise_runs < 1) throw_config("config: noise_runs must be >= 1");
    if (sweep_repeats < 1) throw_config("config: sweep_repeats must be >= 1");
    if (sweep_horizons.empty()) throw_config("config: sweep_horizons must not be empty");
    for (int n : sweep_horizons)
        if (n < 1) throw_config("config: sweep horizons must be >= 1");
    if (workers < 0) throw_config("config: workers must be >= 0");
}

ExperimentConfig default_config() { return ExperimentConfig{}; }

ExperimentConfig config_from_json(const json& j) {
    if (!j.is_object()) throw_config("config: document root must be a JSON object");
    check_keys(j, {"growth", "economic", "tracking", "fcr", "terminal", "horizon", "bounds",
                   "sim", "farm", "noise", "experiment"}, "config root");
    ExperimentConfig cfg;

    if (j.contains("growth")) {
        const auto& g = j.at("growth");
        check_keys(g, {"m_exp", "n_exp", "b_assim", "a_frac", "h_coef", "k_min", "j_coef",
                       "kappa", "rho", "T_opt", "T_min", "T_max", "UIA_crit", "UIA_max",
                       "DO_min", "DO_crit", "R_frac"}, "growth");
        auto& p = cfg.growth;
        p.m_exp = num(g, "m_exp", p.m_exp);
        p.n_exp = num(g, "n_exp", p.n_exp);
        p.b_assim = num(g, "b_assim", p.b_assim);
        p.a_frac = num(g, "a_frac", p.a_frac);
        p.h_coef = num(g, "h_coef", p.h_coef);
        p.k_min = num(g, "k_min", p.k_min);
        p.j_coef = num(g, "j_coef", p.j_coef);
        p.kappa = num(g, "kappa", p.kappa);
        p.rho = num(g, "rho", p.rho);
        p.T_opt = num(g, "T_opt", p.T_opt);
        p.T_min = num(g, "T_min", p.T_min);
        p.T_max = num(g, "T_max", p.T_max);
        p.UIA_crit = num(g, "UIA_crit", p.UIA_crit);
        p.UIA_max = num(g, "UIA_max", p.UIA_max);
        p.DO_min = num(g, "DO_min", p.DO_min);
        p.DO_crit = num(g, "DO_crit", p.DO_crit);
        p.R_frac = num(g, "R_frac", p.R_frac);
    }
    if (j.contains("economic")) {
        const auto& e = j.at("economic");
        check_keys(e, {"alpha", "P_s", "P_f", "beta1", "beta2", "P_e", "c_p", "L", "m_w",
                       "P_max", "T_amb", "DO_ref"}, "economic");
        auto& p = cfg.economic;
        p.alpha = num(e, "alpha", p.alpha);
        p.P_s = num(e, "P_s", p.P_s);
        p.P_f = num(e, "P_f", p.P_f);
        p.beta1 = num(e, "beta1", p.beta1);
        p.beta2 = num(e, "beta2", p.beta2);
        p.P_e = num(e, "P_e", p.P_e);
        p.c_p = num(e, "c_p", p.c_p);
        p.L = num(e, "L", p.L);
        p.m_w = num(e, "m_w", p.m_w);
        p.P_max = num(e, "P_max", p.P_max);
        p.T_amb = num(e, "T_amb", p.T_amb);
        p.DO_ref = num(e, "DO_ref", p.DO_ref);
    }
    if (j.contains("tracking")) {
        check_keys(j.at("tracking"), {"lambda"}, "tracking");
        cfg.tracking.lambda = num(j.at("tracking"), "lambda", cfg.tracking.lambda);
    }
    if (j.contains("fcr")) {
        check_keys(j.at("fcr"), {"delta_w_floor", "u1_floor"}, "fcr");
        cfg.fcr.delta_w_floor = num(j.at("fcr"), "delta_w_floor", cfg.fcr.delta_w_floor);
        cfg.fcr.u1_floor = num(j.at("fcr"), "u1_floor", cfg.fcr.u1_floor);
    }
    if (j.contains("terminal")) {
        const auto& t = j.at("terminal");
        check_keys(t, {"mode"}, "terminal");
        if (t.contains("mode")) {
            const std::string mode = t.at("mode").get<std::string>();
            if (mode == "off") cfg.terminal.mode = TerminalCostParams::Mode::off;
            else if (mode == "tracking") cfg.terminal.mode = TerminalCostParams::Mode::tracking;
            else throw_config("config: terminal mode must be \"off\" or \"tracking\"");
        }
    }
    if (j.contains("horizon")) {
        const auto& h = j.at("horizon");
        check_keys(h, {"N", "N_o", "epsilon"}, "horizon");
        cfg.horizon.N = integer(h, "N", cfg.horizon.N);
        cfg.horizon.N_o = integer(h, "N_o", cfg.horizon.N_o);
        cfg.horizon.epsilon = num(h, "epsilon", cfg.horizon.epsilon);
    }
    if (j.contains("bounds")) {
        const auto& b = j.at("bounds");
        check_keys(b, {"lower", "upper"}, "bounds");
        if (b.contains("lower")) cfg.bounds.lower = control_from_json(b.at("lower"), cfg.bounds.lower, "bounds.lower");
        if (b.contains("upper")) cfg.bounds.upper = control_from_json(b.at("upper"), cfg.bounds.upper, "bounds.upper");
    }
    if (j.contains("sim")) {
        const auto& s = j.at("sim");
        check_keys(s, {"epsilon", "substeps", "uia"}, "sim");
        cfg.sim.epsilon = num(s, "epsilon", cfg.sim.epsilon);
        cfg.sim.substeps = integer(s, "substeps", cfg.sim.substeps);
        cfg.sim.uia = num(s, "uia", cfg.sim.uia);
    }
    if (j.contains("farm")) {
        const auto& f = j.at("farm");
        check_keys(f, {"n_fish", "w0"}, "farm");
        cfg.farm.n_fish = integer(f, "n_fish", cfg.farm.n_fish);
        cfg.farm.w0 = num(f, "w0", cfg.farm.w0);
    }
    if (j.contains("noise")) {
        const auto& n = j.at("noise");
        check_keys(n, {"enabled", "snr_db"}, "noise");
        if (n.contains("enabled")) cfg.noise.enabled = n.at("enabled").get<bool>();
        cfg.noise.snr_db = num(n, "snr_db", cfg.noise.snr_db);
    }
    if (j.contains("experiment")) {
        const auto& e = j.at("experiment");
        check_keys(e, {"controllers", "duration_days", "reference", "u_nominal", "out_dir",
                       "seed", "workers", "noise_runs", "sweep_horizons", "sweep_repeats"},
                   "experiment");
        if (e.contains("controllers")) {
            cfg.controllers.clear();
            for (const auto& name : e.at("controllers"))
                cfg.controllers.push_back(controller_from_name(name.get<std::string>()));
        }
        cfg.duration_days = integer(e, "duration_days", cfg.duration_days);
        if (e.contains("reference")) cfg.reference_source = e.at("reference").get<std::string>();
        if (e.contains("u_nominal"))
            cfg.u_nominal = control_from_json(e.at("u_nominal"), cfg.u_nominal, "experiment.u_nominal");
        if (e.contains("out_dir")) cfg.out_dir = e.at("out_dir").get<std::string>();
        if (e.contains("seed")) cfg.seed = e.at("seed").get<std::uint64_t>();
        cfg.workers = integer(e, "workers", cfg.workers);
        cfg.noise_runs = integer(e, "noise_runs", cfg.noise_runs);
        if (e.contains("sweep_horizons"))
            cfg.sweep_horizons = e.at("sweep_horizons").get<std::vector<int>>();
        cfg.sweep_repeats = integer(e, "sweep_repeats", cfg.sweep_repeats);
    }

    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw_io("config: cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw_config("config: JSON parse error in " + path + ": " + e.what());
    }
    return config_from_json(j);
}

json config_to_json(const ExperimentConfig& cfg) {
    json j;
    j["growth"] = {
        {"m_exp", cfg.growth.m_exp}, {"n_exp", cfg.growth.n_exp},
        {"b_assim", cfg.growth.b_assim}, {"a_frac", cfg.growth.a_frac},
        {"h_coef", cfg.growth.h_coef}, {"k_min", cfg.growth.k_min},
        {"j_coef", cfg.growth.j_coef}, {"kappa", cfg.growth.kappa},
        {"rho", cfg.growth.rho}, {"T_opt", cfg.growth.T_opt},
        {"T_min", cfg.growth.T_min}, {"T_max", cfg.growth.T_max},
        {"UIA_crit", cfg.growth.UIA_crit}, {"UIA_max", cfg.growth.UIA_max},
        {"DO_min", cfg.growth.DO_min}, {"DO_crit", cfg.growth.DO_crit},
        {"R_frac", cfg.growth.R_frac}};
    j["economic"] = {
        {"alpha", cfg.economic.alpha}, {"P_s", cfg.economic.P_s}, {"P_f", cfg.economic.P_f},
        {"beta1", cfg.economic.beta1}, {"beta2", cfg.economic.beta2}, {"P_e", cfg.economic.P_e},
        {"c_p", cfg.economic.c_p}, {"L", cfg.economic.L}, {"m_w", cfg.economic.m_w},
        {"P_max", cfg.economic.P_max}, {"T_amb", cfg.economic.T_amb}, {"DO_ref", cfg.economic.DO_ref}};
    j["tracking"] = {{"lambda", cfg.tracking.lambda}};
    j["fcr"] = {{"delta_w_floor", cfg.fcr.delta_w_floor}, {"u1_floor", cfg.fcr.u1_floor}};
    j["terminal"] = {{"mode", cfg.terminal.mode == TerminalCostParams::Mode::off ? "off" : "tracking"}};
    j["horizon"] = {{"N", cfg.horizon.N}, {"N_o", cfg.horizon.N_o}, {"epsilon", cfg.horizon.epsilon}};
    j["bounds"] = {{"lower", control_to_json(cfg.bounds.lower)},
                   {"upper", control_to_json(cfg.bounds.upper)}};
    j["sim"] = {{"epsilon", cfg.sim.epsilon}, {"substeps", cfg.sim.substeps}, {"uia", cfg.sim.uia}};
    j["farm"] = {{"n_fish", cfg.farm.n_fish}, {"w0", cfg.farm.w0}};
    j["noise"] = {{"enabled", cfg.noise.enabled}, {"snr_db", cfg.noise.snr_db}};
    json names = json::array();
    for (Controller c : cfg.controllers) names.push_back(controller_name(c));
    j["experiment"] = {{"controllers", names},
                       {"duration_days", cfg.duration_days},
                       {"reference", cfg.reference_source},
                       {"u_nominal", control_to_json(cfg.u_nominal)},
                       {"out_dir", cfg.out_dir},
                       {"seed", cfg.seed},
                       {"workers", cfg.workers},
                       {"noise_runs", cfg.noise_runs},
                       {"sweep_horizons", cfg.sweep_horizons},
                       {"sweep_repeats", cfg.sweep_repeats}};
    return j;
}

void set_config_key(ExperimentConfig& cfg, const std::string& dotted_key, const std::string& value) {
    json j = config_to_json(cfg);
    json* node = &j;
    std::istringstream path(dotted_key);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(path, part, '.')) parts.push_back(part);
    if (parts.empty()) throw_config("config: empty key");
    for (size_t i = 0; i + 1 < parts.size(); ++i) {
        if (!node->contains(parts[i])) throw_config("config: unknown key \"" + dotted_key + "\"");
        node = &(*node)[parts[i]];
    }
    if (!node->contains(parts.back())) throw_config("config: unknown key \"" + dotted_key + "\"");

    json parsed = json::parse(value, nullptr, false);
    if (parsed.is_discarded()) {
        if (value.find(',') != std::string::npos) {  // comma list -> array
            parsed = json::array();
            std::istringstream items(value);
            std::string item;
            while (std::getline(items, item, ',')) {
                json elem = json::parse(item, nullptr, false);
                parsed.push_back(elem.is_discarded() ? json(item) : elem);
            }
        } else {
            parsed = json(value);
        }
    }
    (*node)[parts.back()] = parsed;
    cfg = config_from_json(j);
}

void apply_env_overrides(ExperimentConfig& cfg) {
    static const char* kPrefix = "FISHMPC_";
    static const std::vector<std::string> kSections = {
        "growth", "economic", "tracking", "fcr", "terminal", "horizon",
        "bounds", "sim", "farm", "noise", "experiment"};
    if (!environ) return;
    const json defaults = config_to_json(cfg);
    for (char** env = environ; *env; ++env) {
        const std::string entry(*env);
        if (entry.rfind(kPrefix, 0) != 0) continue;
        const size_t eq = entry.find('=');
        if (eq == std::string::npos) continue;
        std::string name = entry.substr(std::string(kPrefix).size(), eq - std::string(kPrefix).size());
        const std::string value = entry.substr(eq + 1);
        std::string lower = name;
        std::transform(lower.begin(), lower.end(), lower.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });

        std::string matched_section;
        for (const auto& s : kSections)
            if (lower.rfind(s + "_", 0) == 0 && s.size() > matched_section.size()) matched_section = s;
        if (matched_section.empty()) throw_config("config: unrecognized env override " + entry.substr(0, eq));
        std::string field = name.substr(matched_section.size() + 1);

        // Field names keep their JSON spelling; match case-insensitively.
        const json& section = defaults.at(matched_section);
        std::string resolved;
        std::string field_lower = field;
        std::transform(field_lower.begin(), field_lower.end(), field_lower.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        for (const auto& item : section.items()) {
            std::string key_lower = item.key();
            std::transform(key_lower.begin(), key_lower.end(), key_lower.begin(),
                           [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
            if (key_lower == field_lower) { resolved = item.key(); break; }
            // nested one level (bounds.lower.f etc.)
            if (item.value().is_object() && field_lower.rfind(key_lower + "_", 0) == 0) {
                const std::string sub = field_lower.substr(key_lower.size() + 1);
                for (const auto& inner : item.value().items()) {
                    std::string inner_lower = inner.key();
                    std::transform(inner_lower.begin(), inner_lower.end(), inner_lower.begin(),
                                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
                    if (inner_lower == sub) { resolved = item.key() + "." + inner.key(); break; }
                }
                if (!resolved.empty()) break;
            }
        }
        if (resolved.empty())
            throw_config("config: unrecognized env override " + entry.substr(0, eq));
        set_config_key(cfg, matched_section + "." + resolved, value);
    }
}

} // namespace fishmpc
