#include "bttn/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace bttn {

namespace {

using nlohmann::json;

/// Tracks which keys of an object were consumed; anything left over is a
/// config error naming the key.
class KeyChecker {
public:
    KeyChecker(const json& obj, std::string scope) : obj_(obj), scope_(std::move(scope)) {
        if (!obj.is_object()) throw ConfigError(scope_ + ": expected an object");
    }

    const json* get(const std::string& key) {
        seen_.insert(key);
        auto it = obj_.find(key);
        return it == obj_.end() ? nullptr : &*it;
    }

    void finish() const {
        for (auto it = obj_.begin(); it != obj_.end(); ++it) {
            if (!seen_.count(it.key())) {
                throw ConfigError(scope_ + ": unknown key '" + it.key() + "'");
            }
        }
    }

private:
    const json& obj_;
    std::string scope_;
    std::set<std::string> seen_;
};

double as_number(const json& v, const std::string& key) {
    if (!v.is_number()) throw ConfigError("key '" + key + "' must be a number");
    return v.get<double>();
}

std::uint64_t as_u64(const json& v, const std::string& key) {
    if (!v.is_number_unsigned() && !v.is_number_integer()) {
        throw ConfigError("key '" + key + "' must be a nonnegative integer");
    }
    const auto i = v.get<std::int64_t>();
    if (i < 0) throw ConfigError("key '" + key + "' must be >= 0");
    return static_cast<std::uint64_t>(i);
}

bool as_bool(const json& v, const std::string& key) {
    if (!v.is_boolean()) throw ConfigError("key '" + key + "' must be a boolean");
    return v.get<bool>();
}

std::string as_string(const json& v, const std::string& key) {
    if (!v.is_string()) throw ConfigError("key '" + key + "' must be a string");
    return v.get<std::string>();
}

complexd as_complex(const json& v, const std::string& key) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        throw ConfigError("key '" + key + "' must be a [re, im] pair");
    }
    return {v[0].get<double>(), v[1].get<double>()};
}

void read_number(KeyChecker& keys, const std::string& key, double& out) {
    if (const json* v = keys.get(key)) out = as_number(*v, key);
}

/// Power field with explicit unit suffix: exactly one of <base>_dbm or
/// <base>_w may appear.
void read_power(KeyChecker& keys, const std::string& base, double& out_watts) {
    const json* dbm = keys.get(base + "_dbm");
    const json* w = keys.get(base + "_w");
    if (dbm && w) throw ConfigError("give only one of '" + base + "_dbm' and '" + base + "_w'");
    if (dbm) out_watts = dbm_to_watts(as_number(*dbm, base + "_dbm"));
    if (w) out_watts = as_number(*w, base + "_w");
}

void parse_geometry(const json& obj, ExperimentSpec& spec) {
    KeyChecker keys(obj, "geometry");
    ScenarioGeometry& g = spec.base.geometry;
    read_number(keys, "d_ST", g.d_ST);
    read_number(keys, "d_SL", g.d_SL);
    read_number(keys, "d_TL", g.d_TL);
    read_number(keys, "d_TR", g.d_TR);
    read_number(keys, "d_RL", g.d_RL);
    read_number(keys, "d_SE", g.d_SE);
    if (const json* v = keys.get("d_EL")) {
        g.d_EL = as_number(*v, "d_EL");
        spec.eve_el_auto = false;
    }
    if (const json* v = keys.get("d_TE")) {
        g.d_TE = as_number(*v, "d_TE");
        spec.eve_te_auto = false;
    }
    read_number(keys, "d_ER", g.d_ER);
    read_number(keys, "chi_direct", g.chi_direct);
    read_number(keys, "chi_ris", g.chi_ris);
    read_number(keys, "f_c", g.f_c);
    read_number(keys, "g_tag", g.g_tag);
    read_number(keys, "g_ris_element", g.g_ris_element);
    if (const json* v = keys.get("n_elements")) {
        g.n_elements = static_cast<std::size_t>(as_u64(*v, "n_elements"));
    }
    keys.finish();
}

void parse_circuit(const json& obj, CircuitParams& cp) {
    KeyChecker keys(obj, "circuit");
    read_number(keys, "v_d", cp.v_d);
    read_number(keys, "k_hrv", cp.k_hrv);
    read_number(keys, "k_dem", cp.k_dem);
    read_number(keys, "alpha", cp.alpha);
    read_number(keys, "divider_ratio", cp.divider_ratio);
    if (const json* v = keys.get("gamma_on")) cp.gamma_on = as_complex(*v, "gamma_on");
    if (const json* v = keys.get("gamma_off")) cp.gamma_off = as_complex(*v, "gamma_off");
    keys.finish();
}

void parse_noise(const json& obj, NoiseParams& np) {
    KeyChecker keys(obj, "noise");
    read_power(keys, "sigma2_l", np.sigma2_l);
    read_power(keys, "sigma2_t", np.sigma2_t);
    read_power(keys, "sigma2_e", np.sigma2_e);
    keys.finish();
}

void parse_attack(const json& obj, AttackSpec& a) {
    KeyChecker keys(obj, "attack");
    if (const json* v = keys.get("kind")) a.kind = attack_kind_from_name(as_string(*v, "kind"));
    if (const json* v = keys.get("n_eve")) a.n_eve = static_cast<std::size_t>(as_u64(*v, "n_eve"));
    if (const json* v = keys.get("claimed_id")) a.claimed_id = as_string(*v, "claimed_id");
    read_number(keys, "relay_gain", a.relay_gain);
    if (const json* v = keys.get("relay_gain_match_legit")) {
        a.relay_gain_match_legit = as_bool(*v, "relay_gain_match_legit");
    }
    keys.finish();
}

void parse_sweep(const json& obj, Sweep& sweep) {
    KeyChecker keys(obj, "sweep");
    const json* param = keys.get("param");
    const json* values = keys.get("values");
    if (!param || !values) throw ConfigError("sweep: both 'param' and 'values' are required");
    const std::string name = as_string(*param, "sweep.param");
    sweep.param_name = name;

    if (name == "d_TL") sweep.param = SweepParam::DTl;
    else if (name == "d_RL") sweep.param = SweepParam::DRl;
    else if (name == "d_EL") sweep.param = SweepParam::DEl;
    else if (name == "n_elements") sweep.param = SweepParam::NElements;
    else if (name == "p_s" || name == "p_s_w") sweep.param = SweepParam::PS;
    else if (name == "p_s_dbm") { sweep.param = SweepParam::PS; sweep.values_in_dbm = true; }
    else if (name == "sigma2_l" || name == "sigma2_l_w") sweep.param = SweepParam::Sigma2L;
    else if (name == "sigma2_l_dbm") { sweep.param = SweepParam::Sigma2L; sweep.values_in_dbm = true; }
    else if (name == "n_eve") sweep.param = SweepParam::NEve;
    else if (name == "attack") sweep.param = SweepParam::AttackKindAxis;
    else throw ConfigError("sweep: unsupported parameter '" + name + "'");

    if (!values->is_array() || values->empty()) {
        throw ConfigError("sweep: 'values' must be a nonempty array");
    }
    if (sweep.param == SweepParam::AttackKindAxis) {
        for (const json& v : *values) {
            sweep.kinds.push_back(attack_kind_from_name(as_string(v, "sweep.values")));
        }
    } else {
        for (const json& v : *values) sweep.values.push_back(as_number(v, "sweep.values"));
    }
    keys.finish();
}

ExperimentSpec parse_spec(const json& root, const std::string& name_fallback) {
    ExperimentSpec spec;
    spec.base = default_trial_config();
    spec.name = name_fallback;

    KeyChecker keys(root, "config");
    if (const json* v = keys.get("name")) spec.name = as_string(*v, "name");
    keys.get("description");  // free text, ignored

    if (const json* v = keys.get("geometry")) parse_geometry(*v, spec);
    if (const json* v = keys.get("rician")) {
        KeyChecker rk(*v, "rician");
        read_number(rk, "k_factor", spec.base.rician.k_factor);
        rk.finish();
    }
    if (const json* v = keys.get("circuit")) parse_circuit(*v, spec.base.circuit);
    if (const json* v = keys.get("noise")) parse_noise(*v, spec.base.noise);
    read_power(keys, "p_s", spec.base.p_s);

    // Default RIS operation: optimal phases whenever elements are present.
    spec.base.ris_mode =
        spec.base.geometry.n_elements > 0 ? RisMode::OptimalForLegit : RisMode::Absent;
    if (const json* v = keys.get("ris_mode")) {
        const std::string mode = as_string(*v, "ris_mode");
        if (mode == "optimal") spec.base.ris_mode = RisMode::OptimalForLegit;
        else if (mode == "absent") spec.base.ris_mode = RisMode::Absent;
        else throw ConfigError("ris_mode must be 'optimal' or 'absent'");
    }

    spec.base.attack = AttackSpec{};  // experiments always pit legit against attack batches
    if (const json* v = keys.get("attack")) parse_attack(*v, *spec.base.attack);

    if (const json* v = keys.get("n_trials")) {
        spec.base.n_trials = static_cast<std::size_t>(as_u64(*v, "n_trials"));
    }
    if (const json* v = keys.get("master_seed")) spec.base.master_seed = as_u64(*v, "master_seed");
    if (const json* v = keys.get("pilot_count")) {
        spec.base.pilot_count = static_cast<std::size_t>(as_u64(*v, "pilot_count"));
    }
    if (const json* v = keys.get("channel_drift")) {
        spec.base.channel_drift = as_bool(*v, "channel_drift");
    }
    read_number(keys, "drift_rho", spec.base.drift_rho);
    if (const json* v = keys.get("enforce_min_power")) {
        spec.base.enforce_min_power = as_bool(*v, "enforce_min_power");
    }
    read_number(keys, "min_power_dbm", spec.base.min_power_dbm);
    read_number(keys, "r_s_bps_hz", spec.base.r_s);

    if (const json* v = keys.get("sweep")) parse_sweep(*v, spec.sweep);
    if (const json* v = keys.get("output_dir")) spec.output_dir = as_string(*v, "output_dir");
    if (const json* v = keys.get("formats")) {
        if (!v->is_array() || v->empty()) throw ConfigError("formats must be a nonempty array");
        spec.write_csv = false;
        spec.write_json = false;
        for (const json& f : *v) {
            const std::string fmt = as_string(f, "formats");
            if (fmt == "csv") spec.write_csv = true;
            else if (fmt == "json") spec.write_json = true;
            else throw ConfigError("formats: unknown format '" + fmt + "'");
        }
    }
    keys.finish();

    // Validate every sweep point up front so bad values fail at parse time.
    for (std::size_t i = 0; i < spec.sweep.point_count(); ++i) {
        try {
            config_at_sweep_point(spec, i).validate();
        } catch (const std::exception& e) {
            throw ConfigError("config invalid at sweep point " + sweep_point_label(spec, i) +
                              ": " + e.what());
        }
    }
    return spec;
}

}  // namespace

ExperimentSpec parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string stem = std::filesystem::path(path).stem().string();
    ExperimentSpec spec = parse_config_text(buf.str(), stem);
    spec.source_path = path;
    return spec;
}

ExperimentSpec parse_config_text(const std::string& text, const std::string& name_fallback) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    return parse_spec(root, name_fallback);
}

TrialConfig config_at_sweep_point(const ExperimentSpec& spec, std::size_t index) {
    if (index >= spec.sweep.point_count()) {
        throw std::out_of_range("config_at_sweep_point: index out of range");
    }
    TrialConfig cfg = spec.base;
    switch (spec.sweep.param) {
        case SweepParam::None: break;
        case SweepParam::DTl: cfg.geometry.d_TL = spec.sweep.values[index]; break;
        case SweepParam::DRl: cfg.geometry.d_RL = spec.sweep.values[index]; break;
        case SweepParam::DEl: cfg.geometry.d_EL = spec.sweep.values[index]; break;
        case SweepParam::NElements: {
            cfg.geometry.n_elements = static_cast<std::size_t>(spec.sweep.values[index]);
            cfg.ris_mode =
                cfg.geometry.n_elements > 0 ? RisMode::OptimalForLegit : RisMode::Absent;
            break;
        }
        case SweepParam::PS:
            cfg.p_s = spec.sweep.values_in_dbm ? dbm_to_watts(spec.sweep.values[index])
                                               : spec.sweep.values[index];
            break;
        case SweepParam::Sigma2L:
            cfg.noise.sigma2_l = spec.sweep.values_in_dbm
                                     ? dbm_to_watts(spec.sweep.values[index])
                                     : spec.sweep.values[index];
            break;
        case SweepParam::NEve:
            if (!cfg.attack) throw ConfigError("n_eve sweep requires an attack spec");
            cfg.attack->n_eve = static_cast<std::size_t>(spec.sweep.values[index]);
            break;
        case SweepParam::AttackKindAxis:
            if (!cfg.attack) throw ConfigError("attack sweep requires an attack spec");
            cfg.attack->kind = spec.sweep.kinds[index];
            break;
    }
    // Midpoint adversary placement tracks the tag separation unless the
    // config pinned the distances explicitly.
    if (spec.eve_te_auto) cfg.geometry.d_TE = 0.5 * cfg.geometry.d_TL;
    if (spec.eve_el_auto && spec.sweep.param != SweepParam::DEl) {
        cfg.geometry.d_EL = 0.5 * cfg.geometry.d_TL;
    }
    return cfg;
}

std::string sweep_point_label(const ExperimentSpec& spec, std::size_t index) {
    if (spec.sweep.param == SweepParam::None) return "base";
    if (spec.sweep.param == SweepParam::AttackKindAxis) {
        return attack_kind_name(spec.sweep.kinds[index]);
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", spec.sweep.values[index]);
    return buf;
}

double sweep_point_value(const ExperimentSpec& spec, std::size_t index) {
    if (spec.sweep.param == SweepParam::None) return 0.0;
    if (spec.sweep.param == SweepParam::AttackKindAxis) return static_cast<double>(index);
    return spec.sweep.values[index];
}

std::string default_preset_dir() {
    if (const char* env = std::getenv("BTTNSIM_PRESET_DIR")) return env;
#ifdef BTTNSIM_DEFAULT_PRESET_DIR
    return BTTNSIM_DEFAULT_PRESET_DIR;
#else
    return "presets";
#endif
}

std::vector<std::string> list_presets(const std::string& dir) {
    std::vector<std::string> names;
    std::error_code ec;
    for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
        if (entry.path().extension() == ".json") names.push_back(entry.path().stem().string());
    }
    std::sort(names.begin(), names.end());
    return names;
}

ExperimentSpec load_preset(const std::string& name, const std::string& dir) {
    const std::filesystem::path path = std::filesystem::path(dir) / (name + ".json");
    if (!std::filesystem::exists(path)) {
        std::string known;
        for (const std::string& n : list_presets(dir)) known += (known.empty() ? "" : ", ") + n;
        throw ConfigError("unknown preset '" + name + "' (available: " + known + ")");
    }
    return parse_config(path.string());
}

}  // namespace bttn
