#include "bttn/experiment.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace bttn {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void atomic_write(const fs::path& path, const std::string& content) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
        out << content;
        if (!out.good()) throw std::runtime_error("write failed for '" + tmp.string() + "'");
    }
    fs::rename(tmp, path);
}

json complex_to_json(const complexd& c) { return json::array({c.real(), c.imag()}); }

/// Resolved physics and simulation parameters; output settings are excluded
/// so identical runs into different directories stay byte-identical.
json config_to_json(const TrialConfig& cfg) {
    const ScenarioGeometry& g = cfg.geometry;
    json j;
    j["geometry"] = {
        {"d_ST", g.d_ST}, {"d_SL", g.d_SL}, {"d_TL", g.d_TL}, {"d_TR", g.d_TR},
        {"d_RL", g.d_RL}, {"d_SE", g.d_SE}, {"d_EL", g.d_EL}, {"d_TE", g.d_TE},
        {"d_ER", g.d_ER}, {"chi_direct", g.chi_direct}, {"chi_ris", g.chi_ris},
        {"f_c", g.f_c}, {"g_tag", g.g_tag}, {"g_ris_element", g.g_ris_element},
        {"n_elements", g.n_elements}};
    j["rician"] = {{"k_factor", cfg.rician.k_factor}};
    j["circuit"] = {{"v_d", cfg.circuit.v_d},
                    {"k_hrv", cfg.circuit.k_hrv},
                    {"k_dem", cfg.circuit.k_dem},
                    {"alpha", cfg.circuit.alpha},
                    {"divider_ratio", cfg.circuit.divider_ratio},
                    {"gamma_on", complex_to_json(cfg.circuit.gamma_on)},
                    {"gamma_off", complex_to_json(cfg.circuit.gamma_off)}};
    j["noise"] = {{"sigma2_l_w", cfg.noise.sigma2_l},
                  {"sigma2_t_w", cfg.noise.sigma2_t},
                  {"sigma2_e_w", cfg.noise.sigma2_e}};
    j["p_s_w"] = cfg.p_s;
    j["ris_mode"] = cfg.ris_mode == RisMode::OptimalForLegit ? "optimal" : "absent";
    if (cfg.attack) {
        j["attack"] = {{"kind", attack_kind_name(cfg.attack->kind)},
                       {"n_eve", cfg.attack->n_eve},
                       {"claimed_id", cfg.attack->claimed_id},
                       {"relay_gain", cfg.attack->relay_gain},
                       {"relay_gain_match_legit", cfg.attack->relay_gain_match_legit}};
    }
    j["n_trials"] = cfg.n_trials;
    j["pilot_count"] = cfg.pilot_count;
    j["channel_drift"] = cfg.channel_drift;
    j["drift_rho"] = cfg.drift_rho;
    j["enforce_min_power"] = cfg.enforce_min_power;
    j["min_power_dbm"] = cfg.min_power_dbm;
    j["r_s_bps_hz"] = cfg.r_s;
    return j;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    ExperimentResult result;
    result.spec = spec;
    for (std::size_t i = 0; i < spec.sweep.point_count(); ++i) {
        const TrialConfig point_cfg = config_at_sweep_point(spec, i);

        TrialConfig legit_cfg = point_cfg;
        legit_cfg.attack.reset();
        const std::vector<TrialOutcome> legit = run_legit_trials(legit_cfg);
        const std::vector<TrialOutcome> attack = run_attack_trials(point_cfg);

        SweepPointResult point;
        point.label = sweep_point_label(spec, i);
        point.sweep_value = sweep_point_value(spec, i);
        const std::vector<double> grid = default_threshold_grid(legit, attack);
        point.roc = roc_curve(legit, attack, grid);
        for (std::size_t j = 0; j < kReportFprTargets.size(); ++j) {
            point.rates[j] = tpr_at_fpr(point.roc, kReportFprTargets[j]);
        }
        result.points.push_back(std::move(point));
    }
    return result;
}

std::vector<std::string> emit_results(const ExperimentResult& result, const std::string& dir,
                                      bool write_csv, bool write_json) {
    if (result.points.empty()) return {};
    const ExperimentSpec& spec = result.spec;
    fs::create_directories(dir);
    std::vector<std::string> written;

    if (write_csv) {
        std::string rates = "sweep_value,fpr_target,tpr\n";
        for (const SweepPointResult& p : result.points) {
            for (std::size_t j = 0; j < kReportFprTargets.size(); ++j) {
                rates += fmt(p.sweep_value) + "," + fmt(kReportFprTargets[j]) + "," +
                         fmt(p.rates[j].tpr) + "\n";
            }
        }
        const fs::path rates_path = fs::path(dir) / (spec.name + "_rates.csv");
        atomic_write(rates_path, rates);
        written.push_back(rates_path.string());

        for (const SweepPointResult& p : result.points) {
            std::string roc = "threshold,fpr,tpr\n";
            for (const RocPoint& r : p.roc) {
                roc += fmt(r.threshold) + "," + fmt(r.fpr) + "," + fmt(r.tpr) + "\n";
            }
            const std::string suffix = spec.sweep.param == SweepParam::None
                                           ? ""
                                           : "_" + spec.sweep.param_name + "_" + p.label;
            const fs::path roc_path = fs::path(dir) / (spec.name + "_roc" + suffix + ".csv");
            atomic_write(roc_path, roc);
            written.push_back(roc_path.string());
        }
    }

    if (write_json) {
        json j;
        j["tool"] = kToolVersion;
        j["name"] = spec.name;
        j["master_seed"] = spec.base.master_seed;
        j["config"] = config_to_json(spec.base);
        if (spec.sweep.param != SweepParam::None) {
            json sweep;
            sweep["param"] = spec.sweep.param_name;
            if (spec.sweep.param == SweepParam::AttackKindAxis) {
                json kinds = json::array();
                for (AttackKind k : spec.sweep.kinds) kinds.push_back(attack_kind_name(k));
                sweep["values"] = kinds;
            } else {
                sweep["values"] = spec.sweep.values;
            }
            j["sweep"] = sweep;
        }
        json points = json::array();
        for (const SweepPointResult& p : result.points) {
            json pj;
            pj["label"] = p.label;
            pj["sweep_value"] = p.sweep_value;
            json rates = json::array();
            for (std::size_t k = 0; k < kReportFprTargets.size(); ++k) {
                rates.push_back({{"fpr_target", kReportFprTargets[k]},
                                 {"tpr", p.rates[k].tpr},
                                 {"extrapolated", p.rates[k].extrapolated}});
            }
            pj["rates"] = rates;
            json roc = json::array();
            for (const RocPoint& r : p.roc) {
                roc.push_back(json::array({r.threshold, r.fpr, r.tpr}));
            }
            pj["roc"] = roc;
            points.push_back(pj);
        }
        j["results"] = points;
        const fs::path json_path = fs::path(dir) / (spec.name + ".json");
        atomic_write(json_path, j.dump(2) + "\n");
        written.push_back(json_path.string());
    }
    return written;
}

std::vector<std::string> run_and_emit(const ExperimentSpec& spec) {
    const ExperimentResult result = run_experiment(spec);
    return emit_results(result, spec.output_dir, spec.write_csv, spec.write_json);
}

}  // namespace bttn
