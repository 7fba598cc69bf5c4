#ifndef BTTN_CONFIG_HPP
#define BTTN_CONFIG_HPP

#include <string>
#include <vector>

#include "bttn/sim.hpp"

namespace bttn {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class SweepParam { None, DTl, DRl, DEl, NElements, PS, Sigma2L, NEve, AttackKindAxis };

struct Sweep {
    SweepParam param = SweepParam::None;
    std::string param_name;           // as written in the config
    std::vector<double> values;       // numeric axes
    std::vector<AttackKind> kinds;    // attack-kind axis
    bool values_in_dbm = false;       // p_s / sigma2_l axes given in dBm

    std::size_t point_count() const {
        if (param == SweepParam::None) return 1;
        return param == SweepParam::AttackKindAxis ? kinds.size() : values.size();
    }
};

/// One experiment: a base trial configuration, an optional single-parameter
/// sweep, and output selection. Adversary distances omitted from the config
/// default to the midpoint placement (d_TE = d_EL = d_TL/2) and track a
/// swept d_TL.
struct ExperimentSpec {
    std::string name = "experiment";
    TrialConfig base;
    Sweep sweep;
    bool eve_el_auto = true;  // d_EL derived as d_TL/2
    bool eve_te_auto = true;  // d_TE derived as d_TL/2
    std::string output_dir = "out";
    bool write_csv = true;
    bool write_json = true;
    std::string source_path;  // config file the spec came from, if any
};

/// Parses and fully validates an experiment file (JSON). Unknown keys are
/// rejected; every diagnostic names the offending key.
ExperimentSpec parse_config(const std::string& path);

/// Same, from an in-memory JSON text (used by tests and presets).
ExperimentSpec parse_config_text(const std::string& text, const std::string& name_fallback);

/// Trial configuration for one sweep point, with derived adversary distances
/// reapplied.
TrialConfig config_at_sweep_point(const ExperimentSpec& spec, std::size_t index);

/// Human-readable label of one sweep point ("0.5", "mitm", ...).
std::string sweep_point_label(const ExperimentSpec& spec, std::size_t index);

/// Numeric value recorded in the rate table for one sweep point (the swept
/// value, or the kind index for an attack-kind axis; 0 for single runs).
double sweep_point_value(const ExperimentSpec& spec, std::size_t index);

/// Preset lookup: $BTTNSIM_PRESET_DIR, else the build-time default directory.
std::string default_preset_dir();
std::vector<std::string> list_presets(const std::string& dir);
ExperimentSpec load_preset(const std::string& name, const std::string& dir);

}  // namespace bttn

#endif
