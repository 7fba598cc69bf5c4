#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "bttn/acceptance.hpp"
#include "bttn/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitRuntimeError = 2;
constexpr int kExitAcceptanceFailed = 3;

struct CommonFlags {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::optional<std::string> out_dir;
    std::optional<std::string> format;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--seed", flags.seed, "Master seed override");
    cmd->add_option("--trials", flags.trials, "Trials per batch override");
    cmd->add_option("--out", flags.out_dir, "Output directory override");
    cmd->add_option("--format", flags.format, "Output formats: csv, json or both")
        ->check(CLI::IsMember({"csv", "json", "both"}));
}

void apply_common_flags(bttn::ExperimentSpec& spec, const CommonFlags& flags) {
    if (flags.seed) spec.base.master_seed = *flags.seed;
    if (flags.trials) spec.base.n_trials = *flags.trials;
    if (flags.out_dir) spec.output_dir = *flags.out_dir;
    if (flags.format) {
        spec.write_csv = *flags.format == "csv" || *flags.format == "both";
        spec.write_json = *flags.format == "json" || *flags.format == "both";
    }
}

int run_spec(bttn::ExperimentSpec spec, const CommonFlags& flags) {
    apply_common_flags(spec, flags);
    const std::vector<std::string> written = bttn::run_and_emit(spec);
    if (written.empty()) {
        std::cerr << "no result tables produced\n";
        return kExitRuntimeError;
    }
    for (const std::string& path : written) std::cout << path << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo simulator for voltage-profile authentication in "
                 "RIS-aided backscatter tag-to-tag links"};
    app.require_subcommand(1);

    std::string preset_dir = bttn::default_preset_dir();
    app.add_option("--presets-dir", preset_dir, "Directory holding preset experiment files");

    std::string config_path;
    CommonFlags run_flags;
    CLI::App* run_cmd = app.add_subcommand("run", "Run an experiment from a config file");
    run_cmd->add_option("config", config_path, "Experiment config (JSON)")->required();
    add_common_flags(run_cmd, run_flags);

    std::string preset_name;
    CommonFlags preset_flags;
    CLI::App* preset_cmd = app.add_subcommand("preset", "Run a canned experiment by name");
    preset_cmd->add_option("name", preset_name, "Preset name (see list-presets)")->required();
    add_common_flags(preset_cmd, preset_flags);

    CLI::App* list_cmd = app.add_subcommand("list-presets", "List available presets");

    CLI::App* verify_cmd = app.add_subcommand("verify", "Run the acceptance suite");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            return run_spec(bttn::parse_config(config_path), run_flags);
        }
        if (preset_cmd->parsed()) {
            return run_spec(bttn::load_preset(preset_name, preset_dir), preset_flags);
        }
        if (list_cmd->parsed()) {
            for (const std::string& name : bttn::list_presets(preset_dir)) {
                std::cout << name << "\n";
            }
            return kExitOk;
        }
        if (verify_cmd->parsed()) {
            bttn::acceptance::Options opts;
            opts.preset_dir = preset_dir;
            const int failures = bttn::acceptance::run_all(std::cout, opts);
            return failures == 0 ? kExitOk : kExitAcceptanceFailed;
        }
    } catch (const bttn::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntimeError;
    }
    return kExitOk;
}
