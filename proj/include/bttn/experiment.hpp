#ifndef BTTN_EXPERIMENT_HPP
#define BTTN_EXPERIMENT_HPP

#include <array>
#include <string>
#include <vector>

#include "bttn/config.hpp"

namespace bttn {

struct SweepPointResult {
    std::string label;
    double sweep_value = 0.0;
    std::vector<RocPoint> roc;
    std::array<RateAtFpr, kReportFprTargets.size()> rates{};
};

struct ExperimentResult {
    ExperimentSpec spec;
    std::vector<SweepPointResult> points;
};

/// Runs the legit and attack batches for every sweep point and derives the
/// ROC plus the rate table at the standard FPR targets.
ExperimentResult run_experiment(const ExperimentSpec& spec);

/// Writes the result tables. CSV schemas: `threshold,fpr,tpr` per ROC file
/// and `sweep_value,fpr_target,tpr` for the rate table; the JSON mirror adds
/// the resolved configuration, master seed and tool version. Files are
/// written atomically (temp + rename). Returns the paths written.
std::vector<std::string> emit_results(const ExperimentResult& result, const std::string& dir,
                                      bool write_csv, bool write_json);

/// run_experiment + emit_results using the spec's own output settings.
std::vector<std::string> run_and_emit(const ExperimentSpec& spec);

}  // namespace bttn

#endif
