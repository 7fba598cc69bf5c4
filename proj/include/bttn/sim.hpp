#ifndef BTTN_SIM_HPP
#define BTTN_SIM_HPP

#include <optional>
#include <span>
#include <vector>

#include "bttn/adversary.hpp"
#include "bttn/auth.hpp"
#include "bttn/channel.hpp"
#include "bttn/circuit.hpp"

namespace bttn {

struct SimError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Everything one batch of trials needs. Trials derive their random streams
/// from (master_seed, trial index, attacker index), so batches are
/// reproducible and independent of scheduling order.
struct TrialConfig {
    ScenarioGeometry geometry;
    RicianParams rician;
    CircuitParams circuit;
    NoiseParams noise;

    double p_s = dbm_to_watts(1.0);  // watts
    RisMode ris_mode = RisMode::Absent;
    std::optional<AttackSpec> attack;

    std::size_t n_trials = 10000;
    std::uint64_t master_seed = 1;
    std::size_t pilot_count = 100;

    // The legitimate channel is held between initialization and
    // authentication (the location signature the scheme relies on). The drift
    // switch ages the scattered component with correlation drift_rho instead.
    bool channel_drift = false;
    double drift_rho = 0.98;

    // Optional gate on the minimum incident power needed for tag operation.
    bool enforce_min_power = false;
    double min_power_dbm = -15.0;

    double r_s = 1.0;  // spectral efficiency, bps/Hz; carried for provenance only

    void validate() const;
};

enum class TrialLabel { Legit, Attack };

struct TrialOutcome {
    TrialLabel label = TrialLabel::Legit;
    double score = 0.0;
    std::optional<AttackKind> attack_kind;
    bool tampered = false;
};

struct RocPoint {
    double threshold = 0.0;
    double fpr = 0.0;
    double tpr = 0.0;
};

/// Baseline channel realization, the RIS configuration frozen at
/// initialization, and the pilot-derived baseline profile.
struct BaselineContext {
    ChannelRealization real;
    RisConfig ris;
    BaselineProfile baseline;
};

BaselineContext make_baseline(const TrialConfig& cfg);

/// Legitimate-talker authentication attempts, one outcome per trial.
/// The parallel entry point and the serial reference produce bit-identical
/// outcome sequences for the same config.
std::vector<TrialOutcome> run_legit_trials(const TrialConfig& cfg);
std::vector<TrialOutcome> run_legit_trials_serial(const TrialConfig& cfg);

/// Adversarial attempts under cfg.attack; the per-trial score is the best
/// (minimum) score among the n_eve attackers.
std::vector<TrialOutcome> run_attack_trials(const TrialConfig& cfg);
std::vector<TrialOutcome> run_attack_trials_serial(const TrialConfig& cfg);

/// Fraction of legitimate trials accepted at threshold t (accept iff
/// score <= t).
double tpr(std::span<const TrialOutcome> legit_outcomes, double threshold);

/// Fraction of attack trials mistakenly accepted at threshold t.
double fpr(std::span<const TrialOutcome> attack_outcomes, double threshold);

/// Logarithmic grid of n thresholds spanning [1e-3, max observed score * 1.05].
std::vector<double> default_threshold_grid(std::span<const TrialOutcome> legit_outcomes,
                                           std::span<const TrialOutcome> attack_outcomes,
                                           std::size_t n = 512);

/// One (threshold, fpr, tpr) point per grid value; both rates are
/// nondecreasing along an ascending grid.
std::vector<RocPoint> roc_curve(std::span<const TrialOutcome> legit_outcomes,
                                std::span<const TrialOutcome> attack_outcomes,
                                std::span<const double> grid);

struct RateAtFpr {
    double tpr = 0.0;
    bool extrapolated = false;  // target fpr outside the achieved range
};

/// Linear interpolation of the ROC's upper envelope at the target fpr.
RateAtFpr tpr_at_fpr(std::span<const RocPoint> roc, double fpr_target);

struct BinomialCi {
    double lo = 0.0;
    double hi = 1.0;
};

/// Wilson score interval, 95% by default (z = 1.96).
BinomialCi binomial_ci(std::size_t successes, std::size_t trials, double z = 1.96);

/// The shipped default parameter set: indoor scenario with one-meter source
/// offsets, the adversary midway between the tags, -40 dBm receiver noise and
/// a rectifier constant placing the working voltages in the volt range.
TrialConfig default_trial_config();

/// FPR targets reported by the rate tables.
inline constexpr std::array<double, 4> kReportFprTargets = {0.15, 0.20, 0.25, 0.30};

}  // namespace bttn

#endif
