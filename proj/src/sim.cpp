#include "bttn/sim.hpp"

#include <algorithm>
#include <cmath>

namespace bttn {

namespace {

complexd legit_direct_amp(const ChannelRealization& r) { return r.h_st * r.h_tl; }

complexd legit_cascade_amp(const ChannelRealization& r, const RisConfig& ris) {
    return r.h_st * cascade_coefficient(r.h_tr, r.h_rl, ris);
}

/// Ages the scattered component of every link with correlation rho while
/// preserving the Rician statistics; the LOS mean is untouched.
ChannelRealization drift_realization(const ChannelRealization& base, const ScenarioGeometry& geom,
                                     const RicianParams& p, double rho, RandomStream& rng) {
    const double lambda = geom.wavelength();
    const double k = p.k_factor;
    const double los_frac = std::isinf(k) ? 1.0 : std::sqrt(k / (k + 1.0));
    const double scat_var = std::isinf(k) ? 0.0 : 1.0 / (k + 1.0);
    const double fresh_w = std::sqrt(std::max(0.0, 1.0 - rho * rho));

    auto age = [&](complexd h, double d, double chi, double g_rx) {
        const double pg = path_gain(d, chi, lambda, geom.g_tag, g_rx);
        const complexd mu = pg * los_frac;
        return mu + rho * (h - mu) + fresh_w * pg * rng.cnormal(scat_var);
    };

    ChannelRealization r;
    r.h_st = age(base.h_st, geom.d_ST, geom.chi_direct, geom.g_tag);
    r.h_sl = age(base.h_sl, geom.d_SL, geom.chi_direct, geom.g_tag);
    r.h_tl = age(base.h_tl, geom.d_TL, geom.chi_direct, geom.g_tag);
    r.h_se = age(base.h_se, geom.d_SE, geom.chi_direct, geom.g_tag);
    r.h_el = age(base.h_el, geom.d_EL, geom.chi_direct, geom.g_tag);
    r.h_te = age(base.h_te, geom.d_TE, geom.chi_direct, geom.g_tag);

    const std::size_t n = base.n_elements();
    r.h_tr.reserve(n);
    r.h_rl.reserve(n);
    r.h_er.reserve(n);
    r.delta.reserve(n);
    r.zeta.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        r.h_tr.push_back(age(base.h_tr[i], geom.d_TR, geom.chi_ris, geom.g_ris_element));
        r.h_rl.push_back(age(base.h_rl[i], geom.d_RL, geom.chi_ris, geom.g_ris_element));
        r.h_er.push_back(age(base.h_er[i], geom.d_ER, geom.chi_ris, geom.g_ris_element));
        r.delta.push_back(wrap_angle(-std::arg(r.h_tr.back())));
        r.zeta.push_back(wrap_angle(-std::arg(r.h_rl.back())));
    }
    return r;
}

TrialOutcome legit_trial(const TrialConfig& cfg, const BaselineContext& ctx,
                         const StreamFactory& streams, std::uint64_t trial) {
    RandomStream rs = streams.stream(stream_domain::kLegitTrial, trial);
    const ChannelRealization* real = &ctx.real;
    ChannelRealization drifted;
    if (cfg.channel_drift) {
        drifted = drift_realization(ctx.real, cfg.geometry, cfg.rician, cfg.drift_rho, rs);
        real = &drifted;
    }
    const VoltageProfile prof =
        measure_profile(cfg.p_s, cfg.circuit, legit_direct_amp(*real),
                        legit_cascade_amp(*real, ctx.ris), cfg.noise.sigma2_l, rs);
    TrialOutcome out;
    out.label = TrialLabel::Legit;
    out.score = normalized_score(profile_delta(prof, ctx.baseline), ctx.baseline);
    return out;
}

TrialOutcome attack_trial(const TrialConfig& cfg, const BaselineContext& ctx,
                          const StreamFactory& streams, std::uint64_t trial) {
    const AttackSpec& spec = *cfg.attack;
    std::vector<double> scores;
    scores.reserve(spec.n_eve);
    for (std::size_t a = 0; a < spec.n_eve; ++a) {
        RandomStream rs = streams.stream(stream_domain::kAttackTrial, trial, a);
        const ChannelRealization real = sample_realization(cfg.geometry, cfg.rician, rs);
        VoltageProfile prof;
        switch (spec.kind) {
            case AttackKind::Impersonation:
                prof = impersonation_profile(cfg.p_s, real, ctx.ris, cfg.circuit, cfg.noise, rs);
                break;
            case AttackKind::Replay: {
                const ChannelRealization replay_real =
                    sample_realization(cfg.geometry, cfg.rician, rs);
                prof = replay_profile(cfg.p_s, real, replay_real, ctx.ris, cfg.circuit, cfg.noise,
                                      rs);
                break;
            }
            case AttackKind::Relay:
            case AttackKind::Mitm: {
                const double g = spec.relay_gain_match_legit
                                     ? relay_gain_matching(cfg.p_s, real, ctx.real, ctx.ris,
                                                           cfg.circuit)
                                     : spec.relay_gain;
                prof = spec.kind == AttackKind::Relay
                           ? relay_profile(cfg.p_s, real, ctx.ris, cfg.circuit, cfg.noise, g, rs)
                           : mitm_profile(cfg.p_s, real, ctx.ris, cfg.circuit, cfg.noise, g, rs);
                break;
            }
        }
        scores.push_back(normalized_score(profile_delta(prof, ctx.baseline), ctx.baseline));
    }
    TrialOutcome out;
    out.label = TrialLabel::Attack;
    out.score = multi_attacker_scores(scores);
    out.attack_kind = spec.kind;
    out.tampered = spec.kind == AttackKind::Mitm;
    return out;
}

template <typename TrialFn>
std::vector<TrialOutcome> run_batch(const TrialConfig& cfg, TrialFn&& one_trial, bool parallel) {
    std::vector<TrialOutcome> out(cfg.n_trials);
    const auto n = static_cast<long long>(cfg.n_trials);
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (long long t = 0; t < n; ++t) out[t] = one_trial(static_cast<std::uint64_t>(t));
    } else {
        for (long long t = 0; t < n; ++t) out[t] = one_trial(static_cast<std::uint64_t>(t));
    }
    return out;
}

std::vector<TrialOutcome> run_legit(const TrialConfig& cfg, bool parallel) {
    cfg.validate();
    if (cfg.attack) throw std::invalid_argument("run_legit_trials: attack must be absent");
    const BaselineContext ctx = make_baseline(cfg);
    const StreamFactory streams(cfg.master_seed);
    return run_batch(cfg, [&](std::uint64_t t) { return legit_trial(cfg, ctx, streams, t); },
                     parallel);
}

std::vector<TrialOutcome> run_attack(const TrialConfig& cfg, bool parallel) {
    cfg.validate();
    if (!cfg.attack) throw std::invalid_argument("run_attack_trials: attack spec required");
    const BaselineContext ctx = make_baseline(cfg);
    const StreamFactory streams(cfg.master_seed);
    return run_batch(cfg, [&](std::uint64_t t) { return attack_trial(cfg, ctx, streams, t); },
                     parallel);
}

double accepted_fraction(std::span<const TrialOutcome> outcomes, double threshold,
                         const char* what) {
    if (outcomes.empty()) throw std::domain_error(std::string(what) + ": empty outcome set");
    std::size_t accepted = 0;
    for (const TrialOutcome& o : outcomes) {
        if (o.score <= threshold) ++accepted;
    }
    return static_cast<double>(accepted) / static_cast<double>(outcomes.size());
}

}  // namespace

void TrialConfig::validate() const {
    geometry.validate();
    circuit.validate();
    noise.validate();
    if (rician.k_factor < 0.0) throw std::domain_error("rician: k_factor must be >= 0");
    if (!(p_s > 0.0)) throw std::domain_error("config: p_s must be > 0");
    if (n_trials < 1) throw std::domain_error("config: n_trials must be >= 1");
    if (pilot_count < 2) throw std::domain_error("config: pilot_count must be >= 2");
    if (drift_rho < 0.0 || drift_rho > 1.0) {
        throw std::domain_error("config: drift_rho must be in [0, 1]");
    }
    if (ris_mode == RisMode::RandomUniform) {
        throw std::domain_error("config: ris_mode must be optimal or absent");
    }
    if (attack) attack->validate();
}

BaselineContext make_baseline(const TrialConfig& cfg) {
    const StreamFactory streams(cfg.master_seed);
    RandomStream rs = streams.stream(stream_domain::kBaseline);

    BaselineContext ctx;
    ctx.real = sample_realization(cfg.geometry, cfg.rician, rs);
    ctx.ris = (cfg.ris_mode == RisMode::OptimalForLegit && cfg.geometry.n_elements > 0)
                  ? optimal_ris_phases(ctx.real)
                  : RisConfig::absent();

    if (cfg.enforce_min_power) {
        double p_max = 0.0;
        for (ModState s : kModStates) {
            p_max = std::max(p_max, incident_power(cfg.p_s, cfg.circuit.gamma(s),
                                                   legit_direct_amp(ctx.real),
                                                   legit_cascade_amp(ctx.real, ctx.ris)));
        }
        if (p_max < dbm_to_watts(cfg.min_power_dbm)) {
            throw SimError("tag below minimum operating power (" +
                           std::to_string(cfg.min_power_dbm) + " dBm)");
        }
    }

    std::vector<VoltageProfile> pilots;
    pilots.reserve(cfg.pilot_count);
    const complexd direct = legit_direct_amp(ctx.real);
    const complexd cascade = legit_cascade_amp(ctx.real, ctx.ris);
    for (std::size_t i = 0; i < cfg.pilot_count; ++i) {
        pilots.push_back(
            measure_profile(cfg.p_s, cfg.circuit, direct, cascade, cfg.noise.sigma2_l, rs));
    }
    ctx.baseline = establish_baseline(pilots);
    return ctx;
}

std::vector<TrialOutcome> run_legit_trials(const TrialConfig& cfg) { return run_legit(cfg, true); }

std::vector<TrialOutcome> run_legit_trials_serial(const TrialConfig& cfg) {
    return run_legit(cfg, false);
}

std::vector<TrialOutcome> run_attack_trials(const TrialConfig& cfg) {
    return run_attack(cfg, true);
}

std::vector<TrialOutcome> run_attack_trials_serial(const TrialConfig& cfg) {
    return run_attack(cfg, false);
}

double tpr(std::span<const TrialOutcome> legit_outcomes, double threshold) {
    return accepted_fraction(legit_outcomes, threshold, "tpr");
}

double fpr(std::span<const TrialOutcome> attack_outcomes, double threshold) {
    return accepted_fraction(attack_outcomes, threshold, "fpr");
}

std::vector<double> default_threshold_grid(std::span<const TrialOutcome> legit_outcomes,
                                           std::span<const TrialOutcome> attack_outcomes,
                                           std::size_t n) {
    double max_score = 0.0;
    for (const TrialOutcome& o : legit_outcomes) max_score = std::max(max_score, o.score);
    for (const TrialOutcome& o : attack_outcomes) max_score = std::max(max_score, o.score);

    const double lo = 1e-3;
    const double hi = std::max(max_score * 1.05, lo * 1.05);
    std::vector<double> grid;
    grid.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double f = static_cast<double>(i) / static_cast<double>(n - 1);
        grid.push_back(lo * std::pow(hi / lo, f));
    }
    return grid;
}

std::vector<RocPoint> roc_curve(std::span<const TrialOutcome> legit_outcomes,
                                std::span<const TrialOutcome> attack_outcomes,
                                std::span<const double> grid) {
    if (legit_outcomes.empty() || attack_outcomes.empty()) {
        throw std::domain_error("roc_curve: outcome sets must be nonempty");
    }
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (grid[i] < grid[i - 1]) {
            throw std::invalid_argument("roc_curve: threshold grid must be ascending");
        }
    }
    std::vector<double> legit_scores, attack_scores;
    legit_scores.reserve(legit_outcomes.size());
    attack_scores.reserve(attack_outcomes.size());
    for (const TrialOutcome& o : legit_outcomes) legit_scores.push_back(o.score);
    for (const TrialOutcome& o : attack_outcomes) attack_scores.push_back(o.score);
    std::sort(legit_scores.begin(), legit_scores.end());
    std::sort(attack_scores.begin(), attack_scores.end());

    auto frac_leq = [](const std::vector<double>& sorted, double t) {
        const auto it = std::upper_bound(sorted.begin(), sorted.end(), t);
        return static_cast<double>(it - sorted.begin()) / static_cast<double>(sorted.size());
    };

    std::vector<RocPoint> roc;
    roc.reserve(grid.size());
    for (double t : grid) {
        roc.push_back({t, frac_leq(attack_scores, t), frac_leq(legit_scores, t)});
    }
    return roc;
}

RateAtFpr tpr_at_fpr(std::span<const RocPoint> roc, double fpr_target) {
    if (roc.empty()) throw std::domain_error("tpr_at_fpr: empty roc");
    if (fpr_target < 0.0 || fpr_target > 1.0) {
        throw std::domain_error("tpr_at_fpr: target must be in [0, 1]");
    }
    // Upper envelope: one point per distinct fpr, keeping the best tpr.
    std::vector<RocPoint> env;
    env.reserve(roc.size());
    for (const RocPoint& p : roc) {
        if (!env.empty() && p.fpr == env.back().fpr) {
            env.back().tpr = std::max(env.back().tpr, p.tpr);
        } else {
            env.push_back(p);
        }
    }
    if (fpr_target <= env.front().fpr) {
        return {env.front().tpr, fpr_target < env.front().fpr};
    }
    if (fpr_target >= env.back().fpr) {
        return {env.back().tpr, fpr_target > env.back().fpr};
    }
    for (std::size_t i = 1; i < env.size(); ++i) {
        if (fpr_target <= env[i].fpr) {
            if (fpr_target == env[i].fpr) return {env[i].tpr, false};
            const RocPoint& a = env[i - 1];
            const RocPoint& b = env[i];
            const double w = (fpr_target - a.fpr) / (b.fpr - a.fpr);
            return {a.tpr + w * (b.tpr - a.tpr), false};
        }
    }
    return {env.back().tpr, false};  // unreachable
}

BinomialCi binomial_ci(std::size_t successes, std::size_t trials, double z) {
    if (trials == 0) throw std::domain_error("binomial_ci: trials must be >= 1");
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

TrialConfig default_trial_config() {
    TrialConfig cfg;
    cfg.geometry = ScenarioGeometry{};  // defaults carry the indoor layout
    cfg.rician = RicianParams{};
    cfg.circuit = CircuitParams{};
    cfg.circuit.k_hrv = 4e6;  // rectifier constant incl. matching-network boost
    cfg.circuit.k_dem = 4e6;
    cfg.noise = NoiseParams{};
    cfg.p_s = dbm_to_watts(1.0);
    cfg.ris_mode = RisMode::Absent;
    cfg.n_trials = 10000;
    cfg.master_seed = 1;
    cfg.pilot_count = 100;
    return cfg;
}

}  // namespace bttn
