#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <vector>

#include "bttn/sim.hpp"

using namespace bttn;

namespace {

TrialConfig attack_config(std::size_t n_elements, AttackKind kind, std::size_t n_trials,
                          std::uint64_t seed = 7) {
    TrialConfig cfg = default_trial_config();
    cfg.geometry.n_elements = n_elements;
    cfg.ris_mode = n_elements > 0 ? RisMode::OptimalForLegit : RisMode::Absent;
    cfg.attack = AttackSpec{};
    cfg.attack->kind = kind;
    cfg.n_trials = n_trials;
    cfg.master_seed = seed;
    return cfg;
}

double mean_score(const std::vector<TrialOutcome>& outcomes) {
    double sum = 0.0;
    for (const TrialOutcome& o : outcomes) sum += o.score;
    return sum / static_cast<double>(outcomes.size());
}

double score_variance(const std::vector<TrialOutcome>& outcomes) {
    const double m = mean_score(outcomes);
    double sum = 0.0;
    for (const TrialOutcome& o : outcomes) sum += (o.score - m) * (o.score - m);
    return sum / static_cast<double>(outcomes.size() - 1);
}

/// Two-sample Kolmogorov-Smirnov statistic. Clamped voltages put point
/// masses into the score distributions, so ties must be consumed in full
/// before the CDF gap is sampled.
double ks_statistic(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == v) ++i;
        while (j < b.size() && b[j] == v) ++j;
        const double fa = static_cast<double>(i) / a.size();
        const double fb = static_cast<double>(j) / b.size();
        d = std::max(d, std::abs(fa - fb));
    }
    return d;
}

}  // namespace

TEST_CASE("impersonation from aliased channels reproduces the legit profile") {
    TrialConfig cfg = attack_config(8, AttackKind::Impersonation, 1);
    cfg.noise = NoiseParams{0.0, 0.0, 0.0};
    const BaselineContext ctx = make_baseline(cfg);

    ChannelRealization aliased = ctx.real;
    aliased.h_se = ctx.real.h_st;
    aliased.h_el = ctx.real.h_tl;
    aliased.h_er = ctx.real.h_tr;

    RandomStream rng(301);
    const VoltageProfile prof =
        impersonation_profile(cfg.p_s, aliased, ctx.ris, cfg.circuit, cfg.noise, rng);
    for (ModState s : kModStates) {
        CHECK(prof.hrv(s) == doctest::Approx(ctx.baseline.mean.hrv(s)).epsilon(1e-12));
        CHECK(prof.dem(s) == doctest::Approx(ctx.baseline.mean.dem(s)).epsilon(1e-12));
    }
}

TEST_CASE("noiseless impersonation from distinct geometry deviates deterministically") {
    TrialConfig cfg = attack_config(8, AttackKind::Impersonation, 1);
    cfg.noise = NoiseParams{0.0, 0.0, 0.0};
    const BaselineContext ctx = make_baseline(cfg);
    StreamFactory streams(cfg.master_seed);
    RandomStream rng = streams.stream(stream_domain::kAttackTrial, 0, 0);
    const ChannelRealization eve = sample_realization(cfg.geometry, cfg.rician, rng);
    const VoltageProfile prof =
        impersonation_profile(cfg.p_s, eve, ctx.ris, cfg.circuit, cfg.noise, rng);

    // Closed-form route: state powers from the adversary's links, then the
    // rectifier chains.
    const complexd direct = eve.h_se * eve.h_el;
    const complexd cascade = eve.h_se * cascade_coefficient(eve.h_er, eve.h_rl, ctx.ris);
    double gap = 0.0;
    for (ModState s : kModStates) {
        const double p = incident_power(cfg.p_s, cfg.circuit.gamma(s), direct, cascade);
        CHECK(prof.hrv(s) == doctest::Approx(harvester_voltage(p, cfg.circuit)).epsilon(1e-12));
        CHECK(prof.dem(s) ==
              doctest::Approx(demodulator_voltage(p, cfg.circuit)).epsilon(1e-12));
        gap = std::max(gap, std::abs(prof.hrv(s) - ctx.baseline.mean.hrv(s)));
        gap = std::max(gap, std::abs(prof.dem(s) - ctx.baseline.mean.dem(s)));
    }
    CHECK(gap > 0.0);
}

TEST_CASE("impersonation scores dwarf legit scores at the default geometry") {
    TrialConfig cfg = attack_config(0, AttackKind::Impersonation, 1000);
    const std::vector<TrialOutcome> attack = run_attack_trials(cfg);
    TrialConfig legit_cfg = cfg;
    legit_cfg.attack.reset();
    const std::vector<TrialOutcome> legit = run_legit_trials(legit_cfg);
    CHECK(mean_score(attack) > 3.0 * mean_score(legit));
}

TEST_CASE("replay with unit-magnitude states and aliased links reduces to impersonation") {
    TrialConfig cfg = attack_config(0, AttackKind::Replay, 1);
    cfg.noise = NoiseParams{0.0, 0.0, 0.0};
    cfg.circuit.gamma_on = {1.0, 0.0};
    cfg.circuit.gamma_off = {-1.0, 0.0};  // equal magnitude, opposite phase
    const BaselineContext ctx = make_baseline(cfg);

    ChannelRealization aliased = ctx.real;
    aliased.h_se = ctx.real.h_st;
    aliased.h_el = ctx.real.h_tl;
    aliased.h_te = {1.0, 0.0};  // lossless tap at the talker

    RandomStream rng_a(311), rng_b(311);
    const VoltageProfile rep = replay_profile(cfg.p_s, aliased, aliased, ctx.ris, cfg.circuit,
                                              cfg.noise, rng_a);
    const VoltageProfile imp =
        impersonation_profile(cfg.p_s, aliased, ctx.ris, cfg.circuit, cfg.noise, rng_b);
    for (ModState s : kModStates) {
        CHECK(rep.hrv(s) == doctest::Approx(imp.hrv(s)).epsilon(1e-12));
        CHECK(rep.dem(s) == doctest::Approx(imp.dem(s)).epsilon(1e-12));
    }
}

TEST_CASE("recording noise widens the replay score distribution") {
    // Same draws with and without adversary-side recording noise.
    TrialConfig with_noise = attack_config(0, AttackKind::Replay, 2000);
    TrialConfig without = with_noise;
    without.noise.sigma2_e = 0.0;
    CHECK(score_variance(run_attack_trials(with_noise)) >
          score_variance(run_attack_trials(without)));

    // Amplitude-matched geometry (d_TE moved so the replayed mean level equals
    // the impersonation one): the recorded-and-forwarded path carries more
    // randomness, so its scores spread wider.
    TrialConfig replay_cfg = attack_config(0, AttackKind::Replay, 2000);
    replay_cfg.geometry.d_TE = 0.4;
    TrialConfig imp_cfg = attack_config(0, AttackKind::Impersonation, 2000);
    imp_cfg.geometry.d_TE = 0.4;
    CHECK(score_variance(run_attack_trials(replay_cfg)) >
          score_variance(run_attack_trials(imp_cfg)));
}

TEST_CASE("replay ROC stays above the diagonal") {
    TrialConfig cfg = attack_config(0, AttackKind::Replay, 2000);
    const std::vector<TrialOutcome> attack = run_attack_trials(cfg);
    TrialConfig legit_cfg = cfg;
    legit_cfg.attack.reset();
    const std::vector<TrialOutcome> legit = run_legit_trials(legit_cfg);
    const std::vector<RocPoint> roc =
        roc_curve(legit, attack, default_threshold_grid(legit, attack));
    for (double f : kReportFprTargets) {
        CHECK(tpr_at_fpr(roc, f).tpr > f);
    }
}

TEST_CASE("null relay produces a zero-signal profile that is always rejected") {
    TrialConfig cfg = attack_config(0, AttackKind::Relay, 1);
    const BaselineContext ctx = make_baseline(cfg);

    // Thresholds below the baseline mean voltages: a silent relay leaves the
    // full mean as the deviation.
    const Thresholds th{0.3 * ctx.baseline.mean.hrv(ModState::On),
                        0.3 * ctx.baseline.mean.dem(ModState::On)};
    RandomStream rng(305);
    std::size_t accepted = 0;
    for (int i = 0; i < 200; ++i) {
        const ChannelRealization real = sample_realization(cfg.geometry, cfg.rician, rng);
        const VoltageProfile prof =
            relay_profile(cfg.p_s, real, ctx.ris, cfg.circuit, cfg.noise, 0.0, rng);
        if (decide(profile_delta(prof, ctx.baseline), th)) ++accepted;
    }
    CHECK(accepted == 0);
}

TEST_CASE("power-matched relay still deviates in the noiseless limit") {
    TrialConfig cfg = attack_config(8, AttackKind::Relay, 4);
    cfg.noise = NoiseParams{0.0, 0.0, 0.0};
    cfg.attack->relay_gain_match_legit = true;
    const std::vector<TrialOutcome> outcomes = run_attack_trials_serial(cfg);
    for (const TrialOutcome& o : outcomes) CHECK(o.score > 0.0);
}

TEST_CASE("relay scores stochastically dominate legit scores") {
    TrialConfig cfg = attack_config(0, AttackKind::Relay, 1000);
    const std::vector<TrialOutcome> attack = run_attack_trials(cfg);
    TrialConfig legit_cfg = cfg;
    legit_cfg.attack.reset();
    const std::vector<TrialOutcome> legit = run_legit_trials(legit_cfg);

    std::vector<double> a, l;
    for (const TrialOutcome& o : attack) a.push_back(o.score);
    for (const TrialOutcome& o : legit) l.push_back(o.score);
    std::sort(a.begin(), a.end());
    std::sort(l.begin(), l.end());
    for (double q : {0.1, 0.25, 0.5, 0.75, 0.9}) {
        const auto ia = static_cast<std::size_t>(q * (a.size() - 1));
        const auto il = static_cast<std::size_t>(q * (l.size() - 1));
        CHECK(a[ia] > l[il]);
    }
}

TEST_CASE("mitm outcomes carry the tamper flag; relay outcomes do not") {
    const std::vector<TrialOutcome> mitm =
        run_attack_trials(attack_config(0, AttackKind::Mitm, 50));
    for (const TrialOutcome& o : mitm) {
        CHECK(o.tampered);
        CHECK(o.attack_kind == AttackKind::Mitm);
    }
    const std::vector<TrialOutcome> relay =
        run_attack_trials(attack_config(0, AttackKind::Relay, 50));
    for (const TrialOutcome& o : relay) {
        CHECK_FALSE(o.tampered);
        CHECK(o.attack_kind == AttackKind::Relay);
    }
}

TEST_CASE("mitm and relay scores coincide in distribution") {
    // Identical parameters and seed: the signal path is shared, so the scores
    // agree trial for trial; only the bookkeeping differs.
    const std::vector<TrialOutcome> mitm =
        run_attack_trials(attack_config(0, AttackKind::Mitm, 20000, 17));
    const std::vector<TrialOutcome> relay =
        run_attack_trials(attack_config(0, AttackKind::Relay, 20000, 17));
    REQUIRE(mitm.size() == relay.size());
    for (std::size_t i = 0; i < mitm.size(); ++i) CHECK(mitm[i].score == relay[i].score);

    // Two-sample KS on disjoint trial halves (independent draws of the same
    // conditional distribution), 5% critical value.
    std::vector<double> a, b;
    for (std::size_t i = 0; i < mitm.size() / 2; ++i) a.push_back(mitm[i].score);
    for (std::size_t i = relay.size() / 2; i < relay.size(); ++i) b.push_back(relay[i].score);
    const double d = ks_statistic(a, b);
    const double critical =
        1.358 * std::sqrt(static_cast<double>(a.size() + b.size()) /
                          (static_cast<double>(a.size()) * static_cast<double>(b.size())));
    CHECK(d < critical);
}

TEST_CASE("noiseless mitm deviates from the baseline for generic geometry") {
    TrialConfig cfg = attack_config(8, AttackKind::Mitm, 4);
    cfg.noise = NoiseParams{0.0, 0.0, 0.0};
    const std::vector<TrialOutcome> outcomes = run_attack_trials_serial(cfg);
    for (const TrialOutcome& o : outcomes) CHECK(o.score > 0.0);
}

TEST_CASE("multi-attacker reduction takes the minimum") {
    const std::vector<double> one = {4.2};
    CHECK(multi_attacker_scores(one) == 4.2);
    const std::vector<double> three = {3.0, 1.5, 7.0};
    CHECK(multi_attacker_scores(three) == 1.5);
    CHECK_THROWS_AS(multi_attacker_scores(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("more attackers can only raise the acceptance rate") {
    TrialConfig cfg2 = attack_config(0, AttackKind::Impersonation, 2000);
    cfg2.attack->n_eve = 2;
    TrialConfig cfg4 = cfg2;
    cfg4.attack->n_eve = 4;
    const std::vector<TrialOutcome> two = run_attack_trials(cfg2);
    const std::vector<TrialOutcome> four = run_attack_trials(cfg4);
    // Attacker streams are indexed per (trial, attacker), so the first two
    // attackers of the four-strong batch repeat the two-strong draws and the
    // min rule makes dominance pathwise.
    for (double t : {0.5, 1.0, 2.0, 5.0, 10.0, 50.0}) {
        CHECK(fpr(four, t) >= fpr(two, t));
    }
}

TEST_CASE("a closer adversary is harder to reject under an optimal RIS") {
    std::vector<double> means;
    for (double d_el : {0.2, 0.4, 0.75, 1.2}) {
        TrialConfig cfg = attack_config(100, AttackKind::Impersonation, 1000);
        cfg.geometry.d_EL = d_el;
        means.push_back(mean_score(run_attack_trials(cfg)));
    }
    for (std::size_t i = 0; i + 1 < means.size(); ++i) CHECK(means[i] <= means[i + 1]);
}

TEST_CASE("an optimal RIS widens the attack/legit separation") {
    auto effect_size = [](std::size_t n_elements) {
        TrialConfig cfg = attack_config(n_elements, AttackKind::Impersonation, 1000);
        const std::vector<TrialOutcome> attack = run_attack_trials(cfg);
        TrialConfig legit_cfg = cfg;
        legit_cfg.attack.reset();
        const std::vector<TrialOutcome> legit = run_legit_trials(legit_cfg);
        const double pooled =
            std::sqrt(0.5 * (score_variance(attack) + score_variance(legit)));
        return (mean_score(attack) - mean_score(legit)) / pooled;
    };
    CHECK(effect_size(100) > effect_size(0));
}
