#include <doctest.h>

#include <algorithm>
#include <limits>

#include "bttn/channel.hpp"

using namespace bttn;

namespace {

ScenarioGeometry test_geometry(std::size_t n_elements) {
    ScenarioGeometry g;
    g.n_elements = n_elements;
    return g;
}

}  // namespace

TEST_CASE("path_gain collapses to unity when every scale factor is one") {
    CHECK(path_gain(1.0, 2.0, 4.0 * kPi, 1.0, 1.0) == doctest::Approx(1.0));
    CHECK(path_gain(2.0, 2.0, 4.0 * kPi, 1.0, 1.0) == doctest::Approx(0.5));
}

TEST_CASE("path_gain exponent difference at equal distance") {
    const double d = 1.7;
    const double g_direct = path_gain(d, 3.5, 0.3, 8.0, 8.0);
    const double g_ris = path_gain(d, 2.5, 0.3, 8.0, 8.0);
    CHECK(g_ris / g_direct == doctest::Approx(std::pow(d, 0.5)));
}

TEST_CASE("path_gain is strictly decreasing in distance") {
    RandomStream rng(11);
    for (int i = 0; i < 200; ++i) {
        const double d1 = 0.1 + rng.uniform(5.0);
        const double d2 = d1 + 0.01 + rng.uniform(2.0);
        const double chi = rng.uniform(4.0);
        if (chi == 0.0) continue;
        CHECK(path_gain(d2, chi, 0.33, 8.0, 8.0) < path_gain(d1, chi, 0.33, 8.0, 8.0));
    }
}

TEST_CASE("path_gain rejects non-positive inputs") {
    CHECK_THROWS_AS(path_gain(0.0, 2.0, 0.3, 1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(path_gain(1.0, 2.0, 0.0, 1.0, 1.0), std::domain_error);
}

TEST_CASE("small-scale samples have unit mean power") {
    RandomStream rng(21);
    for (double k : {0.0, 1.0, 3.0, 10.0}) {
        RicianParams p{k, 0};
        double power = 0.0;
        const int n = 100000;
        for (int i = 0; i < n; ++i) power += std::norm(sample_small_scale(p, rng));
        CHECK(power / n > 0.99);
        CHECK(power / n < 1.01);
    }
}

TEST_CASE("small-scale limits and errors") {
    RandomStream rng(22);
    RicianParams pure_los{std::numeric_limits<double>::infinity(), 0};
    CHECK(sample_small_scale(pure_los, rng) == complexd{1.0, 0.0});
    RicianParams bad{-0.5, 0};
    CHECK_THROWS_AS(sample_small_scale(bad, rng), std::domain_error);
}

TEST_CASE("realization with no RIS has empty element sequences") {
    RandomStream rng(31);
    const ChannelRealization r = sample_realization(test_geometry(0), RicianParams{}, rng);
    CHECK(r.h_tr.empty());
    CHECK(r.h_rl.empty());
    CHECK(r.h_er.empty());
    CHECK(std::abs(r.h_tl) > 0.0);
    CHECK(std::abs(r.h_st) > 0.0);
}

TEST_CASE("identical seeds give identical realizations") {
    StreamFactory f(99);
    RandomStream a = f.stream(stream_domain::kBaseline);
    RandomStream b = f.stream(stream_domain::kBaseline);
    const ChannelRealization ra = sample_realization(test_geometry(16), RicianParams{}, a);
    const ChannelRealization rb = sample_realization(test_geometry(16), RicianParams{}, b);
    CHECK(ra.h_tl == rb.h_tl);
    CHECK(ra.h_se == rb.h_se);
    REQUIRE(ra.h_tr.size() == rb.h_tr.size());
    for (std::size_t i = 0; i < ra.h_tr.size(); ++i) {
        CHECK(ra.h_tr[i] == rb.h_tr[i]);
        CHECK(ra.delta[i] == rb.delta[i]);
    }
}

TEST_CASE("mean link power matches the squared path gain") {
    const ScenarioGeometry g = test_geometry(0);
    RandomStream rng(41);
    const double pg = path_gain(g.d_TL, g.chi_direct, g.wavelength(), g.g_tag, g.g_tag);
    double power = 0.0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        power += std::norm(sample_realization(g, RicianParams{}, rng).h_tl);
    }
    CHECK(power / n == doctest::Approx(pg * pg).epsilon(0.03));
}

TEST_CASE("optimal phases: aligned and two-element hand cases") {
    ChannelRealization r;
    r.h_tr = {complexd{1.0, 0.0}};
    r.h_rl = {complexd{1.0, 0.0}};
    r.delta = {0.0};
    r.zeta = {0.0};
    CHECK(optimal_ris_phases(r).phases[0] == doctest::Approx(0.0));

    r.delta = {kPi / 3.0};
    r.zeta = {kPi / 6.0};
    CHECK(optimal_ris_phases(r).phases[0] == doctest::Approx(kPi / 2.0));

    ChannelRealization empty;
    CHECK_THROWS_AS(optimal_ris_phases(empty), std::domain_error);
}

TEST_CASE("optimal phases beat random and grid-search candidates") {
    RandomStream chan(51);
    RandomStream cand(52);
    const ChannelRealization r = sample_realization(test_geometry(4), RicianParams{}, chan);
    const RisConfig best = optimal_ris_phases(r);
    const double best_mag = std::abs(cascade_coefficient(r.h_tr, r.h_rl, best));

    // The aligned sum of magnitudes is the analytic maximum.
    double aligned = 0.0;
    for (std::size_t i = 0; i < 4; ++i) aligned += std::abs(r.h_tr[i]) * std::abs(r.h_rl[i]);
    CHECK(best_mag == doctest::Approx(aligned));

    for (int i = 0; i < 10000; ++i) {
        const RisConfig c = random_ris_phases(4, cand);
        CHECK(std::abs(cascade_coefficient(r.h_tr, r.h_rl, c)) <= best_mag + 1e-12);
    }
    // Coarse grid search over two elements of a smaller problem.
    ChannelRealization r2 = r;
    r2.h_tr.resize(2);
    r2.h_rl.resize(2);
    r2.delta.resize(2);
    r2.zeta.resize(2);
    const RisConfig best2 = optimal_ris_phases(r2);
    const double best2_mag = std::abs(cascade_coefficient(r2.h_tr, r2.h_rl, best2));
    for (int i = 0; i < 64; ++i) {
        for (int j = 0; j < 64; ++j) {
            RisConfig c;
            c.mode = RisMode::RandomUniform;
            c.phases = {i * kTwoPi / 64.0, j * kTwoPi / 64.0};
            CHECK(std::abs(cascade_coefficient(r2.h_tr, r2.h_rl, c)) <= best2_mag + 1e-12);
        }
    }
}

TEST_CASE("random phases: range, determinism, zero-length") {
    RandomStream a(61), b(61);
    const RisConfig ca = random_ris_phases(3, a);
    const RisConfig cb = random_ris_phases(3, b);
    REQUIRE(ca.phases.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(ca.phases[i] >= 0.0);
        CHECK(ca.phases[i] < kTwoPi);
        CHECK(ca.phases[i] == cb.phases[i]);
    }
    CHECK(random_ris_phases(0, a).mode == RisMode::Absent);
}

TEST_CASE("random phasing averages to the incoherent sum") {
    RandomStream chan(71);
    RandomStream cand(72);
    const ChannelRealization r = sample_realization(test_geometry(8), RicianParams{}, chan);

    double incoherent = 0.0;
    double coherent_amp = 0.0;
    for (std::size_t i = 0; i < 8; ++i) {
        const double m = std::abs(r.h_tr[i]) * std::abs(r.h_rl[i]);
        incoherent += m * m;
        coherent_amp += m;
    }
    double mean_power = 0.0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        const RisConfig c = random_ris_phases(8, cand);
        mean_power += std::norm(cascade_coefficient(r.h_tr, r.h_rl, c));
    }
    mean_power /= n;
    CHECK(mean_power == doctest::Approx(incoherent).epsilon(0.05));
    CHECK(mean_power < coherent_amp * coherent_amp * 0.75);
}

TEST_CASE("cascade coefficient basics") {
    const std::vector<complexd> ones(5, complexd{1.0, 0.0});
    RisConfig aligned;
    aligned.mode = RisMode::OptimalForLegit;
    aligned.phases.assign(5, 0.0);
    const complexd sum = cascade_coefficient(ones, ones, aligned);
    CHECK(sum.real() == doctest::Approx(5.0));
    CHECK(sum.imag() == doctest::Approx(0.0));

    CHECK(cascade_coefficient(ones, ones, RisConfig::absent()) == complexd{0.0, 0.0});

    const std::vector<complexd> h_a = {complexd{1.0, 0.0}, complexd{0.0, 1.0}};
    const std::vector<complexd> h_b = {complexd{1.0, 0.0}, complexd{1.0, 0.0}};
    RisConfig cfg;
    cfg.mode = RisMode::RandomUniform;
    cfg.phases = {0.0, -kPi / 2.0};
    const complexd v = cascade_coefficient(h_a, h_b, cfg);
    CHECK(v.real() == doctest::Approx(2.0));
    CHECK(v.imag() == doctest::Approx(0.0).epsilon(1e-12));

    RisConfig mismatched;
    mismatched.mode = RisMode::RandomUniform;
    mismatched.phases = {0.0};
    CHECK_THROWS_AS(cascade_coefficient(h_a, h_b, mismatched), std::invalid_argument);
}

TEST_CASE("N-squared law for deterministic unit channels") {
    for (std::size_t n : {std::size_t{1}, std::size_t{4}, std::size_t{16}, std::size_t{64}}) {
        ChannelRealization r;
        r.h_tr.assign(n, complexd{1.0, 0.0});
        r.h_rl.assign(n, complexd{1.0, 0.0});
        r.delta.assign(n, 0.0);
        r.zeta.assign(n, 0.0);
        const double power = std::norm(cascade_coefficient(r.h_tr, r.h_rl, optimal_ris_phases(r)));
        CHECK(power == static_cast<double>(n * n));
    }
}

TEST_CASE("geometry validation") {
    ScenarioGeometry g = test_geometry(4);
    g.d_TL = 0.0;
    CHECK_THROWS_AS(g.validate(), std::domain_error);

    g = test_geometry(0);
    g.d_EL = 0.01;  // below half a wavelength at 915 MHz
    CHECK_THROWS_AS(g.validate(), std::domain_error);

    g = test_geometry(0);
    CHECK_NOTHROW(g.validate());
}
