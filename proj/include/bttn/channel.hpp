#ifndef BTTN_CHANNEL_HPP
#define BTTN_CHANNEL_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "bttn/common.hpp"
#include "bttn/rng.hpp"

namespace bttn {

/// Node placement and propagation constants for one scenario.
/// S = RF source, T = talker tag, L = listener tag, R = RIS, E = adversary.
struct ScenarioGeometry {
    double d_ST = 1.0;  // meters
    double d_SL = 1.0;
    double d_TL = 1.5;
    double d_TR = 1.0;
    double d_RL = 1.0;
    double d_SE = 1.0;
    double d_EL = 0.75;
    double d_TE = 0.75;
    double d_ER = 0.70;

    double chi_direct = 3.5;  // path-loss exponent, tag-to-tag and source links
    double chi_ris = 2.5;     // path-loss exponent, RIS-assisted hops

    double f_c = 915e6;  // carrier frequency, Hz
    double g_tag = 8.0;  // linear antenna gain shared by T, L, E and the source
    // Effective per-element gain product for RIS hops; absorbs the element
    // aperture the hop-distance model leaves out.
    double g_ris_element = 32.0;

    std::size_t n_elements = 0;  // RIS size; 0 means no RIS present

    double wavelength() const { return kSpeedOfLight / f_c; }

    /// Throws std::domain_error on the first violated constraint, naming it.
    void validate() const;
};

struct RicianParams {
    double k_factor = 1.0;  // linear LOS-to-scatter power ratio
    std::uint64_t seed = 1;
};

/// One coherence-interval draw of every link coefficient. Path loss is folded
/// into each coefficient exactly once (see path_gain); downstream power
/// expressions therefore use unit-distance denominators.
struct ChannelRealization {
    complexd h_st, h_sl, h_tl;  // source/tag links
    complexd h_se, h_el, h_te;  // adversary links
    std::vector<complexd> h_tr, h_rl, h_er;  // per-element RIS links
    std::vector<double> delta, zeta;  // element phase decompositions, radians

    std::size_t n_elements() const { return h_tr.size(); }
};

enum class RisMode { OptimalForLegit, RandomUniform, Absent };

struct RisConfig {
    std::vector<double> phases;  // radians in [0, 2*pi)
    RisMode mode = RisMode::Absent;

    static RisConfig absent() { return {}; }
};

/// Amplitude-domain link gain: sqrt(g_tx*g_rx) * (lambda/4pi) * d^(-chi/2).
/// Deterministic and strictly decreasing in d.
double path_gain(double d, double chi, double lambda, double g_tx, double g_rx);

/// Unit-mean-power Rician small-scale sample:
/// sqrt(K/(K+1)) + CN(0, 1/(K+1)). K may be +infinity (pure LOS).
complexd sample_small_scale(const RicianParams& p, RandomStream& rng);

/// Draws every link of a realization; independent across links and elements.
ChannelRealization sample_realization(const ScenarioGeometry& geom, const RicianParams& p,
                                      RandomStream& rng);

/// Phase vector that aligns every element of the talker-to-listener cascade:
/// phi_n = (delta_n + zeta_n) mod 2*pi, making the cascade sum real,
/// nonnegative and maximal.
RisConfig optimal_ris_phases(const ChannelRealization& real);

/// I.i.d. uniform phases on [0, 2*pi); n = 0 yields an absent config.
RisConfig random_ris_phases(std::size_t n, RandomStream& rng);

/// Sum over elements of h_a[n]*h_b[n]*e^{j*phi_n}; absent config contributes
/// exactly zero.
complexd cascade_coefficient(std::span<const complexd> h_a, std::span<const complexd> h_b,
                             const RisConfig& cfg);

}  // namespace bttn

#endif
