#include "bttn/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bttn {

const char* attack_kind_name(AttackKind kind) {
    switch (kind) {
        case AttackKind::Impersonation: return "impersonation";
        case AttackKind::Mitm: return "mitm";
        case AttackKind::Replay: return "replay";
        case AttackKind::Relay: return "relay";
    }
    return "unknown";
}

AttackKind attack_kind_from_name(const std::string& name) {
    if (name == "impersonation") return AttackKind::Impersonation;
    if (name == "mitm") return AttackKind::Mitm;
    if (name == "replay") return AttackKind::Replay;
    if (name == "relay") return AttackKind::Relay;
    throw std::invalid_argument("unknown attack kind '" + name + "'");
}

void AttackSpec::validate() const {
    if (n_eve < 1) throw std::domain_error("attack: n_eve must be >= 1");
    if (!(relay_gain >= 0.0)) throw std::domain_error("attack: relay_gain must be >= 0");
}

VoltageProfile impersonation_profile(double p_s, const ChannelRealization& real,
                                     const RisConfig& legit_ris, const CircuitParams& cp,
                                     const NoiseParams& np, RandomStream& rng) {
    const complexd direct = real.h_se * real.h_el;
    const complexd cascade = real.h_se * cascade_coefficient(real.h_er, real.h_rl, legit_ris);
    return measure_profile(p_s, cp, direct, cascade, np.sigma2_l, rng);
}

VoltageProfile replay_profile(double p_s, const ChannelRealization& record_real,
                              const ChannelRealization& replay_real, const RisConfig& legit_ris,
                              const CircuitParams& cp, const NoiseParams& np, RandomStream& rng) {
    const complexd recorded_base = std::sqrt(p_s) * record_real.h_st * record_real.h_te;
    const complexd forward_path =
        replay_real.h_el + cascade_coefficient(replay_real.h_er, replay_real.h_rl, legit_ris);
    std::array<complexd, 2> amp;
    for (ModState s : kModStates) {
        const complexd a_rec = recorded_base * cp.gamma(s) + rng.cnormal(np.sigma2_e);
        amp[static_cast<std::size_t>(s)] = a_rec * forward_path;
    }
    return profile_from_amplitudes(amp, cp, np.sigma2_l, rng);
}

VoltageProfile relay_profile(double p_s, const ChannelRealization& real,
                             const RisConfig& legit_ris, const CircuitParams& cp,
                             const NoiseParams& np, double g_relay, RandomStream& rng) {
    const complexd tapped_base = std::sqrt(p_s) * real.h_st * real.h_te;
    const complexd forward_path =
        real.h_el + cascade_coefficient(real.h_er, real.h_rl, legit_ris);
    std::array<complexd, 2> amp;
    for (ModState s : kModStates) {
        const complexd tapped = tapped_base * cp.gamma(s) + rng.cnormal(np.sigma2_e);
        amp[static_cast<std::size_t>(s)] = g_relay * tapped * forward_path;
    }
    return profile_from_amplitudes(amp, cp, np.sigma2_l, rng);
}

VoltageProfile mitm_profile(double p_s, const ChannelRealization& real,
                            const RisConfig& legit_ris, const CircuitParams& cp,
                            const NoiseParams& np, double g_relay, RandomStream& rng) {
    return relay_profile(p_s, real, legit_ris, cp, np, g_relay, rng);
}

double relay_gain_matching(double p_s, const ChannelRealization& attack_real,
                           const ChannelRealization& legit_real, const RisConfig& legit_ris,
                           const CircuitParams& cp) {
    const complexd legit_direct = legit_real.h_st * legit_real.h_tl;
    const complexd legit_cascade =
        legit_real.h_st * cascade_coefficient(legit_real.h_tr, legit_real.h_rl, legit_ris);
    const complexd tapped_base = std::sqrt(p_s) * attack_real.h_st * attack_real.h_te;
    const complexd forward_path =
        attack_real.h_el + cascade_coefficient(attack_real.h_er, attack_real.h_rl, legit_ris);

    double legit_power = 0.0;
    double relay_power = 0.0;
    for (ModState s : kModStates) {
        legit_power += incident_power(p_s, cp.gamma(s), legit_direct, legit_cascade);
        relay_power += std::norm(tapped_base * cp.gamma(s) * forward_path);
    }
    if (relay_power <= 0.0) return 0.0;
    return std::sqrt(legit_power / relay_power);
}

double multi_attacker_scores(std::span<const double> per_attacker_scores) {
    if (per_attacker_scores.empty()) {
        throw std::invalid_argument("multi_attacker_scores: empty score sequence");
    }
    return *std::min_element(per_attacker_scores.begin(), per_attacker_scores.end());
}

}  // namespace bttn
