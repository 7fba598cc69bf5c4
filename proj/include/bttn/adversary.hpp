#ifndef BTTN_ADVERSARY_HPP
#define BTTN_ADVERSARY_HPP

#include <span>
#include <string>

#include "bttn/auth.hpp"
#include "bttn/channel.hpp"
#include "bttn/circuit.hpp"

namespace bttn {

enum class AttackKind { Impersonation, Mitm, Replay, Relay };

const char* attack_kind_name(AttackKind kind);
AttackKind attack_kind_from_name(const std::string& name);

struct AttackSpec {
    AttackKind kind = AttackKind::Impersonation;
    std::size_t n_eve = 1;
    std::string claimed_id = "TT-001";  // adversaries always claim the legitimate id

    // Relay amplification. Unit amplitude gain by default; the match-legit
    // mode re-derives the gain per realization so the relayed mean power at
    // the listener equals the legitimate one (worst case for the defender).
    double relay_gain = 1.0;
    bool relay_gain_match_legit = false;

    void validate() const;
};

/// Adversary backscatters the source field from her own position, claiming
/// the talker's identity. Direct term h_SE*h_EL; her cascade rides the phase
/// vector optimized for the legitimate link.
VoltageProfile impersonation_profile(double p_s, const ChannelRealization& real,
                                     const RisConfig& legit_ris, const CircuitParams& cp,
                                     const NoiseParams& np, RandomStream& rng);

/// Adversary retransmits a signal recorded in an earlier coherence interval.
/// Recording picks up adversary-side noise; the retransmission traverses her
/// current links to the listener.
VoltageProfile replay_profile(double p_s, const ChannelRealization& record_real,
                              const ChannelRealization& replay_real, const RisConfig& legit_ris,
                              const CircuitParams& cp, const NoiseParams& np, RandomStream& rng);

/// Live forwarding: the talker-to-adversary hop composed with the
/// adversary-to-listener hop in the same coherence interval, amplified by
/// g_relay. Adversary-side noise is forwarded with the same gain.
VoltageProfile relay_profile(double p_s, const ChannelRealization& real,
                             const RisConfig& legit_ris, const CircuitParams& cp,
                             const NoiseParams& np, double g_relay, RandomStream& rng);

/// Interception plus re-modulation from the adversary's position. The signal
/// path is the relay one; payload tampering is bookkeeping (the trial record
/// carries the tamper flag) since altered bits do not change the voltage
/// physics.
VoltageProfile mitm_profile(double p_s, const ChannelRealization& real,
                            const RisConfig& legit_ris, const CircuitParams& cp,
                            const NoiseParams& np, double g_relay, RandomStream& rng);

/// Amplitude gain that makes the relayed state-averaged noiseless power at
/// the listener equal the legitimate one for the given baseline realization.
double relay_gain_matching(double p_s, const ChannelRealization& attack_real,
                           const ChannelRealization& legit_real, const RisConfig& legit_ris,
                           const CircuitParams& cp);

/// A batch of simultaneous attackers is as strong as its best member: the
/// trial score is the minimum over per-attacker scores.
double multi_attacker_scores(std::span<const double> per_attacker_scores);

}  // namespace bttn

#endif
