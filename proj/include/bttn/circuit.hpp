#ifndef BTTN_CIRCUIT_HPP
#define BTTN_CIRCUIT_HPP

#include <array>
#include <cstddef>

#include "bttn/common.hpp"
#include "bttn/rng.hpp"

namespace bttn {

enum class ModState : std::size_t { On = 0, Off = 1 };
inline constexpr std::array<ModState, 2> kModStates = {ModState::On, ModState::Off};

/// Tag front-end parameters: diode drop, rectifier proportionality constants,
/// harvester/demodulator power split, divider ratio and the per-state antenna
/// reflection coefficients.
struct CircuitParams {
    double v_d = 0.3;            // diode forward drop, volts
    double k_hrv = 1.0;          // volts^2 per watt
    double k_dem = 1.0;          // volts^2 per watt
    double alpha = 0.5;          // fraction of incident power to the harvester
    double divider_ratio = 0.5;  // R2/(R1+R2)
    complexd gamma_on{0.9, 0.0};
    complexd gamma_off{0.1, 0.0};

    complexd gamma(ModState s) const { return s == ModState::On ? gamma_on : gamma_off; }

    void validate() const;
};

/// Receiver noise powers, watts.
struct NoiseParams {
    double sigma2_l = 1e-7;  // listener tag (-40 dBm)
    double sigma2_t = 1e-7;  // talker tag (-40 dBm)
    double sigma2_e = 1e-6;  // adversary (-30 dBm)

    void validate() const;
};

/// Output voltages of both circuit branches per modulation state; the
/// physical-layer fingerprint one measurement produces.
struct VoltageProfile {
    std::array<double, 2> v_hrv{0.0, 0.0};  // indexed by ModState
    std::array<double, 2> v_dem{0.0, 0.0};

    double hrv(ModState s) const { return v_hrv[static_cast<std::size_t>(s)]; }
    double dem(ModState s) const { return v_dem[static_cast<std::size_t>(s)]; }
    double& hrv(ModState s) { return v_hrv[static_cast<std::size_t>(s)]; }
    double& dem(ModState s) { return v_dem[static_cast<std::size_t>(s)]; }
};

/// Load-vs-antenna mismatch: (z_load - conj(z_antenna)) / (z_load + conj(z_antenna)).
complexd reflection_coefficient(complexd z_load, complexd z_antenna);

/// Differential radar cross-section between two modulation states:
/// (lambda^2 g^2 / 4pi) * |gamma_1 - gamma_2|^2, square meters.
double differential_rcs(double lambda, double g_tag, complexd gamma_1, complexd gamma_2);

/// Incident power at the listener in one modulation state:
/// p_s * |gamma_i| * (|direct_amp|^2 + |cascade_amp|^2). The amplitudes carry
/// their path loss already, so no distance denominators appear here.
double incident_power(double p_s, complexd gamma_i, complexd direct_amp, complexd cascade_amp);

/// Two-stage charge-pump output, clamped at the diode turn-on:
/// max(0, 4*sqrt(k_hrv*alpha*p_inc) - 4*v_d).
double harvester_voltage(double p_inc, const CircuitParams& cp);

/// Envelope-detector output after the divider, clamped at turn-on:
/// max(0, (sqrt(k_dem*(1-alpha)*p_inc) - 2*v_d) * divider_ratio).
double demodulator_voltage(double p_inc, const CircuitParams& cp);

/// Measures a profile from given per-state received amplitudes: each circuit
/// branch sees the amplitude perturbed by an independent CN(0, sigma2) sample
/// before squaring. Draw order: per state, harvester branch then demodulator.
VoltageProfile profile_from_amplitudes(const std::array<complexd, 2>& state_amp,
                                       const CircuitParams& cp, double sigma2,
                                       RandomStream& rng);

/// One noisy measurement of the legitimate-link profile. The noiseless
/// amplitude per state is sqrt(incident_power(...)); sigma2 = 0 reproduces the
/// closed-form voltages exactly.
VoltageProfile measure_profile(double p_s, const CircuitParams& cp, complexd direct_amp,
                               complexd cascade_amp, double sigma2, RandomStream& rng);

}  // namespace bttn

#endif
