#include "bttn/circuit.hpp"

#include <cmath>
#include <stdexcept>

namespace bttn {

void CircuitParams::validate() const {
    if (v_d < 0.0) throw std::domain_error("circuit: v_d must be >= 0");
    if (!(k_hrv > 0.0) || !(k_dem > 0.0)) {
        throw std::domain_error("circuit: k_hrv and k_dem must be > 0");
    }
    if (alpha < 0.0 || alpha > 1.0) throw std::domain_error("circuit: alpha must be in [0, 1]");
    if (!(divider_ratio > 0.0) || divider_ratio > 1.0) {
        throw std::domain_error("circuit: divider_ratio must be in (0, 1]");
    }
    if (std::abs(gamma_on) > 1.0 + 1e-12 || std::abs(gamma_off) > 1.0 + 1e-12) {
        throw std::domain_error("circuit: |gamma| must be <= 1 for every state");
    }
    if (gamma_on == gamma_off) {
        throw std::domain_error("circuit: gamma_on and gamma_off must differ");
    }
}

void NoiseParams::validate() const {
    if (sigma2_l < 0.0 || sigma2_t < 0.0 || sigma2_e < 0.0) {
        throw std::domain_error("noise: variances must be >= 0");
    }
}

complexd reflection_coefficient(complexd z_load, complexd z_antenna) {
    const complexd za = std::conj(z_antenna);
    const complexd den = z_load + za;
    if (std::abs(den) == 0.0) {
        throw std::domain_error("reflection_coefficient: degenerate z_load + conj(z_antenna)");
    }
    return (z_load - za) / den;
}

double differential_rcs(double lambda, double g_tag, complexd gamma_1, complexd gamma_2) {
    if (!(lambda > 0.0)) throw std::domain_error("differential_rcs: lambda must be > 0");
    if (!(g_tag > 0.0)) throw std::domain_error("differential_rcs: g_tag must be > 0");
    const double diff = std::abs(gamma_1 - gamma_2);
    return lambda * lambda * g_tag * g_tag / (4.0 * kPi) * diff * diff;
}

double incident_power(double p_s, complexd gamma_i, complexd direct_amp, complexd cascade_amp) {
    if (p_s < 0.0) throw std::domain_error("incident_power: p_s must be >= 0");
    return p_s * std::abs(gamma_i) * (std::norm(direct_amp) + std::norm(cascade_amp));
}

double harvester_voltage(double p_inc, const CircuitParams& cp) {
    if (p_inc < 0.0) throw std::domain_error("harvester_voltage: p_inc must be >= 0");
    const double v = 4.0 * std::sqrt(cp.k_hrv * cp.alpha * p_inc) - 4.0 * cp.v_d;
    return v > 0.0 ? v : 0.0;
}

double demodulator_voltage(double p_inc, const CircuitParams& cp) {
    if (p_inc < 0.0) throw std::domain_error("demodulator_voltage: p_inc must be >= 0");
    const double v = (std::sqrt(cp.k_dem * (1.0 - cp.alpha) * p_inc) - 2.0 * cp.v_d) *
                     cp.divider_ratio;
    return v > 0.0 ? v : 0.0;
}

VoltageProfile profile_from_amplitudes(const std::array<complexd, 2>& state_amp,
                                       const CircuitParams& cp, double sigma2,
                                       RandomStream& rng) {
    VoltageProfile prof;
    for (ModState s : kModStates) {
        const complexd a = state_amp[static_cast<std::size_t>(s)];
        const double p_hrv = std::norm(a + rng.cnormal(sigma2));
        const double p_dem = std::norm(a + rng.cnormal(sigma2));
        prof.hrv(s) = harvester_voltage(p_hrv, cp);
        prof.dem(s) = demodulator_voltage(p_dem, cp);
    }
    return prof;
}

VoltageProfile measure_profile(double p_s, const CircuitParams& cp, complexd direct_amp,
                               complexd cascade_amp, double sigma2, RandomStream& rng) {
    std::array<complexd, 2> amp;
    for (ModState s : kModStates) {
        const double p = incident_power(p_s, cp.gamma(s), direct_amp, cascade_amp);
        amp[static_cast<std::size_t>(s)] = complexd{std::sqrt(p), 0.0};
    }
    return profile_from_amplitudes(amp, cp, sigma2, rng);
}

}  // namespace bttn
