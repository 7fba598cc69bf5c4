#include "bttn/channel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace bttn {

namespace {

void check_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw std::domain_error(std::string("geometry: ") + name + " must be finite and > 0");
    }
}

}  // namespace

void ScenarioGeometry::validate() const {
    check_positive(d_ST, "d_ST");
    check_positive(d_SL, "d_SL");
    check_positive(d_TL, "d_TL");
    check_positive(d_SE, "d_SE");
    check_positive(d_EL, "d_EL");
    check_positive(d_TE, "d_TE");
    if (n_elements > 0) {
        check_positive(d_TR, "d_TR");
        check_positive(d_RL, "d_RL");
        check_positive(d_ER, "d_ER");
    }
    check_positive(f_c, "f_c");
    check_positive(g_tag, "g_tag");
    check_positive(g_ris_element, "g_ris_element");
    if (chi_direct < 0.0 || chi_ris < 0.0) {
        throw std::domain_error("geometry: path-loss exponents must be >= 0");
    }
    // Adversary proximity floor: closer than half a wavelength the legitimate
    // and adversarial channels would decorrelate no further.
    const double floor = 0.5 * wavelength();
    if (d_EL < floor) {
        throw std::domain_error("geometry: d_EL below the 0.5*lambda proximity floor (" +
                                std::to_string(floor) + " m)");
    }
}

double path_gain(double d, double chi, double lambda, double g_tx, double g_rx) {
    if (!(d > 0.0)) throw std::domain_error("path_gain: d must be > 0");
    if (!(lambda > 0.0)) throw std::domain_error("path_gain: lambda must be > 0");
    if (chi < 0.0) throw std::domain_error("path_gain: chi must be >= 0");
    if (!(g_tx > 0.0) || !(g_rx > 0.0)) throw std::domain_error("path_gain: gains must be > 0");
    return std::sqrt(g_tx * g_rx) * (lambda / (4.0 * kPi)) * std::pow(d, -0.5 * chi);
}

complexd sample_small_scale(const RicianParams& p, RandomStream& rng) {
    if (p.k_factor < 0.0 || std::isnan(p.k_factor)) {
        throw std::domain_error("sample_small_scale: k_factor must be >= 0");
    }
    if (std::isinf(p.k_factor)) return {1.0, 0.0};  // pure LOS limit
    const double los = std::sqrt(p.k_factor / (p.k_factor + 1.0));
    return los + rng.cnormal(1.0 / (p.k_factor + 1.0));
}

ChannelRealization sample_realization(const ScenarioGeometry& geom, const RicianParams& p,
                                      RandomStream& rng) {
    geom.validate();
    const double lambda = geom.wavelength();
    const double g = geom.g_tag;
    const double ge = geom.g_ris_element;

    auto direct = [&](double d) {
        return path_gain(d, geom.chi_direct, lambda, g, g) * sample_small_scale(p, rng);
    };
    auto ris_hop = [&](double d) {
        return path_gain(d, geom.chi_ris, lambda, g, ge) * sample_small_scale(p, rng);
    };

    ChannelRealization r;
    r.h_st = direct(geom.d_ST);
    r.h_sl = direct(geom.d_SL);
    r.h_tl = direct(geom.d_TL);
    r.h_se = direct(geom.d_SE);
    r.h_el = direct(geom.d_EL);
    r.h_te = direct(geom.d_TE);

    const std::size_t n = geom.n_elements;
    r.h_tr.reserve(n);
    r.h_rl.reserve(n);
    r.h_er.reserve(n);
    r.delta.reserve(n);
    r.zeta.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        r.h_tr.push_back(ris_hop(geom.d_TR));
        r.h_rl.push_back(ris_hop(geom.d_RL));
        r.h_er.push_back(ris_hop(geom.d_ER));
        // Coefficients are written h*e^{-j delta}; the decomposition phase is
        // the negated argument.
        r.delta.push_back(wrap_angle(-std::arg(r.h_tr.back())));
        r.zeta.push_back(wrap_angle(-std::arg(r.h_rl.back())));
    }
    return r;
}

RisConfig optimal_ris_phases(const ChannelRealization& real) {
    if (real.n_elements() == 0) {
        throw std::domain_error("optimal_ris_phases: realization has no RIS elements");
    }
    RisConfig cfg;
    cfg.mode = RisMode::OptimalForLegit;
    cfg.phases.reserve(real.n_elements());
    for (std::size_t i = 0; i < real.n_elements(); ++i) {
        cfg.phases.push_back(wrap_angle(real.delta[i] + real.zeta[i]));
    }
    return cfg;
}

RisConfig random_ris_phases(std::size_t n, RandomStream& rng) {
    if (n == 0) return RisConfig::absent();
    RisConfig cfg;
    cfg.mode = RisMode::RandomUniform;
    cfg.phases.reserve(n);
    for (std::size_t i = 0; i < n; ++i) cfg.phases.push_back(rng.uniform(kTwoPi));
    return cfg;
}

complexd cascade_coefficient(std::span<const complexd> h_a, std::span<const complexd> h_b,
                             const RisConfig& cfg) {
    if (cfg.mode == RisMode::Absent) return {0.0, 0.0};
    if (h_a.size() != h_b.size() || h_a.size() != cfg.phases.size()) {
        throw std::invalid_argument("cascade_coefficient: sequence/config length mismatch");
    }
    complexd sum{0.0, 0.0};
    for (std::size_t i = 0; i < h_a.size(); ++i) {
        sum += h_a[i] * h_b[i] * std::polar(1.0, cfg.phases[i]);
    }
    return sum;
}

}  // namespace bttn
