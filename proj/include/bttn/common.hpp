#ifndef BTTN_COMMON_HPP
#define BTTN_COMMON_HPP

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace bttn {

using complexd = std::complex<double>;

inline constexpr const char* kToolVersion = "bttnsim 0.1.0";

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

inline double dbm_to_watts(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }

inline double watts_to_dbm(double watts) {
    if (watts <= 0.0) throw std::domain_error("watts_to_dbm: power must be > 0");
    return 10.0 * std::log10(watts / 1e-3);
}

/// Wraps an angle into [0, 2*pi).
inline double wrap_angle(double rad) {
    double w = std::fmod(rad, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    return w;
}

}  // namespace bttn

#endif
