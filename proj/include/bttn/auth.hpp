#ifndef BTTN_AUTH_HPP
#define BTTN_AUTH_HPP

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

#include "bttn/circuit.hpp"

namespace bttn {

/// Floor applied to baseline spreads so normalized scores stay finite in the
/// noiseless limit.
inline constexpr double kSpreadFloor = 1e-9;

/// Per-component mean and sample standard deviation over the pilot
/// measurements recorded during initialization.
struct BaselineProfile {
    VoltageProfile mean;
    VoltageProfile spread;
    std::size_t pilot_count = 0;
};

struct Thresholds {
    double tau_hrv = 0.0;  // volts
    double tau_dem = 0.0;  // volts
};

struct ProfileDelta {
    double delta_hrv = 0.0;
    double delta_dem = 0.0;
};

struct AuthDecision {
    bool accepted = false;
    double delta_hrv = 0.0;
    double delta_dem = 0.0;
    double score = 0.0;  // normalized statistic, dimensionless
};

struct RegistrationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct UnknownTagError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Mean/stddev per profile component over >= 2 pilot measurements. Uses a
/// running (Welford) update so identical pilots give the exact mean and zero
/// spread.
BaselineProfile establish_baseline(std::span<const VoltageProfile> pilots);

/// Per-branch deviation from the baseline mean, maximized over modulation
/// states (an attacker must match every state).
ProfileDelta profile_delta(const VoltageProfile& measured, const BaselineProfile& baseline);

/// Accept iff delta_hrv <= tau_hrv and delta_dem <= tau_dem (inclusive).
bool decide(const ProfileDelta& deltas, const Thresholds& th);

/// max(delta_hrv/s_hrv, delta_dem/s_dem) with s_* the state-maxed baseline
/// spreads floored at kSpreadFloor. decide() with thresholds
/// (t*s_hrv, t*s_dem) accepts iff this score is <= t.
double normalized_score(const ProfileDelta& deltas, const BaselineProfile& baseline);

/// Full comparison step: deltas, threshold test and normalized score.
AuthDecision authenticate_profile(const VoltageProfile& measured, const BaselineProfile& baseline,
                                  const Thresholds& th);

struct TagRecord {
    std::string tag_id;
    std::optional<BaselineProfile> baseline;
};

/// Listener-side store of registered talker identities and their baselines.
/// The identifier check runs before any voltage comparison.
class TagRegistry {
public:
    TagRecord& register_tag(const std::string& tag_id);
    void set_baseline(const std::string& tag_id, BaselineProfile baseline);
    const TagRecord& lookup(const std::string& tag_id) const;
    bool contains(const std::string& tag_id) const { return records_.count(tag_id) != 0; }

    /// Rejects unknown identifiers outright; otherwise runs the voltage test
    /// against the stored baseline.
    AuthDecision authenticate(const std::string& claimed_id, const VoltageProfile& measured,
                              const Thresholds& th) const;

private:
    std::map<std::string, TagRecord> records_;
};

}  // namespace bttn

#endif
