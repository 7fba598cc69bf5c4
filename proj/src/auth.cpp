#include "bttn/auth.hpp"

#include <algorithm>
#include <cmath>

namespace bttn {

namespace {

struct Welford {
    double mean = 0.0;
    double m2 = 0.0;
    std::size_t n = 0;

    void add(double x) {
        ++n;
        const double d = x - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (x - mean);
    }
    double stddev() const {
        return n >= 2 ? std::sqrt(m2 / static_cast<double>(n - 1)) : 0.0;
    }
};

double floored(double spread) { return std::max(spread, kSpreadFloor); }

}  // namespace

BaselineProfile establish_baseline(std::span<const VoltageProfile> pilots) {
    if (pilots.size() < 2) {
        throw std::invalid_argument("establish_baseline: need at least 2 pilot profiles");
    }
    Welford hrv[2], dem[2];
    for (const VoltageProfile& p : pilots) {
        for (ModState s : kModStates) {
            hrv[static_cast<std::size_t>(s)].add(p.hrv(s));
            dem[static_cast<std::size_t>(s)].add(p.dem(s));
        }
    }
    BaselineProfile b;
    b.pilot_count = pilots.size();
    for (ModState s : kModStates) {
        const auto i = static_cast<std::size_t>(s);
        b.mean.hrv(s) = hrv[i].mean;
        b.mean.dem(s) = dem[i].mean;
        b.spread.hrv(s) = hrv[i].stddev();
        b.spread.dem(s) = dem[i].stddev();
    }
    return b;
}

ProfileDelta profile_delta(const VoltageProfile& measured, const BaselineProfile& baseline) {
    ProfileDelta d;
    for (ModState s : kModStates) {
        d.delta_hrv = std::max(d.delta_hrv, std::abs(measured.hrv(s) - baseline.mean.hrv(s)));
        d.delta_dem = std::max(d.delta_dem, std::abs(measured.dem(s) - baseline.mean.dem(s)));
    }
    return d;
}

bool decide(const ProfileDelta& deltas, const Thresholds& th) {
    return deltas.delta_hrv <= th.tau_hrv && deltas.delta_dem <= th.tau_dem;
}

double normalized_score(const ProfileDelta& deltas, const BaselineProfile& baseline) {
    const double s_hrv =
        floored(std::max(baseline.spread.hrv(ModState::On), baseline.spread.hrv(ModState::Off)));
    const double s_dem =
        floored(std::max(baseline.spread.dem(ModState::On), baseline.spread.dem(ModState::Off)));
    return std::max(deltas.delta_hrv / s_hrv, deltas.delta_dem / s_dem);
}

AuthDecision authenticate_profile(const VoltageProfile& measured, const BaselineProfile& baseline,
                                  const Thresholds& th) {
    const ProfileDelta d = profile_delta(measured, baseline);
    AuthDecision out;
    out.delta_hrv = d.delta_hrv;
    out.delta_dem = d.delta_dem;
    out.accepted = decide(d, th);
    out.score = normalized_score(d, baseline);
    return out;
}

TagRecord& TagRegistry::register_tag(const std::string& tag_id) {
    auto [it, inserted] = records_.try_emplace(tag_id, TagRecord{tag_id, std::nullopt});
    if (!inserted) {
        throw RegistrationError("register_tag: duplicate id '" + tag_id + "'");
    }
    return it->second;
}

void TagRegistry::set_baseline(const std::string& tag_id, BaselineProfile baseline) {
    auto it = records_.find(tag_id);
    if (it == records_.end()) {
        throw UnknownTagError("set_baseline: unknown tag '" + tag_id + "'");
    }
    it->second.baseline = std::move(baseline);
}

const TagRecord& TagRegistry::lookup(const std::string& tag_id) const {
    auto it = records_.find(tag_id);
    if (it == records_.end()) {
        throw UnknownTagError("lookup: unknown tag '" + tag_id + "'");
    }
    return it->second;
}

AuthDecision TagRegistry::authenticate(const std::string& claimed_id,
                                       const VoltageProfile& measured,
                                       const Thresholds& th) const {
    auto it = records_.find(claimed_id);
    if (it == records_.end()) {
        throw UnknownTagError("authenticate: unknown tag '" + claimed_id + "'");
    }
    if (!it->second.baseline) {
        throw std::logic_error("authenticate: tag '" + claimed_id + "' has no baseline");
    }
    return authenticate_profile(measured, *it->second.baseline, th);
}

}  // namespace bttn
