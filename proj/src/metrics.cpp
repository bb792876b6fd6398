#include "resilnet/metrics.hpp"

#include "resilnet/dd.hpp"
#include "resilnet/errors.hpp"
#include "resilnet/kernels.hpp"

#include <cmath>

namespace resilnet {

ResilienceProfile average_profiles(
    const std::vector<Trajectory>& trajectories) {
    if (trajectories.empty())
        throw InputError("average_profiles: no trajectories");
    const auto& first = trajectories.front();
    const std::size_t len = first.cf_samples.size();
    for (const auto& t : trajectories) {
        if (t.cf_samples.size() != len)
            throw InputError("average_profiles: mixed trajectory lengths");
        if (t.cf_mode != first.cf_mode)
            throw InputError("average_profiles: mixed cf modes");
    }

    const auto& k = kernels::ops();
    const auto n = static_cast<double>(trajectories.size());

    std::vector<double> hi(len, 0.0), lo(len, 0.0);
    for (const auto& t : trajectories)
        k.dd_accumulate(hi.data(), lo.data(), t.cf_samples.data(), len);

    ResilienceProfile profile;
    profile.steps = first.steps;
    profile.runs = trajectories.size();
    profile.mean_cf.resize(len);
    for (std::size_t i = 0; i < len; ++i)
        profile.mean_cf[i] = dd::div_by({hi[i], lo[i]}, n);

    profile.std_cf.assign(len, 0.0);
    if (trajectories.size() > 1) {
        std::vector<double> sq_hi(len, 0.0), sq_lo(len, 0.0), dev(len);
        for (const auto& t : trajectories) {
            for (std::size_t i = 0; i < len; ++i) {
                const double d = t.cf_samples[i] - profile.mean_cf[i];
                dev[i] = d * d;
            }
            k.dd_accumulate(sq_hi.data(), sq_lo.data(), dev.data(), len);
        }
        for (std::size_t i = 0; i < len; ++i)
            profile.std_cf[i] =
                std::sqrt(dd::div_by({sq_hi[i], sq_lo[i]}, n - 1.0));
    }
    return profile;
}

double resilience(const ResilienceProfile& profile) {
    if (profile.mean_cf.empty())
        throw InputError("resilience: empty profile");
    return dd::mean(profile.mean_cf.data(), profile.mean_cf.size());
}

double robustness(const ResilienceProfile& profile) {
    if (profile.mean_cf.empty())
        throw InputError("robustness: empty profile");
    return kernels::ops().min_f64(profile.mean_cf.data(),
                                  profile.mean_cf.size());
}

double risk_from_robustness(double m) {
    if (!(m >= 0.0 && m <= 1.0))
        throw InputError("risk: robustness out of range [0,1]");
    return 1.0 - m;
}

} // namespace resilnet
