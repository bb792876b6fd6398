#pragma once

#include "resilnet/cascade.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace resilnet {

// Event-averaged critical functionality over the normalized time grid
// t/steps in [0,1]; mean_cf and std_cf have steps+1 entries.
struct ResilienceProfile {
    std::vector<double> mean_cf;
    std::vector<double> std_cf;
    std::uint64_t runs = 0;
    std::uint32_t steps = 0;

    double t_norm(std::size_t i) const {
        return static_cast<double>(i) / static_cast<double>(steps);
    }
};

struct ResilienceReport {
    double resilience = 0.0;
    double robustness = 0.0;
    double risk = 0.0;
    std::uint64_t runs = 0;
    std::uint64_t seed = 0;
    std::string config_digest;
};

// Per-step mean and sample standard deviation across runs, accumulated
// in ascending run-index order with compensated sums so reports are
// bitwise stable. Throws InputError on empty input or mixed
// lengths/modes.
ResilienceProfile average_profiles(const std::vector<Trajectory>& trajectories);

// Area under the profile on the normalized grid: the mean of the
// steps+1 samples. 1 is perfect resilience.
double resilience(const ResilienceProfile& profile);

// Minimum of the event-averaged critical functionality.
double robustness(const ResilienceProfile& profile);

// risk = 1 - M. Throws InputError when M is outside [0,1].
double risk_from_robustness(double m);

} // namespace resilnet
