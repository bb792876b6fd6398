#pragma once

#include <cstdint>

namespace resilnet::rng {

// Counter-based keyed generator. Every draw is a pure function of
// (stream key, counter words), so draws are independent of iteration
// order and of how many draws other code paths consume. That is what
// makes common-random-number sweeps and the coupled p_s monotonicity
// hold exactly.

// Named streams derived from the master seed. Base wiring, potential
// wiring, event sampling and switching draws never share a stream.
enum class Stream : std::uint64_t {
    TopologyBase = 1,
    TopologyPotential = 2,
    Events = 3,
    Switching = 4,
};

struct Key {
    std::uint64_t k0 = 0;
    std::uint64_t k1 = 0;
};

// splitmix64 increment + Stafford mix13 finalizer
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline Key derive_key(std::uint64_t master_seed, Stream stream) {
    const auto sid = static_cast<std::uint64_t>(stream);
    Key k;
    k.k0 = mix64(master_seed ^ (sid * 0xd1b54a32d192ed03ULL));
    k.k1 = mix64(k.k0 + sid);
    return k;
}

// One 64-bit word for counter (c0, c1, c2, c3).
inline std::uint64_t at(const Key& key, std::uint64_t c0, std::uint64_t c1,
                        std::uint64_t c2, std::uint64_t c3 = 0) {
    std::uint64_t h = key.k0;
    h = mix64(h ^ c0);
    h = mix64(h ^ c1);
    h = mix64(h ^ c2);
    h = mix64(h ^ c3);
    return mix64(h ^ key.k1);
}

// Uniform double in [0, 1).
inline double unit(const Key& key, std::uint64_t c0, std::uint64_t c1,
                   std::uint64_t c2) {
    return static_cast<double>(at(key, c0, c1, c2) >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n), n >= 1. Masked rejection, unbiased; the
// rejection attempt index occupies the fourth counter word.
inline std::uint64_t below(const Key& key, std::uint64_t c0, std::uint64_t c1,
                           std::uint64_t c2, std::uint64_t n) {
    std::uint64_t mask = n - 1;
    mask |= mask >> 1;
    mask |= mask >> 2;
    mask |= mask >> 4;
    mask |= mask >> 8;
    mask |= mask >> 16;
    mask |= mask >> 32;
    for (std::uint64_t attempt = 1;; ++attempt) {
        const std::uint64_t x = at(key, c0, c1, c2, attempt) & mask;
        if (x < n) return x;
    }
}

} // namespace resilnet::rng
