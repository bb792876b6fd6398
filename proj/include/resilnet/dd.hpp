#pragma once

#include <cstddef>
#include <cstdint>

namespace resilnet::dd {

// Error-free transformations and a compensated mean. Sums of critical
// functionality samples are rationals with small denominators; a naive
// running sum over 10^4 runs drifts by ~1e-13 which is enough to change
// serialized report bytes. The (hi, lo) accumulator keeps ~106 bits so
// the final mean is correctly rounded for every input this tool emits.

struct Sum {
    double hi = 0.0;
    double lo = 0.0;
};

// Knuth two-sum: s + err == a + b exactly. Branch-free.
inline void two_sum(double a, double b, double& s, double& err) {
    s = a + b;
    const double bb = s - a;
    err = (a - (s - bb)) + (b - bb);
}

// Dekker product split (no FMA): p + err == a * b exactly.
inline void two_prod(double a, double b, double& p, double& err) {
    constexpr double splitter = 134217729.0; // 2^27 + 1
    p = a * b;
    const double ca = a * splitter;
    const double ahi = ca - (ca - a);
    const double alo = a - ahi;
    const double cb = b * splitter;
    const double bhi = cb - (cb - b);
    const double blo = b - bhi;
    err = ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo;
}

inline void add(Sum& acc, double x) {
    double s, err;
    two_sum(acc.hi, x, s, err);
    acc.hi = s;
    acc.lo += err;
}

// (hi + lo) / n rounded once.
inline double div_by(const Sum& acc, double n) {
    const double q1 = acc.hi / n;
    double p, perr;
    two_prod(q1, n, p, perr);
    const double r = (acc.hi - p) - perr;
    const double q2 = (r + acc.lo) / n;
    return q1 + q2;
}

// Compensated arithmetic mean of values[0..count), count >= 1.
inline double mean(const double* values, std::size_t count) {
    Sum acc;
    for (std::size_t i = 0; i < count; ++i) add(acc, values[i]);
    return div_by(acc, static_cast<double>(count));
}

} // namespace resilnet::dd
