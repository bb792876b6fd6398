#include "resilnet/kernels.hpp"

#include "resilnet/dd.hpp"
#include "resilnet/errors.hpp"

#include <cstdlib>
#include <string>

namespace resilnet::kernels {

namespace {

std::size_t count_true_u8_scalar(const std::uint8_t* flags, std::size_t n) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < n; ++i) c += flags[i] != 0;
    return c;
}

double masked_sum_f64_scalar(const std::uint8_t* flags, const double* weights,
                             std::size_t n) {
    double acc[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i)
        acc[i & 3] += flags[i] ? weights[i] : 0.0;
    return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

double sum_f64_scalar(const double* values, std::size_t n) {
    double acc[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) acc[i & 3] += values[i];
    return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

double min_f64_scalar(const double* values, std::size_t n) {
    double m = values[0];
    for (std::size_t i = 1; i < n; ++i)
        if (values[i] < m) m = values[i];
    return m;
}

void dd_accumulate_scalar(double* hi, double* lo, const double* x,
                          std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        double s, err;
        dd::two_sum(hi[i], x[i], s, err);
        hi[i] = s;
        lo[i] += err;
    }
}

const Ops g_scalar = {
    "scalar",           count_true_u8_scalar, masked_sum_f64_scalar,
    sum_f64_scalar,     min_f64_scalar,       dd_accumulate_scalar,
};

const Ops& select() {
    const char* env = std::getenv("RESILNET_SIMD");
    const std::string mode = env ? env : "auto";
    if (mode == "scalar") return g_scalar;
    if (mode == "avx2") {
        const Ops* v = avx2_ops();
        if (!v) throw InputError("RESILNET_SIMD=avx2 but AVX2 is unavailable");
        return *v;
    }
    if (mode == "auto") {
        if (const Ops* v = avx2_ops()) return *v;
        return g_scalar;
    }
    throw InputError("RESILNET_SIMD: unknown value '" + mode +
                     "' (expected scalar, avx2 or auto)");
}

} // namespace

const Ops& scalar_ops() { return g_scalar; }

const Ops& ops() {
    static const Ops& selected = select();
    return selected;
}

} // namespace resilnet::kernels
