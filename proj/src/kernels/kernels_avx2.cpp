// AVX2 variants of the kernels in kernels.cpp. This translation unit is
// the only one built with -mavx2; everything here is gated so the file
// still compiles (to a stub) on toolchains without AVX2.

#include "resilnet/kernels.hpp"

#if defined(__AVX2__)

#include <cstring>
#include <immintrin.h>

namespace resilnet::kernels {

namespace {

std::size_t count_true_u8_avx2(const std::uint8_t* flags, std::size_t n) {
    const __m256i zero = _mm256_setzero_si256();
    __m256i acc = _mm256_setzero_si256();
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        const __m256i v =
            _mm256_loadu_si256(reinterpret_cast<const __m256i*>(flags + i));
        // flags are 0/1 bytes, so the byte sum is the count
        acc = _mm256_add_epi64(acc, _mm256_sad_epu8(v, zero));
    }
    std::uint64_t lanes[4];
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(lanes), acc);
    std::size_t c = lanes[0] + lanes[1] + lanes[2] + lanes[3];
    for (; i < n; ++i) c += flags[i] != 0;
    return c;
}

double masked_sum_f64_avx2(const std::uint8_t* flags, const double* weights,
                           std::size_t n) {
    const __m256i zero = _mm256_setzero_si256();
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        std::uint32_t packed;
        std::memcpy(&packed, flags + i, 4);
        const __m256i b =
            _mm256_cvtepu8_epi64(_mm_cvtsi32_si128(static_cast<int>(packed)));
        const __m256d is_zero =
            _mm256_castsi256_pd(_mm256_cmpeq_epi64(b, zero));
        const __m256d w = _mm256_loadu_pd(weights + i);
        acc = _mm256_add_pd(acc, _mm256_andnot_pd(is_zero, w));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    for (; i < n; ++i) lanes[i & 3] += flags[i] ? weights[i] : 0.0;
    return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

double sum_f64_avx2(const double* values, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_add_pd(acc, _mm256_loadu_pd(values + i));
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    for (; i < n; ++i) lanes[i & 3] += values[i];
    return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

double min_f64_avx2(const double* values, std::size_t n) {
    if (n < 8) {
        double m = values[0];
        for (std::size_t i = 1; i < n; ++i)
            if (values[i] < m) m = values[i];
        return m;
    }
    __m256d acc = _mm256_loadu_pd(values);
    std::size_t i = 4;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_min_pd(acc, _mm256_loadu_pd(values + i));
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double m = lanes[0];
    for (int j = 1; j < 4; ++j)
        if (lanes[j] < m) m = lanes[j];
    for (; i < n; ++i)
        if (values[i] < m) m = values[i];
    return m;
}

void dd_accumulate_avx2(double* hi, double* lo, const double* x,
                        std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d a = _mm256_loadu_pd(hi + i);
        const __m256d b = _mm256_loadu_pd(x + i);
        const __m256d s = _mm256_add_pd(a, b);
        const __m256d bb = _mm256_sub_pd(s, a);
        const __m256d err = _mm256_add_pd(_mm256_sub_pd(a, _mm256_sub_pd(s, bb)),
                                          _mm256_sub_pd(b, bb));
        _mm256_storeu_pd(hi + i, s);
        _mm256_storeu_pd(lo + i, _mm256_add_pd(_mm256_loadu_pd(lo + i), err));
    }
    for (; i < n; ++i) {
        const double a = hi[i];
        const double b = x[i];
        const double s = a + b;
        const double bb = s - a;
        hi[i] = s;
        lo[i] += (a - (s - bb)) + (b - bb);
    }
}

const Ops g_avx2 = {
    "avx2",       count_true_u8_avx2, masked_sum_f64_avx2,
    sum_f64_avx2, min_f64_avx2,       dd_accumulate_avx2,
};

} // namespace

const Ops* avx2_ops() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2") ? &g_avx2 : nullptr;
#else
    return nullptr;
#endif
}

} // namespace resilnet::kernels

#else // !__AVX2__

namespace resilnet::kernels {
const Ops* avx2_ops() { return nullptr; }
} // namespace resilnet::kernels

#endif
