#pragma once

#include <cstddef>
#include <cstdint>

namespace resilnet::kernels {

// Data-parallel inner loops behind the simulator: functional-node counts,
// weighted functionality sums, and the per-step trajectory accumulator.
// Each kernel has a scalar reference and an AVX2 variant selected at
// runtime; variants are bitwise-equivalent by construction:
//
//   * integer kernels are exact;
//   * floating sums use a fixed 4-lane blocked order (lane j owns
//     elements with index % 4 == j, lanes combined as
//     (l0 + l1) + (l2 + l3)), identical in both variants;
//   * the two-sum accumulator is elementwise, so vectorizing across
//     elements cannot reassociate anything.
//
// The whole project is compiled with -ffp-contract=off so the scalar
// path cannot silently fuse into FMA.

struct Ops {
    const char* name;

    // Number of nonzero bytes. Inputs are 0/1 flags.
    std::size_t (*count_true_u8)(const std::uint8_t* flags, std::size_t n);

    // Sum of weights[i] where flags[i] != 0, 4-lane blocked order.
    double (*masked_sum_f64)(const std::uint8_t* flags, const double* weights,
                             std::size_t n);

    // Sum of values, 4-lane blocked order.
    double (*sum_f64)(const double* values, std::size_t n);

    // Minimum of values, n >= 1. Inputs must not contain NaN.
    double (*min_f64)(const double* values, std::size_t n);

    // Elementwise compensated accumulate: for each i, two-sum x[i] into
    // (hi[i], lo[i]).
    void (*dd_accumulate)(double* hi, double* lo, const double* x,
                          std::size_t n);
};

// Scalar reference implementation. Always available.
const Ops& scalar_ops();

// AVX2 implementation, or nullptr when not compiled in or the CPU lacks
// AVX2.
const Ops* avx2_ops();

// The active implementation. Chosen once: RESILNET_SIMD=scalar|avx2|auto
// (default auto = best supported). Forcing avx2 on an unsupported CPU or
// an unknown value throws InputError.
const Ops& ops();

} // namespace resilnet::kernels
