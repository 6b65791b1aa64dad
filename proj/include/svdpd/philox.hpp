// Copyright 2026 the svdpd developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace svdpd {

/*
 * Counter-based random substrate: Philox-4x32-10
 * (Salmon, Moraes, Dror, Shaw, "Parallel random numbers: as easy as 1, 2, 3",
 * SC 2011). Every output block is a pure function of (key, counter), so any
 * consumer (per-pair noise, per-path streams, initial conditions) gets
 * bitwise-reproducible values independent of evaluation order and thread
 * count. Passes BigCrush per the original publication.
 *
 * Counter word 3 is a domain tag keeping the independent uses of the
 * substrate from ever sharing a counter:
 *   0 - per-step, per-channel Wiener increments (step, lo, hi, 0)
 *   1 - scalar Gaussian streams                 (ctr_lo, ctr_hi, 0, 1)
 *   2 - scalar uniform streams                  (ctr_lo, ctr_hi, 0, 2)
 *   3 - derived sub-stream seeds                (idx_lo, idx_hi, 0, 3)
 */
namespace philox {

constexpr std::uint32_t mult_a = 0xD2511F53u;
constexpr std::uint32_t mult_b = 0xCD9E8D57u;
constexpr std::uint32_t weyl_a = 0x9E3779B9u;
constexpr std::uint32_t weyl_b = 0xBB67AE85u;

inline std::array<std::uint32_t, 4> block(std::uint64_t key, std::array<std::uint32_t, 4> ctr) {
    std::uint32_t k0 = static_cast<std::uint32_t>(key);
    std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(mult_a) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(mult_b) * ctr[2];
        const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
        const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ k0, lo1, hi0 ^ ctr[3] ^ k1, lo0};
        k0 += weyl_a;
        k1 += weyl_b;
    }
    return ctr;
}

inline std::uint64_t join64(std::uint32_t hi, std::uint32_t lo) {
    return (static_cast<std::uint64_t>(hi) << 32) | lo;
}

} // namespace philox

namespace ctr_domain {
constexpr std::uint32_t channel = 0;
constexpr std::uint32_t gaussian = 1;
constexpr std::uint32_t uniform = 2;
constexpr std::uint32_t stream = 3;
} // namespace ctr_domain

/// Two independent N(0,1) variates from one Philox block via Box–Muller.
inline std::pair<double, double> gaussian_pair(std::uint64_t key,
                                               std::array<std::uint32_t, 4> ctr) {
    const auto b = philox::block(key, ctr);
    // u1 in (0,1] so log(u1) is finite; u2 in [0,1) as the angle.
    const double u1 = (static_cast<double>(philox::join64(b[0], b[1])) + 1.0) * 0x1p-64;
    const double u2 = static_cast<double>(philox::join64(b[2], b[3])) * 0x1p-64;
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

/// Standard normal variate as a pure function of (seed, counter).
inline double gaussian_from_counter(std::uint64_t seed, std::uint64_t counter) {
    return gaussian_pair(seed, {static_cast<std::uint32_t>(counter),
                                static_cast<std::uint32_t>(counter >> 32), 0,
                                ctr_domain::gaussian})
        .first;
}

/// Uniform variate in [0,1) as a pure function of (seed, counter).
inline double uniform_from_counter(std::uint64_t seed, std::uint64_t counter) {
    const auto b = philox::block(seed, {static_cast<std::uint32_t>(counter),
                                        static_cast<std::uint32_t>(counter >> 32), 0,
                                        ctr_domain::uniform});
    return static_cast<double>(philox::join64(b[0], b[1]) >> 11) * 0x1p-53;
}

/// Derived seed for an independent sub-stream (ensemble paths, init draws).
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t index) {
    const auto b = philox::block(seed, {static_cast<std::uint32_t>(index),
                                        static_cast<std::uint32_t>(index >> 32), 0,
                                        ctr_domain::stream});
    return philox::join64(b[0], b[1]);
}

} // namespace svdpd
