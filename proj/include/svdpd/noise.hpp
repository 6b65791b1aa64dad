// Copyright 2026 the svdpd developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "svdpd/philox.hpp"

namespace svdpd {

/// One noise channel: an unordered index pair. Stored normalized (a < b) so
/// the draw for (i,j) is bitwise the draw for (j,i), realizing a symmetric
/// Wiener matrix without storing it.
struct Channel {
    std::uint32_t a = 0, b = 0;

    friend bool operator==(const Channel&, const Channel&) = default;
};

inline Channel make_channel(std::uint32_t i, std::uint32_t j) {
    return i < j ? Channel{i, j} : Channel{j, i};
}

inline std::uint64_t channel_key(Channel c) {
    return (static_cast<std::uint64_t>(c.a) << 32) | c.b;
}

/// How the two half-step increments of a split step relate to the full one.
///
/// independent_halves: both halves drawn N(0, dt/2); full is their sum.
/// approximate_half:   full drawn N(0, dt); both halves set to full/2.
///                      Required to recover the conventional GW and GCC
///                      update rules, at the cost of correlated halves.
enum class NoiseMode {
    independent_halves,
    approximate_half,
};

/// The Wiener increments of one channel over one step.
struct ChannelDraw {
    double full = 0.0;        // increment over [t_k, t_{k+1}]
    double half_first = 0.0;  // increment over [t_k, t_{k+1/2}]
    double half_second = 0.0; // increment over [t_{k+1/2}, t_{k+1}]
};

/// Per-step noise view: a pure function (seed, step, channel) -> ChannelDraw.
/// Cheap to construct every step; draws are generated on demand, so stages
/// that discover channels mid-step (position-dependent cutoffs) stay
/// consistent with stages that drew the same channel earlier.
class StepNoise {
public:
    StepNoise(std::uint64_t seed, std::uint32_t step, double dt, NoiseMode mode)
        : seed_(seed), step_(step), mode_(mode), scale_full_(std::sqrt(dt)),
          scale_half_(std::sqrt(0.5 * dt)) {}

    ChannelDraw at(Channel c) const {
        const auto z = gaussian_pair(seed_, {step_, c.a, c.b, ctr_domain::channel});
        ChannelDraw d;
        if (mode_ == NoiseMode::independent_halves) {
            d.half_first = scale_half_ * z.first;
            d.half_second = scale_half_ * z.second;
            d.full = d.half_first + d.half_second;
        } else {
            d.full = scale_full_ * z.first;
            d.half_first = 0.5 * d.full;
            d.half_second = d.half_first;
        }
        return d;
    }

    std::uint32_t step() const noexcept { return step_; }

private:
    std::uint64_t seed_;
    std::uint32_t step_;
    NoiseMode mode_;
    double scale_full_, scale_half_;
};

template <class NV>
concept NoiseView = requires(const NV& nv, Channel c) {
    { nv.at(c) } -> std::convertible_to<ChannelDraw>;
};

/// Materialized draws for an explicit channel list.
struct NoiseDraw {
    std::unordered_map<std::uint64_t, ChannelDraw> draws;

    ChannelDraw at(Channel c) const {
        const auto it = draws.find(channel_key(make_channel(c.a, c.b)));
        if (it == draws.end()) throw std::invalid_argument("noise draw for unknown channel");
        return it->second;
    }

    double full(std::uint32_t i, std::uint32_t j) const { return at(make_channel(i, j)).full; }
    double half_first(std::uint32_t i, std::uint32_t j) const {
        return at(make_channel(i, j)).half_first;
    }
    double half_second(std::uint32_t i, std::uint32_t j) const {
        return at(make_channel(i, j)).half_second;
    }
};

/// Draw the per-channel Wiener increments of one step.
/// Pure in (seed, step_index, channel); diagonal channels are rejected since
/// their noise Hamiltonians are constant and contribute nothing.
inline NoiseDraw draw_noise(std::uint64_t seed, std::uint32_t step_index,
                            std::span<const Channel> channels, double dt, NoiseMode mode) {
    if (!(dt > 0.0)) throw std::invalid_argument("draw_noise: dt must be positive");
    const StepNoise view(seed, step_index, dt, mode);
    NoiseDraw out;
    out.draws.reserve(channels.size());
    for (const Channel& c : channels) {
        if (c.a == c.b) throw std::invalid_argument("draw_noise: diagonal channel");
        const Channel n = make_channel(c.a, c.b);
        out.draws.emplace(channel_key(n), view.at(n));
    }
    return out;
}

} // namespace svdpd
