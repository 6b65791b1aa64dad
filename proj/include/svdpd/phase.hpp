// Copyright 2026 the svdpd developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "svdpd/errors.hpp"

namespace svdpd {

/// Phase-space state: generalized positions and momenta of equal dimension.
struct PhasePoint {
    std::vector<double> q;
    std::vector<double> p;

    PhasePoint() = default;
    PhasePoint(std::vector<double> q_, std::vector<double> p_)
        : q(std::move(q_)), p(std::move(p_)) {
        if (q.size() != p.size())
            throw std::invalid_argument("PhasePoint: q and p dimensions differ");
    }

    std::size_t dim() const noexcept { return q.size(); }
};

inline bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

/// Throws numerical_error (blow-up) if the state contains NaN/Inf.
inline void check_finite(const std::vector<double>& q, const std::vector<double>& p,
                         std::uint64_t step) {
    if (!all_finite(q) || !all_finite(p))
        throw numerical_error(step, "non-finite state after integrator step");
}

} // namespace svdpd
