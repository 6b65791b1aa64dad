// Copyright 2026 the svdpd developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

#include "svdpd/dpd.hpp"
#include "svdpd/vec3.hpp"

namespace svdpd {

/// Scalar observable over time with an equilibration-discard protocol:
/// the leading discard_fraction of samples is dropped before averaging.
struct StatSeries {
    std::vector<double> times;
    std::vector<double> values;
    double discard_fraction = 0.84;

    void validate() const; // equal lengths, strictly increasing times
    void append(double t, double v) {
        times.push_back(t);
        values.push_back(v);
    }
};

struct TailStats {
    double mean = 0.0;
    double stderr_mean = 0.0; // naive i.i.d. standard error of the mean
    std::size_t n_tail = 0;
};

/// Mean and standard error over the retained tail of the series.
TailStats equilibrated_average(const StatSeries& series);

/// Instantaneous kinetic temperature k_BT = ⟨v²⟩/3, averaged over particles.
double kinetic_temperature(const DpdSystem& sys);

Vec3 total_momentum(const DpdSystem& sys);

/// Kinetic energy plus the pair potential (Σ over pairs of (a/2)q_c(1−r/q_c)²).
double total_energy(const DpdSystem& sys);

/// Pair potential energy alone, at the system's current configuration.
double potential_energy(const DpdSystem& sys);

} // namespace svdpd
