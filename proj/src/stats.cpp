// Copyright 2026 the svdpd developers
// SPDX-License-Identifier: Apache-2.0

#include "svdpd/stats.hpp"

#include <cmath>

namespace svdpd {

void StatSeries::validate() const {
    if (times.size() != values.size())
        throw config_error("stat series: times/values length mismatch");
    if (!(discard_fraction >= 0.0 && discard_fraction < 1.0))
        throw config_error("stat series: discard_fraction must be in [0,1)");
    for (std::size_t k = 1; k < times.size(); ++k)
        if (!(times[k] > times[k - 1]))
            throw config_error("stat series: times must be strictly increasing");
}

TailStats equilibrated_average(const StatSeries& series) {
    series.validate();
    const std::size_t n = series.values.size();
    const auto discard = static_cast<std::size_t>(
        std::llround(static_cast<double>(n) * series.discard_fraction));
    if (discard >= n) throw config_error("stat series: nothing left after discard");

    TailStats out;
    out.n_tail = n - discard;
    double sum = 0.0;
    for (std::size_t k = discard; k < n; ++k) sum += series.values[k];
    out.mean = sum / static_cast<double>(out.n_tail);

    if (out.n_tail > 1) {
        double ss = 0.0;
        for (std::size_t k = discard; k < n; ++k) {
            const double d = series.values[k] - out.mean;
            ss += d * d;
        }
        const double var = ss / static_cast<double>(out.n_tail - 1);
        out.stderr_mean = std::sqrt(var / static_cast<double>(out.n_tail));
    }
    return out;
}

double kinetic_temperature(const DpdSystem& sys) {
    const std::size_t n = sys.size();
    double v2_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3 v = (1.0 / sys.masses[i]) * vec_at(sys.state.p, i);
        v2_sum += norm2(v);
    }
    return v2_sum / (3.0 * static_cast<double>(n));
}

Vec3 total_momentum(const DpdSystem& sys) {
    Vec3 sum;
    for (std::size_t i = 0; i < sys.size(); ++i) sum += vec_at(sys.state.p, i);
    return sum;
}

double potential_energy(const DpdSystem& sys) {
    PairTable table;
    table.build(sys.state.q, sys.params, sys.step_index);
    return table.potential_energy(sys.params.a, sys.params.q_c);
}

double total_energy(const DpdSystem& sys) {
    double kinetic = 0.0;
    for (std::size_t i = 0; i < sys.size(); ++i)
        kinetic += norm2(vec_at(sys.state.p, i)) / (2.0 * sys.masses[i]);
    return kinetic + potential_energy(sys);
}

} // namespace svdpd
