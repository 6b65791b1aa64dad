// Copyright 2026 the svdpd developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "svdpd/errors.hpp"
#include "svdpd/integrators.hpp"
#include "svdpd/noise.hpp"
#include "svdpd/phase.hpp"
#include "svdpd/scheme.hpp"
#include "svdpd/vec3.hpp"

namespace svdpd {

/*
 * DPD fluid in reduced units (q_c = m = k_BT = 1): soft pairwise repulsion
 *   F^C_ij = a (1 − r/q_c) q̂_ij            for r < q_c,
 * pairwise friction
 *   F^D_i = −γ Σ ω^D(r) (q̂_ij·v_ij) q̂_ij   with ω^D = (ω^R)²,
 * and pairwise random kicks σ ω^R(r) q̂_ij ΔW_ij with a symmetric Wiener
 * matrix, under periodic boundaries. All three act as exact ± pairs, so total
 * momentum is conserved to accumulation roundoff with the thermostat on.
 */
struct DpdParams {
    int n_particles = 375;
    double mass = 1.0;
    double a = 25.0;     // repulsion, units k_BT/q_c
    double gamma = 4.5;  // friction
    double sigma = 3.0;  // noise amplitude
    double q_c = 1.0;    // interaction cutoff (unit length)
    std::array<double, 3> box = {5.0, 5.0, 5.0};
    double kT_target = 1.0;

    void validate() const;

    /// The canonical ensemble needs σ² = 2γk_BT. Parameter sets violating it
    /// are allowed (warning only).
    std::optional<std::string> fluctuation_dissipation_warning() const;
};

inline double weight_r(double r, double q_c) { return r < q_c ? 1.0 - r / q_c : 0.0; }
inline double weight_d(double r, double q_c) {
    const double w = weight_r(r, q_c);
    return w * w;
}

/// Map each displacement component into [−box/2, box/2).
inline Vec3 minimum_image(Vec3 delta, const std::array<double, 3>& box) {
    delta.x -= box[0] * std::floor(delta.x / box[0] + 0.5);
    delta.y -= box[1] * std::floor(delta.y / box[1] + 0.5);
    delta.z -= box[2] * std::floor(delta.z / box[2] + 0.5);
    return delta;
}

/// Wrap positions into [0, box) per dimension.
void wrap_positions(std::vector<double>& q, const std::array<double, 3>& box);

struct DpdSystem {
    DpdParams params;
    PhasePoint state;           // 3N flat layout
    std::vector<double> masses; // per particle; params.mass everywhere by default
    std::uint64_t step_index = 0;
    std::uint64_t seed = 0;

    std::size_t size() const { return masses.size(); }
};

/// Random positions in the box; Maxwell–Boltzmann momenta shifted to zero net
/// momentum and rescaled so the instantaneous kinetic temperature equals
/// kT_target exactly. Pure function of (params, seed).
DpdSystem init_system(const DpdParams& params, std::uint64_t seed);

/// Uniform binning of particles into cells of edge ≥ q_c.
struct CellGrid {
    std::array<int, 3> dims = {0, 0, 0};
    std::array<double, 3> cell_size = {0.0, 0.0, 0.0};
    std::vector<std::uint32_t> cell_start; // CSR offsets, size n_cells+1
    std::vector<std::uint32_t> order;      // particle ids grouped by cell, ascending in-cell

    void build(const std::vector<double>& q, const std::array<double, 3>& box, double q_c);

    /// A 27-cell stencil needs at least 3 cells per dimension to not alias.
    bool stencil_usable() const { return dims[0] >= 3 && dims[1] >= 3 && dims[2] >= 3; }
};

/// One interacting pair at fixed positions: canonical i < j, with q̂_ij
/// pointing from j toward i and the weights at their separation.
struct PairEntry {
    std::uint32_t i, j;
    Vec3 rhat;
    double r, wr, wd;
};

/// Snapshot of all pairs within the cutoff for one configuration. Built once
/// per force stage and reused by every force/noise evaluation at these
/// positions (including fixed-point sweeps over momentum arguments).
class PairTable {
public:
    /// Enumerates each interacting pair exactly once, in deterministic order.
    /// Falls back to a minimum-image double loop when the box is narrower
    /// than three cells in any dimension. Throws singular_pair_error for
    /// coincident particles.
    void build(const std::vector<double>& q, const DpdParams& params, std::uint64_t step);

    const std::vector<PairEntry>& pairs() const { return pairs_; }
    const CellGrid& grid() const { return grid_; }

    void add_conservative(double a, std::vector<double>& force) const;
    void add_dissipative(double gamma, const std::vector<double>& p,
                         const std::vector<double>& inv_mass, std::vector<double>& force) const;

    enum class Increment { half_first, half_second, full };
    template <NoiseView NV>
    void add_noise_impulse(double sigma, const NV& noise, Increment which,
                           std::vector<double>& impulse) const {
        for (const PairEntry& e : pairs_) {
            const ChannelDraw d = noise.at(Channel{e.i, e.j});
            const double dw = which == Increment::full          ? d.full
                              : which == Increment::half_first ? d.half_first
                                                                : d.half_second;
            const Vec3 kick = (sigma * e.wr * dw) * e.rhat;
            add_vec(impulse, e.i, kick);
            sub_vec(impulse, e.j, kick);
        }
    }

    /// Σ over pairs of (a/2) q_c (1 − r/q_c)².
    double potential_energy(double a, double q_c) const;

private:
    void build_cells(const std::vector<double>& q, const DpdParams& params, std::uint64_t step);
    void build_all_pairs(const std::vector<double>& q, const DpdParams& params,
                         std::uint64_t step);
    void try_add_pair(const std::vector<double>& q, const DpdParams& params, std::uint64_t step,
                      std::uint32_t i, std::uint32_t j);

    std::vector<PairEntry> pairs_;
    CellGrid grid_;
};

/// Forces and the random impulse for a single pair at the system's current
/// state; zero beyond the cutoff.
struct PairForces {
    Vec3 conservative{};
    Vec3 dissipative{};
    Vec3 random_impulse{};
};

template <NoiseView NV>
PairForces pair_forces(const DpdSystem& sys, std::uint32_t i, std::uint32_t j, const NV& noise) {
    if (i == j) throw std::invalid_argument("pair_forces: i == j");
    const Vec3 delta =
        minimum_image(vec_at(sys.state.q, i) - vec_at(sys.state.q, j), sys.params.box);
    const double r = norm(delta);
    if (r >= sys.params.q_c) return {};
    if (r == 0.0) throw singular_pair_error(sys.step_index, std::min(i, j), std::max(i, j));

    const Vec3 rhat = (1.0 / r) * delta;
    const double wr = weight_r(r, sys.params.q_c);
    const double wd = wr * wr;
    const Vec3 vij = (1.0 / sys.masses[i]) * vec_at(sys.state.p, i) -
                     (1.0 / sys.masses[j]) * vec_at(sys.state.p, j);

    PairForces out;
    out.conservative = (sys.params.a * wr) * rhat;
    out.dissipative = (-sys.params.gamma * wd * dot(rhat, vij)) * rhat;
    out.random_impulse = (sys.params.sigma * wr * noise.at(make_channel(i, j)).full) * rhat;
    return out;
}

/// All per-particle force arrays for one configuration (test/diagnostic
/// surface; the stepper fuses these accumulations internally).
struct ForceArrays {
    std::vector<double> conservative;
    std::vector<double> dissipative;
    std::vector<double> noise_impulse;
};

template <NoiseView NV>
ForceArrays accumulate_forces(const DpdSystem& sys, const PairTable& table,
                              const std::vector<double>& momentum, const NV& noise,
                              PairTable::Increment which = PairTable::Increment::full) {
    ForceArrays out;
    const std::size_t dof = sys.state.q.size();
    out.conservative.assign(dof, 0.0);
    out.dissipative.assign(dof, 0.0);
    out.noise_impulse.assign(dof, 0.0);
    std::vector<double> inv_mass(sys.size());
    for (std::size_t k = 0; k < sys.size(); ++k) inv_mass[k] = 1.0 / sys.masses[k];
    table.add_conservative(sys.params.a, out.conservative);
    table.add_dissipative(sys.params.gamma, momentum, inv_mass, out.dissipative);
    table.add_noise_impulse(sys.params.sigma, noise, which, out.noise_impulse);
    return out;
}

/// Persistent DPD integrator: owns pair tables and scratch buffers, advances
/// a system one step at a time with the configured SV scheme.
class DpdStepper {
public:
    DpdStepper(const DpdParams& params, SchemeSpec spec, double dt);
    ~DpdStepper();
    DpdStepper(const DpdStepper&) = delete;
    DpdStepper& operator=(const DpdStepper&) = delete;

    void step(DpdSystem& sys, StepperState& st);
    void step(DpdSystem& sys); // uses the internal StepperState

    const StepperState& state() const { return st_; }

    // Stage-backend surface consumed by the shared SV algorithms.
    class Backend;

private:
    DpdParams params_;
    SchemeSpec spec_;
    double dt_;
    std::unique_ptr<Backend> backend_;
    StepperState st_;
    SvAbScratch scratch_;
    SvBaScratch ba_scratch_;
};

/// One SV step of the DPD system (convenience wrapper; loops should hold a
/// DpdStepper).
void dpd_step(DpdSystem& sys, const SchemeSpec& spec, double dt, StepperState& st);

} // namespace svdpd
