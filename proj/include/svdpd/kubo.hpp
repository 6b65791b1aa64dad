// Copyright 2026 the svdpd developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "svdpd/model.hpp"
#include "svdpd/phase.hpp"
#include "svdpd/scheme.hpp"

namespace svdpd {

/*
 * Damped Kubo oscillator: a one-degree-of-freedom stochastic Hamiltonian
 * system with multiplicative noise and linear damping,
 *
 *   H(q,p) = p²/2 + q²/2,    h(q,p) = σ(p²/2 + q²/2),
 *   F^D = −εp,               F^SD = −εσp,
 *
 * which admits a closed-form solution and a closed-form expected Hamiltonian.
 * Standard validation target for stochastic symplectic integrators.
 */
struct KuboParams {
    double sigma = 0.2;  // noise intensity, ≥ 0
    double eps = 0.001;  // damping coefficient, in [0, 2)
    double q0 = 0.0;
    double p0 = 1.0;

    void validate() const;
    double omega() const; // √(4−ε²)/2, real because ε < 2
};

class KuboModel {
public:
    explicit KuboModel(const KuboParams& params);

    std::size_t dim() const { return 1; }
    void grad_T(const std::vector<double>& p, std::vector<double>& out) const { out[0] = p[0]; }
    void grad_V(const std::vector<double>& q, std::vector<double>& out) const { out[0] = q[0]; }
    void channels(const std::vector<double>&, std::vector<Channel>& out) const {
        out.assign(1, Channel{0, 1});
    }
    void add_grad_U(const std::vector<double>& q, Channel, double scale,
                    std::vector<double>& acc) const {
        acc[0] += scale * sigma_ * q[0];
    }
    void add_grad_S(const std::vector<double>& p, Channel, double scale,
                    std::vector<double>& acc) const {
        acc[0] += scale * sigma_ * p[0];
    }
    void dissipative(const std::vector<double>&, const std::vector<double>& p,
                     std::vector<double>& out) const {
        out[0] = -eps_ * p[0];
    }
    void add_stochastic_dissipative(const std::vector<double>&, const std::vector<double>& p,
                                    Channel, double scale, std::vector<double>& acc) const {
        acc[0] += scale * (-eps_ * sigma_ * p[0]);
    }

    double sigma() const { return sigma_; }
    double eps() const { return eps_; }

private:
    double sigma_, eps_;
};

KuboModel kubo_model(const KuboParams& params);

/// Closed-form solution at time t given the realized Wiener value w = W(t).
PhasePoint kubo_exact(double t, double w, const KuboParams& params);

/// Closed-form E[H(q(t), p(t))].
double kubo_expected_hamiltonian(double t, const KuboParams& params);

/// Ensemble-mean Hamiltonian against the closed form, on the integration grid.
struct KuboEnsembleResult {
    std::vector<double> times;    // t_k = k·dt
    std::vector<double> mean_h;   // ensemble mean of H(q,p)
    std::vector<double> exact_eh; // closed-form E(H)
    std::vector<double> error;    // mean_h − exact_eh

    double max_abs_error() const;
    double median_abs_error() const;
    /// Max |error| restricted to times in [t_lo, t_hi].
    double max_abs_error_in(double t_lo, double t_hi) const;
};

/// Integrate n_paths independent trajectories from (q0, p0) and average H on
/// the step grid. Paths use derived noise streams of `seed`; the reduction
/// over paths is block-ordered, so the result is bitwise identical for any
/// thread count.
KuboEnsembleResult kubo_ensemble(const SchemeSpec& spec, const KuboParams& params, double dt,
                                 double t_end, int n_paths, std::uint64_t seed, int threads = 1);

} // namespace svdpd
