// Copyright 2026 the svdpd developers
// SPDX-License-Identifier: Apache-2.0

#include "svdpd/kubo.hpp"

#include <algorithm>
#include <cmath>

#include "svdpd/integrators.hpp"
#include "svdpd/philox.hpp"
#include "svdpd/threading.hpp"

namespace svdpd {

void KuboParams::validate() const {
    if (!(sigma >= 0.0)) throw config_error("kubo: sigma must be >= 0");
    if (!(eps >= 0.0 && eps < 2.0)) throw config_error("kubo: eps must be in [0, 2)");
}

double KuboParams::omega() const { return std::sqrt(4.0 - eps * eps) / 2.0; }

KuboModel::KuboModel(const KuboParams& params) : sigma_(params.sigma), eps_(params.eps) {
    params.validate();
}

KuboModel kubo_model(const KuboParams& params) { return KuboModel(params); }

PhasePoint kubo_exact(double t, double w, const KuboParams& params) {
    const double omega = params.omega();
    const double phase = t + params.sigma * w;
    const double envelope = std::exp(-0.5 * params.eps * phase);
    const double c = std::cos(omega * phase);
    const double s = std::sin(omega * phase);
    const double q =
        envelope * (params.q0 * c + (params.p0 + 0.5 * params.eps * params.q0) / omega * s);
    const double p =
        envelope * (params.p0 * c - (params.q0 + 0.5 * params.eps * params.p0) / omega * s);
    return PhasePoint{{q}, {p}};
}

double kubo_expected_hamiltonian(double t, const KuboParams& params) {
    const double eps = params.eps;
    const double sigma2 = params.sigma * params.sigma;
    const double q0 = params.q0, p0 = params.p0;
    const double omega = params.omega();
    const double denom = 4.0 - eps * eps;

    const double a = 2.0 * (q0 * q0 + p0 * p0 + eps * q0 * p0) / denom;
    const double b = -(eps * eps * (q0 * q0 + p0 * p0) + 4.0 * eps * q0 * p0) / (2.0 * denom);
    const double c = eps * (q0 * q0 - p0 * p0) / (2.0 * std::sqrt(denom));

    const double slow_decay = std::exp(-0.5 * eps * (2.0 - eps * sigma2) * t);
    const double fast_decay = std::exp(-((2.0 - eps * eps) * sigma2 + eps) * t);
    const double angle = 2.0 * (1.0 - eps * sigma2) * omega * t;
    return a * slow_decay + fast_decay * (b * std::cos(angle) + c * std::sin(angle));
}

double KuboEnsembleResult::max_abs_error() const {
    double m = 0.0;
    for (double e : error) m = std::max(m, std::abs(e));
    return m;
}

double KuboEnsembleResult::median_abs_error() const {
    std::vector<double> abs_err(error.size());
    for (std::size_t i = 0; i < error.size(); ++i) abs_err[i] = std::abs(error[i]);
    std::sort(abs_err.begin(), abs_err.end());
    return abs_err.empty() ? 0.0 : abs_err[abs_err.size() / 2];
}

double KuboEnsembleResult::max_abs_error_in(double t_lo, double t_hi) const {
    double m = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i)
        if (times[i] >= t_lo && times[i] <= t_hi) m = std::max(m, std::abs(error[i]));
    return m;
}

KuboEnsembleResult kubo_ensemble(const SchemeSpec& spec, const KuboParams& params, double dt,
                                 double t_end, int n_paths, std::uint64_t seed, int threads) {
    params.validate();
    spec.validate();
    if (n_paths < 1) throw config_error("kubo: n_paths must be >= 1");
    if (!(dt > 0.0)) throw config_error("kubo: dt must be positive");
    if (!(t_end > 0.0)) throw config_error("kubo: t_end must be positive");

    const auto n_steps = static_cast<std::size_t>(std::llround(t_end / dt));
    const std::size_t n_points = n_steps + 1;
    const KuboModel model(params);

    // Paths grouped into fixed-size blocks; block partial sums are reduced in
    // block order afterwards, so the mean is independent of scheduling.
    constexpr std::size_t block_size = 25;
    const std::size_t n_blocks =
        (static_cast<std::size_t>(n_paths) + block_size - 1) / block_size;
    std::vector<std::vector<double>> block_sums(n_blocks);

    parallel_tasks(n_blocks, threads, [&](std::size_t blk) {
        auto& sum = block_sums[blk];
        sum.assign(n_points, 0.0);
        const std::size_t lo = blk * block_size;
        const std::size_t hi =
            std::min<std::size_t>(lo + block_size, static_cast<std::size_t>(n_paths));
        for (std::size_t path = lo; path < hi; ++path) {
            ModelStepper<KuboModel> path_stepper(model, spec, dt, derive_stream(seed, path));
            PhasePoint x{{params.q0}, {params.p0}};
            path_stepper.reset(x);
            sum[0] += 0.5 * (x.q[0] * x.q[0] + x.p[0] * x.p[0]);
            for (std::size_t k = 1; k <= n_steps; ++k) {
                path_stepper.step(x);
                sum[k] += 0.5 * (x.q[0] * x.q[0] + x.p[0] * x.p[0]);
            }
        }
    });

    KuboEnsembleResult out;
    out.times.resize(n_points);
    out.mean_h.assign(n_points, 0.0);
    out.exact_eh.resize(n_points);
    out.error.resize(n_points);
    for (const auto& sum : block_sums)
        for (std::size_t k = 0; k < n_points; ++k) out.mean_h[k] += sum[k];
    const double inv_paths = 1.0 / static_cast<double>(n_paths);
    for (std::size_t k = 0; k < n_points; ++k) {
        out.times[k] = static_cast<double>(k) * dt;
        out.mean_h[k] *= inv_paths;
        out.exact_eh[k] = kubo_expected_hamiltonian(out.times[k], params);
        out.error[k] = out.mean_h[k] - out.exact_eh[k];
    }
    return out;
}

} // namespace svdpd
