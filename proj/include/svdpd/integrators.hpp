// Copyright 2026 the svdpd developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "svdpd/errors.hpp"
#include "svdpd/model.hpp"
#include "svdpd/noise.hpp"
#include "svdpd/phase.hpp"
#include "svdpd/scheme.hpp"

namespace svdpd {

namespace detail {

/// a·x + (1−a)·y into buf. Degenerate weights return the exact endpoint
/// vector, which keeps the scheme-reduction lattice bitwise.
inline const std::vector<double>& blend(std::vector<double>& buf, double a,
                                        const std::vector<double>& x,
                                        const std::vector<double>& y) {
    if (a == 1.0) return x;
    if (a == 0.0) return y;
    buf.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) buf[i] = a * x[i] + (1.0 - a) * y[i];
    return buf;
}

constexpr double fixed_point_tol = 1e-12;
constexpr int fixed_point_max_iter = 50;

} // namespace detail

/// Reusable buffers for the SV-AB stage algorithm.
struct SvAbScratch {
    std::vector<double> k1_buf, k2_buf, fd, p_half, bracket, pred1, pred2, kick_const, p_new;

    void resize(std::size_t n) {
        for (auto* v : {&k1_buf, &k2_buf, &fd, &p_half, &bracket, &pred1, &pred2, &kick_const,
                        &p_new})
            v->resize(n);
    }
};

struct SvBaScratch {
    std::vector<double> p_new;
    void resize(std::size_t n) { p_new.resize(n); }
};

/*
 * One SV-AB step over a stage backend. The backend owns everything tied to a
 * concrete model (force evaluation, noise impulses, position wrapping); this
 * function owns the scheme structure shared by every model:
 *
 *   p^{k+1/2} = p^k + (Δt/2)[F^C(q^k) + F^D#1] + noise(q^k)·ΔW̄(t_k)
 *   q^{k+1}   = q^k + Δt ∇T(p^{k+1/2})  (+ momentum-noise drift)
 *   p^{k+1}   = p^{k+1/2} + (Δt/2)[F^C(q^{k+1}) + F^D#2] + noise(q^{k+1})·ΔW̄(t_{k+1/2})
 *
 * with the two dissipative evaluations chosen by the variant through
 *   F^D#1 = F^D(q^k,      α·p^k + (1−α)·p^{k−1+λ₁})
 *   F^D#2 = F^D(q^{k+1},  β·p^{k+λ₂} + (1−β)·p^{k+1})
 * and predictor momenta p^{k+λ} = p^k + λ·[Δt(F^C + F^D#1) + full-increment
 * noise]. β < 1 makes the final kick implicit; F^D is linear in p for the
 * supported models, so it is resolved by fixed-point iteration rather than
 * assembling the sparse linear system.
 */
template <class Backend, NoiseView NV>
void sv_ab_apply(Backend& b, const SchemeSpec& spec, double dt, const NV& noise,
                 std::vector<double>& q, std::vector<double>& p, StepperState& st,
                 SvAbScratch& s) {
    const std::size_t n = p.size();
    const double alpha = spec.effective_alpha();
    const double beta = spec.effective_beta();
    s.resize(n);

    b.begin_step(q, p, noise);

    const std::vector<double>& k1_arg = detail::blend(s.k1_buf, alpha, p, st.prev_predictor);
    b.fd_start(k1_arg, s.fd);
    const std::vector<double>& fc_a = b.fc_start();
    const std::vector<double>& nz1 = b.kick1_noise();
    for (std::size_t i = 0; i < n; ++i)
        s.p_half[i] = p[i] + 0.5 * dt * (fc_a[i] + s.fd[i]) + nz1[i];

    if (spec.uses_predictor()) {
        const std::vector<double>& nzf = b.pred_noise();
        for (std::size_t i = 0; i < n; ++i) s.bracket[i] = dt * (fc_a[i] + s.fd[i]) + nzf[i];
        for (std::size_t i = 0; i < n; ++i) s.pred1[i] = p[i] + spec.lambda1 * s.bracket[i];
        for (std::size_t i = 0; i < n; ++i) s.pred2[i] = p[i] + spec.lambda2 * s.bracket[i];
    }

    b.drift(q, s.p_half, dt, noise);

    const std::vector<double>& fc_b = b.fc_end();
    const std::vector<double>& nz2 = b.kick2_noise();
    if (beta == 1.0) {
        b.fd_end(s.pred2, s.fd);
        for (std::size_t i = 0; i < n; ++i)
            p[i] = s.p_half[i] + 0.5 * dt * (fc_b[i] + s.fd[i]) + nz2[i];
    } else {
        for (std::size_t i = 0; i < n; ++i)
            s.kick_const[i] = s.p_half[i] + 0.5 * dt * fc_b[i] + nz2[i];
        s.p_new = s.kick_const;
        double delta = 0.0;
        for (int it = 0;; ++it) {
            const std::vector<double>& arg = detail::blend(s.k2_buf, beta, s.pred2, s.p_new);
            b.fd_end(arg, s.fd);
            delta = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double v = s.kick_const[i] + 0.5 * dt * s.fd[i];
                delta = std::max(delta, std::abs(v - s.p_new[i]));
                s.p_new[i] = v;
            }
            if (delta <= detail::fixed_point_tol) break;
            if (it + 1 >= detail::fixed_point_max_iter)
                throw numerical_error(st.step_index, "implicit dissipative kick did not converge");
        }
        p = s.p_new;
    }

    if (spec.uses_predictor()) std::swap(st.prev_predictor, s.pred1);
    check_finite(q, p, st.step_index);
    ++st.step_index;
}

/*
 * One SV-BA step: half-drift, full kick, half-drift. The dissipative force is
 * discretized at the step-start state (q^k, p^k); the position-noise kick uses
 * the full increment at the midpoint configuration.
 */
template <class Backend, NoiseView NV>
void sv_ba_apply(Backend& b, double dt, const NV& noise, std::vector<double>& q,
                 std::vector<double>& p, std::uint64_t step, SvBaScratch& s) {
    const std::size_t n = p.size();
    s.resize(n);

    b.ba_begin(q, p, noise);
    b.ba_drift_first(q, p, dt, noise);
    const std::vector<double>& fc_m = b.fc_mid();
    const std::vector<double>& fd_k = b.fd_step_start();
    const std::vector<double>& nz = b.mid_noise();
    for (std::size_t i = 0; i < n; ++i) s.p_new[i] = p[i] + dt * (fc_m[i] + fd_k[i]) + nz[i];
    b.ba_drift_second(q, s.p_new, dt, noise);
    p = s.p_new;
    check_finite(q, p, step);
}

/*
 * Stage backend for any SeparableModel: dense gradients, channels enumerated
 * per configuration. The DPD engine provides its own cell-list backend with
 * the same surface.
 */
template <SeparableModel M>
class ModelBackend {
public:
    explicit ModelBackend(const M& model) : model_(&model) {
        const std::size_t n = model.dim();
        for (auto* v : {&fc_a_, &fc_b_, &kick1_noise_, &pred_noise_, &kick2_noise_, &fsd_h2_,
                        &fd_k_, &fsd_sum_, &mid_noise_, &grad_, &snoise_})
            v->assign(n, 0.0);
    }

    template <NoiseView NV>
    void begin_step(const std::vector<double>& q, const std::vector<double>& p, const NV& noise) {
        q_start_ = q;
        p_start_ = p;
        model_->channels(q, ch_start_);
        model_->grad_V(q, grad_);
        for (std::size_t i = 0; i < grad_.size(); ++i) fc_a_[i] = -grad_[i];
        zero(kick1_noise_);
        zero(pred_noise_);
        zero(fsd_h2_);
        draws_start_.resize(ch_start_.size());
        for (std::size_t k = 0; k < ch_start_.size(); ++k) {
            const Channel c = ch_start_[k];
            const ChannelDraw d = noise.at(c);
            draws_start_[k] = d;
            model_->add_grad_U(q, c, -d.half_first, kick1_noise_);
            model_->add_grad_U(q, c, -d.full, pred_noise_);
            // F^SD is discretized at the step-start state for both half-kicks.
            model_->add_stochastic_dissipative(q_start_, p_start_, c, d.half_first, kick1_noise_);
            model_->add_stochastic_dissipative(q_start_, p_start_, c, d.half_second, fsd_h2_);
        }
    }

    const std::vector<double>& fc_start() const { return fc_a_; }
    const std::vector<double>& kick1_noise() const { return kick1_noise_; }
    const std::vector<double>& pred_noise() const { return pred_noise_; }

    void fd_start(const std::vector<double>& p_arg, std::vector<double>& out) const {
        model_->dissipative(q_start_, p_arg, out);
    }

    template <NoiseView NV>
    void drift(std::vector<double>& q, const std::vector<double>& p_half, double dt,
               const NV& noise) {
        model_->grad_T(p_half, grad_);
        zero(snoise_);
        for (std::size_t k = 0; k < ch_start_.size(); ++k)
            model_->add_grad_S(p_half, ch_start_[k], draws_start_[k].full, snoise_);
        for (std::size_t i = 0; i < q.size(); ++i) q[i] += dt * grad_[i] + snoise_[i];

        q_end_ = &q;
        model_->channels(q, ch_end_);
        model_->grad_V(q, grad_);
        for (std::size_t i = 0; i < grad_.size(); ++i) fc_b_[i] = -grad_[i];
        kick2_noise_ = fsd_h2_;
        for (const Channel c : ch_end_)
            model_->add_grad_U(q, c, -noise.at(c).half_second, kick2_noise_);
    }

    const std::vector<double>& fc_end() const { return fc_b_; }
    const std::vector<double>& kick2_noise() const { return kick2_noise_; }

    void fd_end(const std::vector<double>& p_arg, std::vector<double>& out) const {
        model_->dissipative(*q_end_, p_arg, out);
    }

    // --- SV-BA stages ---

    template <NoiseView NV>
    void ba_begin(const std::vector<double>& q, const std::vector<double>& p, const NV& noise) {
        model_->channels(q, ch_start_);
        draws_start_.resize(ch_start_.size());
        for (std::size_t k = 0; k < ch_start_.size(); ++k)
            draws_start_[k] = noise.at(ch_start_[k]);
        model_->dissipative(q, p, fd_k_);
        zero(fsd_sum_);
        for (std::size_t k = 0; k < ch_start_.size(); ++k)
            model_->add_stochastic_dissipative(q, p, ch_start_[k], draws_start_[k].full,
                                               fsd_sum_);
    }

    template <NoiseView NV>
    void ba_drift_first(std::vector<double>& q, const std::vector<double>& p, double dt,
                        const NV& noise) {
        half_drift(q, p, dt, /*first=*/true);
        model_->channels(q, ch_end_);
        model_->grad_V(q, grad_);
        for (std::size_t i = 0; i < grad_.size(); ++i) fc_b_[i] = -grad_[i];
        mid_noise_ = fsd_sum_;
        for (const Channel c : ch_end_) model_->add_grad_U(q, c, -noise.at(c).full, mid_noise_);
    }

    const std::vector<double>& fc_mid() const { return fc_b_; }
    const std::vector<double>& fd_step_start() const { return fd_k_; }
    const std::vector<double>& mid_noise() const { return mid_noise_; }

    template <NoiseView NV>
    void ba_drift_second(std::vector<double>& q, const std::vector<double>& p_new, double dt,
                         const NV&) {
        half_drift(q, p_new, dt, /*first=*/false);
    }

private:
    static void zero(std::vector<double>& v) { std::fill(v.begin(), v.end(), 0.0); }

    void half_drift(std::vector<double>& q, const std::vector<double>& p, double dt, bool first) {
        model_->grad_T(p, grad_);
        zero(snoise_);
        for (std::size_t k = 0; k < ch_start_.size(); ++k) {
            const double dw = first ? draws_start_[k].half_first : draws_start_[k].half_second;
            model_->add_grad_S(p, ch_start_[k], dw, snoise_);
        }
        for (std::size_t i = 0; i < q.size(); ++i) q[i] += 0.5 * dt * grad_[i] + snoise_[i];
    }

    const M* model_;
    std::vector<double> q_start_, p_start_;
    const std::vector<double>* q_end_ = nullptr;
    std::vector<Channel> ch_start_, ch_end_;
    std::vector<ChannelDraw> draws_start_;
    std::vector<double> fc_a_, fc_b_, kick1_noise_, pred_noise_, kick2_noise_, fsd_h2_;
    std::vector<double> fd_k_, fsd_sum_, mid_noise_;
    std::vector<double> grad_, snoise_;
};

/// External-force values fixed from outside a first-order step, used to wire
/// the two Euler half-maps into an SV composite.
struct EulerForceOverride {
    std::optional<std::vector<double>> dissipative; // replaces F^D(q^k, p^k)
    std::optional<std::vector<double>> fsd_impulse; // replaces Σ_c F^SD_c(q^k,p^k)·ΔW_c
};

/// Euler-A: position gradients at (q^{k+1}, p^k); explicit for separable
/// models. External forces default to their step-start discretization.
template <SeparableModel M, NoiseView NV>
PhasePoint euler_a_step(const M& m, const PhasePoint& x, double dt, const NV& noise,
                        std::uint64_t step = 0, const EulerForceOverride* ext = nullptr) {
    const std::size_t n = m.dim();
    std::vector<Channel> ch;
    m.channels(x.q, ch);

    PhasePoint out = x;
    std::vector<double> grad(n);
    m.grad_T(x.p, grad);
    for (std::size_t i = 0; i < n; ++i) out.q[i] = x.q[i] + dt * grad[i];
    for (const Channel c : ch) m.add_grad_S(x.p, c, noise.at(c).full, out.q);

    std::vector<double> fd(n);
    if (ext && ext->dissipative) fd = *ext->dissipative;
    else m.dissipative(x.q, x.p, fd);

    std::vector<double> fsd(n, 0.0);
    if (ext && ext->fsd_impulse) fsd = *ext->fsd_impulse;
    else
        for (const Channel c : ch) m.add_stochastic_dissipative(x.q, x.p, c, noise.at(c).full, fsd);

    m.grad_V(out.q, grad);
    std::vector<Channel> ch_new;
    m.channels(out.q, ch_new);
    for (std::size_t i = 0; i < n; ++i) out.p[i] = x.p[i] + dt * (-grad[i] + fd[i]) + fsd[i];
    for (const Channel c : ch_new) m.add_grad_U(out.q, c, -noise.at(c).full, out.p);

    check_finite(out.q, out.p, step);
    return out;
}

/// Euler-B: position gradients at (q^k, p^{k+1}); the mirror of Euler-A.
template <SeparableModel M, NoiseView NV>
PhasePoint euler_b_step(const M& m, const PhasePoint& x, double dt, const NV& noise,
                        std::uint64_t step = 0, const EulerForceOverride* ext = nullptr) {
    const std::size_t n = m.dim();
    std::vector<Channel> ch;
    m.channels(x.q, ch);

    std::vector<double> fd(n);
    if (ext && ext->dissipative) fd = *ext->dissipative;
    else m.dissipative(x.q, x.p, fd);

    std::vector<double> fsd(n, 0.0);
    if (ext && ext->fsd_impulse) fsd = *ext->fsd_impulse;
    else
        for (const Channel c : ch) m.add_stochastic_dissipative(x.q, x.p, c, noise.at(c).full, fsd);

    PhasePoint out = x;
    std::vector<double> grad(n);
    m.grad_V(x.q, grad);
    for (std::size_t i = 0; i < n; ++i) out.p[i] = x.p[i] + dt * (-grad[i] + fd[i]) + fsd[i];
    for (const Channel c : ch) m.add_grad_U(x.q, c, -noise.at(c).full, out.p);

    m.grad_T(out.p, grad);
    for (std::size_t i = 0; i < n; ++i) out.q[i] = x.q[i] + dt * grad[i];
    for (const Channel c : ch) m.add_grad_S(out.p, c, noise.at(c).full, out.q);

    check_finite(out.q, out.p, step);
    return out;
}

/// One SV-AB step of a generic separable model. Convenience wrapper around
/// the stage algorithm; trajectory loops should hold a ModelStepper instead.
template <SeparableModel M, NoiseView NV>
PhasePoint sv_ab_step(const M& m, const PhasePoint& x, StepperState& st, double dt,
                      const NV& noise, const SchemeSpec& spec) {
    ModelBackend<M> backend(m);
    SvAbScratch scratch;
    PhasePoint out = x;
    sv_ab_apply(backend, spec, dt, noise, out.q, out.p, st, scratch);
    return out;
}

/// One SV-BA step of a generic separable model.
template <SeparableModel M, NoiseView NV>
PhasePoint sv_ba_step(const M& m, const PhasePoint& x, double dt, const NV& noise,
                      std::uint64_t step = 0) {
    ModelBackend<M> backend(m);
    SvBaScratch scratch;
    PhasePoint out = x;
    sv_ba_apply(backend, dt, noise, out.q, out.p, step, scratch);
    return out;
}

/// Persistent stepper for a generic separable model: preallocated buffers,
/// per-step noise views derived from (seed, step index).
template <SeparableModel M>
class ModelStepper {
public:
    ModelStepper(M model, SchemeSpec spec, double dt, std::uint64_t seed)
        : model_(std::move(model)), spec_(spec), dt_(dt), seed_(seed), backend_(model_) {
        spec_.validate();
        if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
        scratch_.resize(model_.dim());
        ba_scratch_.resize(model_.dim());
    }

    ModelStepper(const ModelStepper&) = delete;
    ModelStepper& operator=(const ModelStepper&) = delete;

    void reset(const PhasePoint& start) { st_ = StepperState::initial(start.p); }

    void step(PhasePoint& x) {
        if (st_.step_index == 0 && st_.prev_predictor.size() != x.p.size())
            st_.prev_predictor = x.p;
        const StepNoise noise(seed_, static_cast<std::uint32_t>(st_.step_index), dt_,
                              spec_.noise_mode);
        switch (spec_.family) {
        case SchemeFamily::sv_ab:
            sv_ab_apply(backend_, spec_, dt_, noise, x.q, x.p, st_, scratch_);
            break;
        case SchemeFamily::sv_ba:
            sv_ba_apply(backend_, dt_, noise, x.q, x.p, st_.step_index, ba_scratch_);
            ++st_.step_index;
            break;
        case SchemeFamily::euler_a:
            x = euler_a_step(model_, x, dt_, noise, st_.step_index);
            ++st_.step_index;
            break;
        case SchemeFamily::euler_b:
            x = euler_b_step(model_, x, dt_, noise, st_.step_index);
            ++st_.step_index;
            break;
        }
    }

    const StepperState& state() const { return st_; }
    const M& model() const { return model_; }

private:
    M model_;
    SchemeSpec spec_;
    double dt_;
    std::uint64_t seed_;
    ModelBackend<M> backend_;
    SvAbScratch scratch_;
    SvBaScratch ba_scratch_;
    StepperState st_;
};

} // namespace svdpd
