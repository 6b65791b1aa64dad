// Copyright 2026 the svdpd developers
// SPDX-License-Identifier: Apache-2.0

#include "svdpd/dpd.hpp"

#include <cmath>

#include "svdpd/integrators.hpp"
#include "svdpd/philox.hpp"

namespace svdpd {

void DpdParams::validate() const {
    std::vector<std::string> bad;
    if (n_particles < 2) bad.push_back("n_particles must be >= 2");
    if (!(mass > 0.0)) bad.push_back("mass must be positive");
    if (!(a > 0.0)) bad.push_back("a must be positive");
    if (!(gamma >= 0.0)) bad.push_back("gamma must be >= 0");
    if (!(sigma >= 0.0)) bad.push_back("sigma must be >= 0");
    if (!(q_c > 0.0)) bad.push_back("q_c must be positive");
    if (!(kT_target > 0.0)) bad.push_back("kT_target must be positive");
    for (int d = 0; d < 3; ++d)
        if (!(box[d] >= 2.0 * q_c)) bad.push_back("box edge must be >= 2*q_c");
    if (!bad.empty()) {
        std::string msg = "invalid dpd parameters:";
        for (const auto& b : bad) msg += " " + b + ";";
        throw config_error(msg);
    }
}

std::optional<std::string> DpdParams::fluctuation_dissipation_warning() const {
    const double mismatch = std::abs(sigma * sigma - 2.0 * gamma * kT_target);
    if (mismatch > 1e-9)
        return "sigma^2 != 2*gamma*kT_target (|diff| = " + std::to_string(mismatch) +
               "); the run will not sample the canonical ensemble at kT_target";
    return std::nullopt;
}

void wrap_positions(std::vector<double>& q, const std::array<double, 3>& box) {
    const std::size_t n = q.size() / 3;
    for (std::size_t i = 0; i < n; ++i)
        for (int d = 0; d < 3; ++d) {
            double& x = q[3 * i + d];
            x -= box[d] * std::floor(x / box[d]);
        }
}

DpdSystem init_system(const DpdParams& params, std::uint64_t seed) {
    params.validate();
    const std::size_t n = static_cast<std::size_t>(params.n_particles);

    DpdSystem sys;
    sys.params = params;
    sys.seed = seed;
    sys.masses.assign(n, params.mass);
    sys.state.q.resize(3 * n);
    sys.state.p.resize(3 * n);

    for (std::size_t k = 0; k < 3 * n; ++k)
        sys.state.q[k] = params.box[k % 3] * uniform_from_counter(seed, k);

    const double p_scale = std::sqrt(params.mass * params.kT_target);
    for (std::size_t k = 0; k < 3 * n; ++k)
        sys.state.p[k] = p_scale * gaussian_from_counter(seed, k);

    // Zero net momentum, then rescale to the target kinetic temperature.
    for (int d = 0; d < 3; ++d) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += sys.state.p[3 * i + d];
        mean /= static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) sys.state.p[3 * i + d] -= mean;
    }
    double v2_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3 v = (1.0 / sys.masses[i]) * vec_at(sys.state.p, i);
        v2_sum += norm2(v);
    }
    const double kT_now = v2_sum / (3.0 * static_cast<double>(n));
    const double rescale = std::sqrt(params.kT_target / kT_now);
    for (double& pk : sys.state.p) pk *= rescale;

    return sys;
}

// --- cell grid -------------------------------------------------------------

void CellGrid::build(const std::vector<double>& q, const std::array<double, 3>& box,
                     double q_c) {
    const std::size_t n = q.size() / 3;
    int n_cells = 1;
    for (int d = 0; d < 3; ++d) {
        dims[d] = std::max(1, static_cast<int>(std::floor(box[d] / q_c)));
        cell_size[d] = box[d] / dims[d];
        n_cells *= dims[d];
    }

    cell_start.assign(static_cast<std::size_t>(n_cells) + 1, 0);
    order.resize(n);

    auto cell_of = [&](std::size_t i) {
        int idx[3];
        for (int d = 0; d < 3; ++d) {
            int c = static_cast<int>(std::floor(q[3 * i + d] / cell_size[d]));
            // Wrapped coordinates can land exactly on the upper edge.
            if (c >= dims[d]) c = dims[d] - 1;
            if (c < 0) c = 0;
            idx[d] = c;
        }
        return idx[0] + dims[0] * (idx[1] + dims[1] * idx[2]);
    };

    for (std::size_t i = 0; i < n; ++i) ++cell_start[static_cast<std::size_t>(cell_of(i)) + 1];
    for (std::size_t c = 1; c < cell_start.size(); ++c) cell_start[c] += cell_start[c - 1];
    std::vector<std::uint32_t> fill(cell_start.begin(), cell_start.end() - 1);
    for (std::size_t i = 0; i < n; ++i)
        order[fill[static_cast<std::size_t>(cell_of(i))]++] = static_cast<std::uint32_t>(i);
}

// --- pair table ------------------------------------------------------------

void PairTable::try_add_pair(const std::vector<double>& q, const DpdParams& params,
                             std::uint64_t step, std::uint32_t i, std::uint32_t j) {
    Vec3 delta = minimum_image(vec_at(q, i) - vec_at(q, j), params.box);
    const double r2 = norm2(delta);
    if (r2 >= params.q_c * params.q_c) return;
    if (r2 == 0.0) throw singular_pair_error(step, std::min(i, j), std::max(i, j));

    const double r = std::sqrt(r2);
    PairEntry e;
    if (i < j) {
        e.i = i;
        e.j = j;
        e.rhat = (1.0 / r) * delta;
    } else {
        e.i = j;
        e.j = i;
        e.rhat = (-1.0 / r) * delta;
    }
    e.r = r;
    e.wr = 1.0 - r / params.q_c;
    e.wd = e.wr * e.wr;
    pairs_.push_back(e);
}

void PairTable::build_all_pairs(const std::vector<double>& q, const DpdParams& params,
                                std::uint64_t step) {
    const std::uint32_t n = static_cast<std::uint32_t>(q.size() / 3);
    for (std::uint32_t i = 0; i + 1 < n; ++i)
        for (std::uint32_t j = i + 1; j < n; ++j) try_add_pair(q, params, step, i, j);
}

namespace {
// Half of the 26 neighbor offsets; together with the in-cell i<j loop this
// visits every cell pair exactly once.
constexpr int half_stencil[13][3] = {
    {1, 0, 0},  {-1, 1, 0}, {0, 1, 0},  {1, 1, 0},  {-1, -1, 1}, {0, -1, 1}, {1, -1, 1},
    {-1, 0, 1}, {0, 0, 1},  {1, 0, 1},  {-1, 1, 1}, {0, 1, 1},   {1, 1, 1},
};
} // namespace

void PairTable::build_cells(const std::vector<double>& q, const DpdParams& params,
                            std::uint64_t step) {
    const auto& g = grid_;
    auto cell_index = [&](int cx, int cy, int cz) {
        return static_cast<std::size_t>(cx + g.dims[0] * (cy + g.dims[1] * cz));
    };
    auto wrap = [](int c, int n) { return c < 0 ? c + n : (c >= n ? c - n : c); };

    for (int cz = 0; cz < g.dims[2]; ++cz)
        for (int cy = 0; cy < g.dims[1]; ++cy)
            for (int cx = 0; cx < g.dims[0]; ++cx) {
                const std::size_t c = cell_index(cx, cy, cz);
                const std::uint32_t begin = g.cell_start[c], end = g.cell_start[c + 1];
                for (std::uint32_t u = begin; u < end; ++u)
                    for (std::uint32_t v = u + 1; v < end; ++v)
                        try_add_pair(q, params, step, g.order[u], g.order[v]);
                for (const auto& off : half_stencil) {
                    const std::size_t c2 = cell_index(wrap(cx + off[0], g.dims[0]),
                                                      wrap(cy + off[1], g.dims[1]),
                                                      wrap(cz + off[2], g.dims[2]));
                    const std::uint32_t b2 = g.cell_start[c2], e2 = g.cell_start[c2 + 1];
                    for (std::uint32_t u = begin; u < end; ++u)
                        for (std::uint32_t v = b2; v < e2; ++v)
                            try_add_pair(q, params, step, g.order[u], g.order[v]);
                }
            }
}

void PairTable::build(const std::vector<double>& q, const DpdParams& params,
                      std::uint64_t step) {
    pairs_.clear();
    grid_.build(q, params.box, params.q_c);
    if (grid_.stencil_usable()) build_cells(q, params, step);
    else build_all_pairs(q, params, step);
}

void PairTable::add_conservative(double a, std::vector<double>& force) const {
    for (const PairEntry& e : pairs_) {
        const Vec3 f = (a * e.wr) * e.rhat;
        add_vec(force, e.i, f);
        sub_vec(force, e.j, f);
    }
}

void PairTable::add_dissipative(double gamma, const std::vector<double>& p,
                                const std::vector<double>& inv_mass,
                                std::vector<double>& force) const {
    for (const PairEntry& e : pairs_) {
        const Vec3 vij = inv_mass[e.i] * vec_at(p, e.i) - inv_mass[e.j] * vec_at(p, e.j);
        const Vec3 f = (-gamma * e.wd * dot(e.rhat, vij)) * e.rhat;
        add_vec(force, e.i, f);
        sub_vec(force, e.j, f);
    }
}

double PairTable::potential_energy(double a, double q_c) const {
    double v = 0.0;
    for (const PairEntry& e : pairs_) v += 0.5 * a * q_c * e.wr * e.wr;
    return v;
}

// --- stepper ---------------------------------------------------------------

/// Cell-list stage backend for the shared SV algorithms. F^SD ≡ 0 and the
/// noise Hamiltonians have no momentum part, so drifts are plain p/m updates
/// and the kick noise is the pairwise ω^R impulse alone.
class DpdStepper::Backend {
public:
    explicit Backend(const DpdParams& params) : params_(params) {}

    void bind(const DpdSystem& sys) {
        const std::size_t n = sys.size();
        inv_mass_.resize(n);
        for (std::size_t i = 0; i < n; ++i) inv_mass_[i] = 1.0 / sys.masses[i];
        const std::size_t dof = 3 * n;
        if (fc_a_.size() != dof)
            for (auto* v : {&fc_a_, &fc_b_, &kick1_noise_, &pred_noise_, &kick2_noise_, &fd_k_,
                            &mid_noise_})
                v->assign(dof, 0.0);
        step_ = sys.step_index;
    }

    template <NoiseView NV>
    void begin_step(const std::vector<double>& q, const std::vector<double>&, const NV& noise) {
        table_a_.build(q, params_, step_);
        zero(fc_a_);
        zero(kick1_noise_);
        zero(pred_noise_);
        table_a_.add_conservative(params_.a, fc_a_);
        table_a_.add_noise_impulse(params_.sigma, noise, PairTable::Increment::half_first,
                                   kick1_noise_);
        table_a_.add_noise_impulse(params_.sigma, noise, PairTable::Increment::full,
                                   pred_noise_);
    }

    const std::vector<double>& fc_start() const { return fc_a_; }
    const std::vector<double>& kick1_noise() const { return kick1_noise_; }
    const std::vector<double>& pred_noise() const { return pred_noise_; }

    void fd_start(const std::vector<double>& p_arg, std::vector<double>& out) const {
        zero(out);
        table_a_.add_dissipative(params_.gamma, p_arg, inv_mass_, out);
    }

    template <NoiseView NV>
    void drift(std::vector<double>& q, const std::vector<double>& p_half, double dt,
               const NV& noise) {
        const std::size_t n = q.size() / 3;
        for (std::size_t i = 0; i < n; ++i)
            for (int d = 0; d < 3; ++d) q[3 * i + d] += dt * p_half[3 * i + d] * inv_mass_[i];
        wrap_positions(q, params_.box);

        table_b_.build(q, params_, step_);
        zero(fc_b_);
        zero(kick2_noise_);
        table_b_.add_conservative(params_.a, fc_b_);
        table_b_.add_noise_impulse(params_.sigma, noise, PairTable::Increment::half_second,
                                   kick2_noise_);
    }

    const std::vector<double>& fc_end() const { return fc_b_; }
    const std::vector<double>& kick2_noise() const { return kick2_noise_; }

    void fd_end(const std::vector<double>& p_arg, std::vector<double>& out) const {
        zero(out);
        table_b_.add_dissipative(params_.gamma, p_arg, inv_mass_, out);
    }

    // --- SV-BA stages ---

    template <NoiseView NV>
    void ba_begin(const std::vector<double>& q, const std::vector<double>& p, const NV&) {
        table_a_.build(q, params_, step_);
        zero(fd_k_);
        table_a_.add_dissipative(params_.gamma, p, inv_mass_, fd_k_);
    }

    template <NoiseView NV>
    void ba_drift_first(std::vector<double>& q, const std::vector<double>& p, double dt,
                        const NV& noise) {
        half_drift(q, p, dt);
        wrap_positions(q, params_.box);
        table_b_.build(q, params_, step_);
        zero(fc_b_);
        zero(mid_noise_);
        table_b_.add_conservative(params_.a, fc_b_);
        table_b_.add_noise_impulse(params_.sigma, noise, PairTable::Increment::full, mid_noise_);
    }

    const std::vector<double>& fc_mid() const { return fc_b_; }
    const std::vector<double>& fd_step_start() const { return fd_k_; }
    const std::vector<double>& mid_noise() const { return mid_noise_; }

    template <NoiseView NV>
    void ba_drift_second(std::vector<double>& q, const std::vector<double>& p_new, double dt,
                         const NV&) {
        half_drift(q, p_new, dt);
        wrap_positions(q, params_.box);
    }

private:
    static void zero(std::vector<double>& v) { std::fill(v.begin(), v.end(), 0.0); }

    void half_drift(std::vector<double>& q, const std::vector<double>& p, double dt) const {
        const std::size_t n = q.size() / 3;
        for (std::size_t i = 0; i < n; ++i)
            for (int d = 0; d < 3; ++d) q[3 * i + d] += 0.5 * dt * p[3 * i + d] * inv_mass_[i];
    }

    DpdParams params_;
    std::uint64_t step_ = 0;
    std::vector<double> inv_mass_;
    PairTable table_a_, table_b_;
    std::vector<double> fc_a_, fc_b_, kick1_noise_, pred_noise_, kick2_noise_, fd_k_, mid_noise_;
};

DpdStepper::DpdStepper(const DpdParams& params, SchemeSpec spec, double dt)
    : params_(params), spec_(spec), dt_(dt), backend_(std::make_unique<Backend>(params)) {
    params_.validate();
    spec_.validate();
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    if (spec_.family != SchemeFamily::sv_ab && spec_.family != SchemeFamily::sv_ba)
        throw config_error("dpd stepper supports sv_ab and sv_ba families");
}

DpdStepper::~DpdStepper() = default;

void DpdStepper::step(DpdSystem& sys, StepperState& st) {
    if (st.step_index == 0 && st.prev_predictor.size() != sys.state.p.size())
        st.prev_predictor = sys.state.p;
    backend_->bind(sys);
    const StepNoise noise(sys.seed, static_cast<std::uint32_t>(sys.step_index), dt_,
                          spec_.noise_mode);
    if (spec_.family == SchemeFamily::sv_ab) {
        scratch_.resize(sys.state.p.size());
        sv_ab_apply(*backend_, spec_, dt_, noise, sys.state.q, sys.state.p, st, scratch_);
    } else {
        ba_scratch_.resize(sys.state.p.size());
        sv_ba_apply(*backend_, dt_, noise, sys.state.q, sys.state.p, st.step_index, ba_scratch_);
        ++st.step_index;
    }
    ++sys.step_index;
}

void DpdStepper::step(DpdSystem& sys) { step(sys, st_); }

void dpd_step(DpdSystem& sys, const SchemeSpec& spec, double dt, StepperState& st) {
    DpdStepper stepper(sys.params, spec, dt);
    stepper.step(sys, st);
}

} // namespace svdpd
