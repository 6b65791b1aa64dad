// Copyright 2026 the svdpd developers
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite: one self-contained check per shipped guarantee, each
// printing a single [PASS]/[FAIL] line with the measured numbers. Exit code
// is the number of failed checks.
//
//   usage: svdpd_acceptance [--full] [N ...]
//
// --full (or SVDPD_ACCEPT_FULL=1) switches check 2 to the full-size ensemble
// study (2000 paths to t = 2000); the default is the reduced variant sized
// for CI.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "svdpd/config.hpp"
#include "svdpd/drivers.hpp"
#include "svdpd/integrators.hpp"
#include "svdpd/kubo.hpp"
#include "svdpd/philox.hpp"
#include "svdpd/stats.hpp"

using namespace svdpd;
namespace fs = std::filesystem;

namespace {

bool g_full_mode = false;

struct ZeroNoise {
    ChannelDraw at(Channel) const { return {}; }
};

SchemeSpec sv_ab(SvAbVariant v, double alpha, double beta, double l1, double l2) {
    SchemeSpec s;
    s.family = SchemeFamily::sv_ab;
    s.variant = v;
    s.alpha = alpha;
    s.beta = beta;
    s.lambda1 = l1;
    s.lambda2 = l2;
    return s;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// 1. Expected-Hamiltonian identity at t = 0.

bool check_kubo_identity(std::string& detail) {
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        KuboParams kp;
        kp.q0 = 4.0 * uniform_from_counter(1, 3 * k) - 2.0;
        kp.p0 = 4.0 * uniform_from_counter(1, 3 * k + 1) - 2.0;
        kp.eps = 1.9 * uniform_from_counter(1, 3 * k + 2);
        kp.sigma = 0.3;
        const double h0 = 0.5 * (kp.q0 * kp.q0 + kp.p0 * kp.p0);
        worst = std::max(worst, std::abs(kubo_expected_hamiltonian(0.0, kp) - h0));
    }
    detail = "max |E(H)(0) - H0| = " + fmt(worst) + " over 1000 draws (tol 1e-12)";
    return worst <= 1e-12;
}

// ---------------------------------------------------------------------------
// 2. Ensemble-mean Hamiltonian error for the six scheme variants.

bool check_kubo_ensemble(std::string& detail) {
    const KuboParams kp{0.2, 0.001, 0.0, 1.0};
    const double dt = 0.1;
    const double t_end = g_full_mode ? 2000.0 : 200.0;
    const int n_paths = g_full_mode ? 2000 : 200;
    const double tol_max = g_full_mode ? 1e-2 : 2e-2;
    const double tol_median = g_full_mode ? 5e-3 : 2e-2;
    const std::uint64_t seed = 20260808;

    std::vector<std::pair<const char*, SchemeSpec>> variants = {
        {"ab1", sv_ab(SvAbVariant::ab1, 1.0, 0.0, 0.5, 0.5)},
        {"ab2(0.7)", sv_ab(SvAbVariant::ab2_gcc, 1.0, 1.0, 0.7, 0.7)},
        {"ab3(0.3)", sv_ab(SvAbVariant::ab3_gw, 0.0, 1.0, 0.3, 0.3)},
        {"ab4(0.5,1,0.6)", sv_ab(SvAbVariant::ab4, 0.5, 1.0, 0.6, 0.6)},
        {"ab5(0.3,0.5)", sv_ab(SvAbVariant::ab5, 0.0, 1.0, 0.3, 0.5)},
        {"ab6(0.4,1,0.3,0.4)", sv_ab(SvAbVariant::ab6, 0.4, 1.0, 0.3, 0.4)},
    };
    // Matched half increments: the mode that defines the GW/GCC updates and
    // avoids the slow mean-energy inflation independent halves produce for
    // this momentum-dependent noise Hamiltonian.
    for (auto& [name, spec] : variants) spec.noise_mode = NoiseMode::approximate_half;

    bool ok = true;
    double worst_max = 0.0, worst_median = 0.0;
    std::string worst_name = "-";
    for (const auto& [name, spec] : variants) {
        const KuboEnsembleResult r = kubo_ensemble(spec, kp, dt, t_end, n_paths, seed, 1);
        const double mx = r.max_abs_error();
        const double md = r.median_abs_error();
        if (mx > worst_max) {
            worst_max = mx;
            worst_name = name;
        }
        worst_median = std::max(worst_median, md);
        if (mx > tol_max || md > tol_median) ok = false;
        if (g_full_mode) {
            // the error vibration is strongest early and settles later
            const double early = r.max_abs_error_in(0.0, 200.0);
            const double late = r.max_abs_error_in(1800.0, 2000.0);
            if (early < late) ok = false;
        }
    }
    detail = std::string(g_full_mode ? "full" : "reduced") + " study, worst max|err| = " +
             fmt(worst_max) + " (" + worst_name + ", tol " + fmt(tol_max) +
             "), worst median = " + fmt(worst_median) + " (tol " + fmt(tol_median) + ")";
    return ok;
}

// ---------------------------------------------------------------------------
// 3. Scheme-reduction lattice on the particle system, bitwise.

bool check_reduction_lattice(std::string& detail) {
    DpdParams params;
    params.n_particles = 50;
    const double edge = std::cbrt(50.0 / 3.0); // density 3
    params.box = {edge, edge, edge};

    struct Edge {
        const char* name;
        SchemeSpec general, reduced;
    };
    const std::vector<Edge> edges = {
        {"ab4->ab1", sv_ab(SvAbVariant::ab4, 1, 0, 0.5, 0.5), sv_ab(SvAbVariant::ab1, 1, 0, 0.5, 0.5)},
        {"ab4->ab2", sv_ab(SvAbVariant::ab4, 1, 1, 0.7, 0.7), sv_ab(SvAbVariant::ab2_gcc, 1, 1, 0.7, 0.7)},
        {"ab4->ab3", sv_ab(SvAbVariant::ab4, 0, 1, 0.65, 0.65), sv_ab(SvAbVariant::ab3_gw, 0, 1, 0.65, 0.65)},
        {"ab5->ab3", sv_ab(SvAbVariant::ab5, 0, 1, 0.3, 0.3), sv_ab(SvAbVariant::ab3_gw, 0, 1, 0.3, 0.3)},
        {"ab6->ab4", sv_ab(SvAbVariant::ab6, 0.4, 0.8, 0.6, 0.6), sv_ab(SvAbVariant::ab4, 0.4, 0.8, 0.6, 0.6)},
        {"ab6->ab5", sv_ab(SvAbVariant::ab6, 0, 1, 0.3, 0.5), sv_ab(SvAbVariant::ab5, 0, 1, 0.3, 0.5)},
    };

    for (const Edge& e : edges) {
        DpdSystem a = init_system(params, 1234);
        DpdSystem b = a;
        DpdStepper sa(params, e.general, 0.01);
        DpdStepper sb(params, e.reduced, 0.01);
        StepperState sta = StepperState::initial(a.state.p);
        StepperState stb = StepperState::initial(b.state.p);
        for (int k = 0; k < 1000; ++k) {
            sa.step(a, sta);
            sb.step(b, stb);
            if (a.state.q != b.state.q || a.state.p != b.state.p) {
                detail = std::string(e.name) + " diverged at step " + std::to_string(k);
                return false;
            }
        }
    }
    detail = "6 lattice edges, 1000 steps each, N=50: bitwise identical";
    return true;
}

// ---------------------------------------------------------------------------
// 4. Deterministic symplecticity.

bool check_symplecticity(std::string& detail) {
    // (a) the assembled one-step linear map of the noiseless oscillator
    const KuboModel model(KuboParams{0.0, 0.0, 0.0, 0.0});
    const SchemeSpec spec = sv_ab(SvAbVariant::ab3_gw, 0, 1, 0.3, 0.3);
    double worst_resid = 0.0;
    for (const double dt : {0.01, 0.1, 0.5}) {
        double m[2][2];
        for (int col = 0; col < 2; ++col) {
            StepperState st = StepperState::initial({col == 1 ? 1.0 : 0.0});
            const PhasePoint e{{col == 0 ? 1.0 : 0.0}, {col == 1 ? 1.0 : 0.0}};
            const PhasePoint img = sv_ab_step(model, e, st, dt, ZeroNoise{}, spec);
            m[0][col] = img.q[0];
            m[1][col] = img.p[0];
        }
        // R = M^T J M - J, J = [[0,1],[-1,0]]
        const double j[2][2] = {{0.0, 1.0}, {-1.0, 0.0}};
        double jm[2][2] = {};
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c)
                for (int k = 0; k < 2; ++k) jm[r][c] += j[r][k] * m[k][c];
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) {
                double mtjm = 0.0;
                for (int k = 0; k < 2; ++k) mtjm += m[k][r] * jm[k][c];
                worst_resid = std::max(worst_resid, std::abs(mtjm - j[r][c]));
            }
    }
    if (worst_resid > 1e-12) {
        detail = "oscillator map residual " + fmt(worst_resid) + " exceeds 1e-12";
        return false;
    }

    // (b) conservative particle system: bounded energy error over 1e4 steps
    DpdParams params;
    params.n_particles = 100;
    const double edge = std::cbrt(100.0 / 3.0);
    params.box = {edge, edge, edge};
    params.gamma = 0.0;
    params.sigma = 0.0;
    DpdSystem sys = init_system(params, 321);
    const double e0 = total_energy(sys);
    DpdStepper stepper(params, spec, 0.01);
    for (int k = 0; k < 10000; ++k) stepper.step(sys);
    const double drift = std::abs(total_energy(sys) - e0) / std::abs(e0);
    detail = "|M^T J M - J|max = " + fmt(worst_resid) + " (tol 1e-12); energy drift over 1e4 " +
             "conservative steps = " + fmt(drift) + " (tol 1e-3)";
    return drift < 1e-3;
}

// ---------------------------------------------------------------------------
// 5. Momentum conservation with the thermostat on.

bool check_momentum(std::string& detail) {
    DpdParams params; // N=375, box 5^3 defaults
    const std::vector<SchemeSpec> specs = {
        sv_ab(SvAbVariant::ab1, 1, 0, 0.5, 0.5),
        sv_ab(SvAbVariant::ab2_gcc, 1, 1, 0.5, 0.5),
        sv_ab(SvAbVariant::ab3_gw, 0, 1, 0.65, 0.65),
        sv_ab(SvAbVariant::ab4, 0.5, 1, 0.6, 0.6),
        sv_ab(SvAbVariant::ab5, 0, 1, 0.3, 0.5),
        sv_ab(SvAbVariant::ab6, 0.4, 0.8, 0.3, 0.4),
        [] {
            SchemeSpec s;
            s.family = SchemeFamily::sv_ba;
            return s;
        }(),
    };

    const double n = params.n_particles;
    double worst_step = 0.0, worst_total = 0.0;
    for (const SchemeSpec& spec : specs) {
        DpdSystem sys = init_system(params, 777);
        DpdStepper stepper(params, spec, 0.01);
        Vec3 start = total_momentum(sys);
        Vec3 prev = start;
        for (int k = 0; k < 1000; ++k) {
            stepper.step(sys);
            const Vec3 now = total_momentum(sys);
            worst_step = std::max(worst_step, norm(now - prev));
            prev = now;
        }
        worst_total = std::max(worst_total, norm(prev - start));
    }
    detail = "7 schemes, 1000 steps, N=375: worst per-step |dP| = " + fmt(worst_step) +
             " (tol " + fmt(1e-10 * n) + "), cumulative = " + fmt(worst_total) + " (tol " +
             fmt(1e-8 * n) + ")";
    return worst_step <= 1e-10 * n && worst_total <= 1e-8 * n;
}

// ---------------------------------------------------------------------------
// 6. Cell-list forces against the O(N^2) oracle; F^C against -grad V.

struct BruteOut {
    std::vector<double> conservative, dissipative, noise_impulse;
    std::set<std::pair<std::uint32_t, std::uint32_t>> in_range;
};

BruteOut brute_oracle(const DpdSystem& sys, const StepNoise& noise) {
    const auto n = static_cast<std::uint32_t>(sys.size());
    BruteOut out;
    out.conservative.assign(3 * n, 0.0);
    out.dissipative.assign(3 * n, 0.0);
    out.noise_impulse.assign(3 * n, 0.0);
    const auto& prm = sys.params;
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = i + 1; j < n; ++j) {
            Vec3 d = vec_at(sys.state.q, i) - vec_at(sys.state.q, j);
            d.x -= prm.box[0] * std::floor(d.x / prm.box[0] + 0.5);
            d.y -= prm.box[1] * std::floor(d.y / prm.box[1] + 0.5);
            d.z -= prm.box[2] * std::floor(d.z / prm.box[2] + 0.5);
            const double r = norm(d);
            if (r >= prm.q_c) continue;
            out.in_range.insert({i, j});
            const Vec3 e = (1.0 / r) * d;
            const double w = 1.0 - r / prm.q_c;
            const Vec3 fc = (prm.a * w) * e;
            const Vec3 vij = (1.0 / sys.masses[i]) * vec_at(sys.state.p, i) -
                             (1.0 / sys.masses[j]) * vec_at(sys.state.p, j);
            const Vec3 fd = (-prm.gamma * w * w * dot(e, vij)) * e;
            const Vec3 fr = (prm.sigma * w * noise.at(Channel{i, j}).full) * e;
            add_vec(out.conservative, i, fc);
            sub_vec(out.conservative, j, fc);
            add_vec(out.dissipative, i, fd);
            sub_vec(out.dissipative, j, fd);
            add_vec(out.noise_impulse, i, fr);
            sub_vec(out.noise_impulse, j, fr);
        }
    return out;
}

bool check_force_oracle(std::string& detail) {
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        DpdParams params;
        params.n_particles = 50 + (trial * 7) % 151; // 50..200
        const double edge = 3.1 + 0.03 * trial;
        params.box = {edge, edge, edge};
        DpdSystem sys = init_system(params, 9000 + trial);
        const StepNoise noise(sys.seed, 0, 0.01, NoiseMode::independent_halves);

        PairTable table;
        table.build(sys.state.q, sys.params, 0);
        const ForceArrays cell = accumulate_forces(sys, table, sys.state.p, noise);
        const BruteOut brute = brute_oracle(sys, noise);

        std::set<std::pair<std::uint32_t, std::uint32_t>> cell_pairs;
        for (const PairEntry& e : table.pairs()) cell_pairs.insert({e.i, e.j});
        if (cell_pairs != brute.in_range) {
            detail = "pair set mismatch at trial " + std::to_string(trial);
            return false;
        }
        for (std::size_t k = 0; k < cell.conservative.size(); ++k) {
            worst = std::max(worst, std::abs(cell.conservative[k] - brute.conservative[k]));
            worst = std::max(worst, std::abs(cell.dissipative[k] - brute.dissipative[k]));
            worst = std::max(worst, std::abs(cell.noise_impulse[k] - brute.noise_impulse[k]));
        }
    }
    if (worst > 1e-12) {
        detail = "cell vs brute force max diff " + fmt(worst) + " exceeds 1e-12";
        return false;
    }

    // finite-difference gradient consistency
    double worst_rel = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        DpdParams params;
        params.n_particles = 10;
        params.box = {3.1, 3.1, 3.1};
        DpdSystem sys = init_system(params, 4000 + trial);
        PairTable table;
        table.build(sys.state.q, sys.params, 0);
        std::vector<double> fc(30, 0.0);
        table.add_conservative(params.a, fc);
        const double h = 1e-6;
        double diff = 0.0, scale = 1.0;
        for (int dof = 0; dof < 30; ++dof) {
            DpdSystem plus = sys, minus = sys;
            plus.state.q[dof] += h;
            minus.state.q[dof] -= h;
            const double grad = (potential_energy(plus) - potential_energy(minus)) / (2.0 * h);
            diff = std::max(diff, std::abs(-grad - fc[dof]));
            scale = std::max(scale, std::abs(fc[dof]));
        }
        worst_rel = std::max(worst_rel, diff / scale);
    }
    detail = "100 configs: cell vs brute max diff " + fmt(worst) +
             " (tol 1e-12); grad-consistency rel err " + fmt(worst_rel) + " (tol 1e-5)";
    return worst_rel <= 1e-5;
}

// ---------------------------------------------------------------------------
// 7. Thermostat accuracy at dt = 0.01 (desk scale).

bool check_thermostat(std::string& detail) {
    DpdParams params; // N=375, box 5^3, a=25, gamma=4.5, sigma=3, kT*=1
    const double dt = 0.01, t_end = 200.0;
    const auto n_steps = static_cast<int>(std::llround(t_end / dt));

    const std::vector<std::pair<const char*, SchemeSpec>> runs = {
        {"gw(0.65)", sv_ab(SvAbVariant::ab3_gw, 0, 1, 0.65, 0.65)},
        {"gcc(0.5)", sv_ab(SvAbVariant::ab2_gcc, 1, 1, 0.5, 0.5)},
    };
    bool ok = true;
    std::string parts;
    for (const auto& [name, spec] : runs) {
        DpdSystem sys = init_system(params, 20260808);
        DpdStepper stepper(params, spec, dt);
        StatSeries series;
        series.discard_fraction = 0.84;
        series.append(0.0, kinetic_temperature(sys));
        for (int k = 1; k <= n_steps; ++k) {
            stepper.step(sys);
            series.append(k * dt, kinetic_temperature(sys));
        }
        const TailStats tail = equilibrated_average(series);
        const double err = std::abs(tail.mean - params.kT_target);
        if (err >= 0.01) ok = false;
        if (!parts.empty()) parts += ", ";
        parts += std::string(name) + ": |kT-1| = " + fmt(err);
    }
    detail = parts + " (tol 0.01 each)";
    return ok;
}

// ---------------------------------------------------------------------------
// 8. Bitwise reproducibility across thread counts.

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool check_reproducibility(std::string& detail) {
    const fs::path base = fs::temp_directory_path() / "svdpd_acceptance_repro";
    fs::remove_all(base);

    RunConfig kubo_cfg = kubo_desk_profile();
    kubo_cfg.n_paths = 60;
    kubo_cfg.t_end = 20.0;
    kubo_cfg.schemes.resize(2);

    RunConfig sweep_cfg = dpd_sweep_desk_profile();
    sweep_cfg.dpd.n_particles = 60;
    sweep_cfg.dpd.box = {3.2, 3.2, 3.2};
    sweep_cfg.dts = {0.02, 0.05};
    sweep_cfg.t_end = 2.0;
    sweep_cfg.discard_fraction = 0.5;

    std::vector<std::string> kubo_out, sweep_out;
    for (const int threads : {1, 4, 8}) {
        const fs::path kd = base / ("kubo_t" + std::to_string(threads));
        const fs::path sd = base / ("sweep_t" + std::to_string(threads));
        kubo_cfg.output_dir = kd.string();
        sweep_cfg.output_dir = sd.string();
        run_kubo(kubo_cfg, threads);
        run_dpd_sweep(sweep_cfg, threads);
        kubo_out.push_back(slurp(kd / "series_0_ab1.csv") + slurp(kd / "series_1_ab2_gcc.csv") +
                           slurp(kd / "summary.csv"));
        sweep_out.push_back(slurp(sd / "sweep.csv"));
    }
    const bool ok = kubo_out[0] == kubo_out[1] && kubo_out[1] == kubo_out[2] &&
                    sweep_out[0] == sweep_out[1] && sweep_out[1] == sweep_out[2];
    detail = ok ? "threads {1,4,8}: result CSVs byte-identical"
                : "result CSVs differ across thread counts";
    return ok;
}

struct Criterion {
    int id;
    const char* name;
    std::function<bool(std::string&)> fn;
};

} // namespace

int main(int argc, char** argv) {
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--full") == 0) g_full_mode = true;
        else selected.push_back(std::atoi(argv[i]));
    }
    if (const char* env = std::getenv("SVDPD_ACCEPT_FULL"))
        if (env[0] == '1') g_full_mode = true;

    const std::vector<Criterion> criteria = {
        {1, "expected-Hamiltonian identity at t=0", check_kubo_identity},
        {2, "ensemble-mean Hamiltonian error, six SV-AB variants", check_kubo_ensemble},
        {3, "scheme-reduction lattice, bitwise on DPD", check_reduction_lattice},
        {4, "deterministic symplecticity and energy behavior", check_symplecticity},
        {5, "momentum conservation with noise on", check_momentum},
        {6, "cell-list force oracle and gradient consistency", check_force_oracle},
        {7, "kinetic-temperature accuracy at dt=0.01", check_thermostat},
        {8, "bitwise reproducibility across thread counts", check_reproducibility},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        if (!selected.empty() &&
            std::find(selected.begin(), selected.end(), c.id) == selected.end())
            continue;
        std::string detail;
        bool ok = false;
        try {
            ok = c.fn(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        std::cout << (ok ? "[PASS]" : "[FAIL]") << " C" << c.id << " " << c.name << " -- "
                  << detail << "\n";
        std::cout.flush();
        if (!ok) ++failures;
    }
    return failures;
}
