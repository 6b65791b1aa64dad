// Copyright 2026 the svdpd developers
// SPDX-License-Identifier: Apache-2.0

#include "svdpd/drivers.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>

#include "svdpd/philox.hpp"
#include "svdpd/stats.hpp"
#include "svdpd/threading.hpp"

namespace svdpd {

namespace fs = std::filesystem;

std::string csv_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << content;
}

fs::path prepare_output_dir(const RunConfig& cfg) {
    fs::path dir(cfg.output_dir);
    fs::create_directories(dir);
    write_file(dir / "config_echo.json", effective_config_json(cfg));
    return dir;
}

std::string scheme_columns(const SchemeSpec& s) {
    return scheme_label(s) + "," + csv_double(s.alpha) + "," + csv_double(s.beta) + "," +
           csv_double(s.lambda1) + "," + csv_double(s.lambda2);
}

/// One XYZ-style frame: count, "step=<k> t=<t>" comment, position rows.
void append_xyz_frame(std::ofstream& out, const DpdSystem& sys, double t) {
    out << sys.size() << "\n";
    out << "step=" << sys.step_index << " t=" << csv_double(t) << "\n";
    for (std::size_t i = 0; i < sys.size(); ++i) {
        const Vec3 r = vec_at(sys.state.q, i);
        out << "P " << csv_double(r.x) << " " << csv_double(r.y) << " " << csv_double(r.z)
            << "\n";
    }
}

struct DpdRunResult {
    StatSeries temperature;
    TailStats tail;
    bool failed = false;
    std::string error;
};

/// Integrate one DPD system to t_end, sampling the kinetic temperature.
DpdRunResult run_dpd_trajectory(const RunConfig& cfg, const SchemeSpec& scheme, double dt,
                                std::ofstream* frames) {
    DpdRunResult out;
    out.temperature.discard_fraction = cfg.discard_fraction;
    try {
        // Seed derived from the dt bits: stable when the dt list changes.
        const std::uint64_t run_seed =
            derive_stream(cfg.seed, std::bit_cast<std::uint64_t>(dt));
        DpdSystem sys = init_system(cfg.dpd, run_seed);
        if (const auto warn = cfg.dpd.fluctuation_dissipation_warning())
            std::cerr << "warning: " << *warn << "\n";

        DpdStepper stepper(cfg.dpd, scheme, dt);
        const auto n_steps = static_cast<std::uint64_t>(std::llround(cfg.t_end / dt));
        out.temperature.append(0.0, kinetic_temperature(sys));
        if (frames) append_xyz_frame(*frames, sys, 0.0);
        for (std::uint64_t k = 1; k <= n_steps; ++k) {
            stepper.step(sys);
            const double t = static_cast<double>(k) * dt;
            if (k % static_cast<std::uint64_t>(cfg.sample_interval) == 0)
                out.temperature.append(t, kinetic_temperature(sys));
            if (frames && cfg.snapshot_interval > 0 &&
                k % static_cast<std::uint64_t>(cfg.snapshot_interval) == 0)
                append_xyz_frame(*frames, sys, t);
        }
        out.tail = equilibrated_average(out.temperature);
    } catch (const std::exception& e) {
        out.failed = true;
        out.error = e.what();
    }
    return out;
}

} // namespace

void run_kubo(const RunConfig& cfg, int threads) {
    cfg.validate();
    if (cfg.experiment != Experiment::kubo) throw config_error("run_kubo: wrong experiment");
    const fs::path dir = prepare_output_dir(cfg);
    const double dt = cfg.dts[0];

    std::string summary =
        "scheme,alpha,beta,lambda1,lambda2,noise_mode,dt,t_end,n_paths,seed,max_abs_error,"
        "tail_max_abs_error\n";

    for (std::size_t i = 0; i < cfg.schemes.size(); ++i) {
        const SchemeSpec& scheme = cfg.schemes[i];
        const KuboEnsembleResult r =
            kubo_ensemble(scheme, cfg.kubo, dt, cfg.t_end, cfg.n_paths, cfg.seed, threads);

        std::string csv = "t,mean_H,exact_EH,error\n";
        for (std::size_t k = 0; k < r.times.size(); ++k)
            csv += csv_double(r.times[k]) + "," + csv_double(r.mean_h[k]) + "," +
                   csv_double(r.exact_eh[k]) + "," + csv_double(r.error[k]) + "\n";
        const std::string name =
            "series_" + std::to_string(i) + "_" + to_string(cfg.schemes[i].variant) + ".csv";
        write_file(dir / name, csv);

        const double tail_start = cfg.discard_fraction * cfg.t_end;
        summary += scheme_columns(scheme) + "," + to_string(scheme.noise_mode) + "," +
                   csv_double(dt) + "," + csv_double(cfg.t_end) + "," +
                   std::to_string(cfg.n_paths) + "," + std::to_string(cfg.seed) + "," +
                   csv_double(r.max_abs_error()) + "," +
                   csv_double(r.max_abs_error_in(tail_start, cfg.t_end)) + "\n";
    }
    write_file(dir / "summary.csv", summary);
}

void run_dpd_sweep(const RunConfig& cfg, int threads) {
    cfg.validate();
    if (cfg.experiment != Experiment::dpd_sweep)
        throw config_error("run_dpd_sweep: wrong experiment");
    const fs::path dir = prepare_output_dir(cfg);

    struct Task {
        std::size_t scheme_idx;
        double dt;
    };
    std::vector<Task> tasks;
    for (std::size_t s = 0; s < cfg.schemes.size(); ++s)
        for (double dt : cfg.dts) tasks.push_back({s, dt});

    std::ofstream rows(dir / "sweep.csv", std::ios::binary);
    rows << "scheme,alpha,beta,lambda1,lambda2,dt,kT_mean,kT_error,kT_abs_error,kT_stderr\n";
    rows.flush();

    // Tasks run in parallel; rows are committed strictly in task order as
    // soon as every earlier task is done, so partial sweeps keep a clean
    // prefix and the bytes never depend on scheduling.
    std::vector<std::string> pending(tasks.size());
    std::vector<bool> done(tasks.size(), false);
    std::size_t next_to_write = 0;
    std::mutex commit_mutex;

    parallel_tasks(tasks.size(), threads, [&](std::size_t idx) {
        const Task& task = tasks[idx];
        const SchemeSpec& scheme = cfg.schemes[task.scheme_idx];
        const DpdRunResult r = run_dpd_trajectory(cfg, scheme, task.dt, nullptr);

        std::string row = scheme_columns(scheme) + "," + csv_double(task.dt) + ",";
        if (r.failed) {
            row += "nan,nan,nan,nan\n";
            std::cerr << "sweep point failed (" << scheme_label(scheme) << ", dt=" << task.dt
                      << "): " << r.error << "\n";
        } else {
            const double err = r.tail.mean - cfg.dpd.kT_target;
            row += csv_double(r.tail.mean) + "," + csv_double(err) + "," +
                   csv_double(std::abs(err)) + "," + csv_double(r.tail.stderr_mean) + "\n";
        }

        std::lock_guard<std::mutex> lock(commit_mutex);
        pending[idx] = std::move(row);
        done[idx] = true;
        while (next_to_write < tasks.size() && done[next_to_write]) {
            rows << pending[next_to_write];
            rows.flush();
            pending[next_to_write].clear();
            ++next_to_write;
        }
    });
}

void run_dpd_single(const RunConfig& cfg, int threads) {
    (void)threads; // a single trajectory is inherently sequential
    cfg.validate();
    if (cfg.experiment != Experiment::dpd_single)
        throw config_error("run_dpd_single: wrong experiment");
    const fs::path dir = prepare_output_dir(cfg);
    const SchemeSpec& scheme = cfg.schemes[0];
    const double dt = cfg.dts[0];

    const std::uint64_t run_seed = derive_stream(cfg.seed, std::bit_cast<std::uint64_t>(dt));
    DpdSystem sys = init_system(cfg.dpd, run_seed);
    if (const auto warn = cfg.dpd.fluctuation_dissipation_warning())
        std::cerr << "warning: " << *warn << "\n";

    std::ofstream frames;
    if (cfg.snapshot_interval > 0) {
        frames.open(dir / "frames.xyz", std::ios::binary);
        append_xyz_frame(frames, sys, 0.0);
    }

    DpdStepper stepper(cfg.dpd, scheme, dt);
    StatSeries temperature;
    temperature.discard_fraction = cfg.discard_fraction;

    std::string csv = "t,kT,total_energy,px,py,pz\n";
    auto sample = [&](double t) {
        const double kT = kinetic_temperature(sys);
        const Vec3 mom = total_momentum(sys);
        temperature.append(t, kT);
        csv += csv_double(t) + "," + csv_double(kT) + "," + csv_double(total_energy(sys)) + "," +
               csv_double(mom.x) + "," + csv_double(mom.y) + "," + csv_double(mom.z) + "\n";
    };

    sample(0.0);
    const auto n_steps = static_cast<std::uint64_t>(std::llround(cfg.t_end / dt));
    for (std::uint64_t k = 1; k <= n_steps; ++k) {
        stepper.step(sys);
        const double t = static_cast<double>(k) * dt;
        if (k % static_cast<std::uint64_t>(cfg.sample_interval) == 0) sample(t);
        if (cfg.snapshot_interval > 0 &&
            k % static_cast<std::uint64_t>(cfg.snapshot_interval) == 0)
            append_xyz_frame(frames, sys, t);
    }
    write_file(dir / "series.csv", csv);

    const TailStats tail = equilibrated_average(temperature);
    std::string summary = "scheme,alpha,beta,lambda1,lambda2,dt,t_end,seed,kT_mean,kT_error,"
                          "kT_stderr\n";
    summary += scheme_columns(scheme) + "," + csv_double(dt) + "," + csv_double(cfg.t_end) + "," +
               std::to_string(cfg.seed) + "," + csv_double(tail.mean) + "," +
               csv_double(tail.mean - cfg.dpd.kT_target) + "," + csv_double(tail.stderr_mean) +
               "\n";
    write_file(dir / "summary.csv", summary);
}

void run_experiment(const RunConfig& cfg, int threads) {
    switch (cfg.experiment) {
    case Experiment::kubo: run_kubo(cfg, threads); return;
    case Experiment::dpd_sweep: run_dpd_sweep(cfg, threads); return;
    case Experiment::dpd_single: run_dpd_single(cfg, threads); return;
    }
}

} // namespace svdpd
