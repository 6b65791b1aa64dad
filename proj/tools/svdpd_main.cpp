// Copyright 2026 the svdpd developers
// SPDX-License-Identifier: Apache-2.0

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "svdpd/drivers.hpp"

namespace {

struct CliOptions {
    std::string config_path;
    std::string profile = "desk";
    std::string output_dir;
    std::uint64_t seed = 0;
    bool seed_given = false;
    int threads = 1;
};

void add_common_options(CLI::App* sub, CliOptions& opt) {
    sub->add_option("--config", opt.config_path, "JSON run configuration (overrides --profile)")
        ->check(CLI::ExistingFile);
    sub->add_option("--profile", opt.profile, "Built-in parameter profile")
        ->check(CLI::IsMember({"desk", "paper"}));
    sub->add_option("--seed", opt.seed, "Random seed (overrides the config value)")
        ->each([&](const std::string&) { opt.seed_given = true; });
    sub->add_option("--output", opt.output_dir, "Output directory (overrides the config value)");
    sub->add_option("--threads", opt.threads, "Worker threads")->check(CLI::PositiveNumber);
}

svdpd::RunConfig resolve_config(const CliOptions& opt, svdpd::Experiment experiment) {
    svdpd::RunConfig cfg;
    if (!opt.config_path.empty()) {
        cfg = svdpd::parse_config(opt.config_path);
        if (cfg.experiment != experiment)
            throw svdpd::config_error("config experiment '" +
                                      std::string(svdpd::to_string(cfg.experiment)) +
                                      "' does not match the subcommand");
    } else {
        switch (experiment) {
        case svdpd::Experiment::kubo:
            cfg = opt.profile == "paper" ? svdpd::kubo_paper_profile()
                                         : svdpd::kubo_desk_profile();
            break;
        case svdpd::Experiment::dpd_sweep:
            cfg = opt.profile == "paper" ? svdpd::dpd_sweep_paper_profile()
                                         : svdpd::dpd_sweep_desk_profile();
            break;
        case svdpd::Experiment::dpd_single: cfg = svdpd::dpd_single_desk_profile(); break;
        }
    }
    if (opt.seed_given) cfg.seed = opt.seed;
    if (!opt.output_dir.empty()) cfg.output_dir = opt.output_dir;
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stochastic Störmer-Verlet integrators: Kubo oscillator energy study and DPD "
                 "kinetic-temperature benchmarks"};
    app.require_subcommand(1);

    CliOptions kubo_opt, sweep_opt, single_opt;
    CLI::App* kubo = app.add_subcommand("kubo", "Ensemble-mean Hamiltonian vs the closed form");
    add_common_options(kubo, kubo_opt);
    CLI::App* sweep =
        app.add_subcommand("dpd-sweep", "Kinetic temperature error vs time step size");
    add_common_options(sweep, sweep_opt);
    CLI::App* single = app.add_subcommand("dpd-single", "One DPD trajectory with observables");
    add_common_options(single, single_opt);

    CLI11_PARSE(app, argc, argv);

    try {
        if (kubo->parsed()) {
            const auto cfg = resolve_config(kubo_opt, svdpd::Experiment::kubo);
            svdpd::run_kubo(cfg, kubo_opt.threads);
            std::cout << "kubo: " << cfg.schemes.size() << " scheme(s), " << cfg.n_paths
                      << " paths to t=" << cfg.t_end << " -> " << cfg.output_dir << "\n";
        } else if (sweep->parsed()) {
            const auto cfg = resolve_config(sweep_opt, svdpd::Experiment::dpd_sweep);
            svdpd::run_dpd_sweep(cfg, sweep_opt.threads);
            std::cout << "dpd-sweep: " << cfg.schemes.size() << " scheme(s) x " << cfg.dts.size()
                      << " dt value(s) -> " << cfg.output_dir << "\n";
        } else if (single->parsed()) {
            const auto cfg = resolve_config(single_opt, svdpd::Experiment::dpd_single);
            svdpd::run_dpd_single(cfg, single_opt.threads);
            std::cout << "dpd-single: N=" << cfg.dpd.n_particles << " to t=" << cfg.t_end
                      << " -> " << cfg.output_dir << "\n";
        }
    } catch (const svdpd::config_error& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const svdpd::numerical_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
