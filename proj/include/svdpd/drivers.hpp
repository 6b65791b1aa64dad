// Copyright 2026 the svdpd developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "svdpd/config.hpp"

namespace svdpd {

/// Ensemble-mean Hamiltonian study: one series CSV per scheme plus a summary
/// row, written under cfg.output_dir together with the effective config.
void run_kubo(const RunConfig& cfg, int threads = 1);

/// Kinetic-temperature-vs-timestep sweep over (scheme, dt); rows are written
/// incrementally in deterministic order, so a crashed sweep keeps its prefix.
void run_dpd_sweep(const RunConfig& cfg, int threads = 1);

/// One DPD trajectory with an observable series and optional trajectory
/// frames.
void run_dpd_single(const RunConfig& cfg, int threads = 1);

/// Dispatch on cfg.experiment.
void run_experiment(const RunConfig& cfg, int threads = 1);

/// Deterministic float formatting used in all emitted CSVs (%.17g).
std::string csv_double(double v);

} // namespace svdpd
