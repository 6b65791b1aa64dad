// Copyright 2026 the svdpd developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "svdpd/dpd.hpp"
#include "svdpd/kubo.hpp"
#include "svdpd/scheme.hpp"

namespace svdpd {

enum class Experiment { kubo, dpd_sweep, dpd_single };

const char* to_string(Experiment e);
Experiment experiment_from_string(const std::string& s);

/*
 * Run description shared by the CLI and the drivers. Everything that affects
 * the numbers lives here (and is echoed next to the results); execution
 * details like thread count deliberately do not.
 */
struct RunConfig {
    Experiment experiment = Experiment::kubo;
    std::vector<SchemeSpec> schemes;
    KuboParams kubo;
    DpdParams dpd;
    std::vector<double> dts = {0.1};
    double t_end = 200.0;
    int n_paths = 2000; // kubo ensembles
    std::uint64_t seed = 1;
    std::string output_dir = "results";
    int snapshot_interval = 0; // trajectory frames every N steps; 0 disables
    int sample_interval = 1;   // observable sampling stride in steps
    double discard_fraction = 0.84;

    /// Every problem with the configuration, empty when it is runnable.
    std::vector<std::string> problems() const;

    /// All problems reported at once in a single config_error.
    void validate() const;
};

/// Parse and validate a JSON config file. Unknown keys are errors.
RunConfig parse_config(const std::string& path);

/// Parse from JSON text (same rules as parse_config).
RunConfig parse_config_text(const std::string& text, const std::string& source_name = "<text>");

/// Serialize the effective configuration; parsing it back reproduces the run.
std::string effective_config_json(const RunConfig& cfg);

// Built-in experiment profiles.
RunConfig kubo_paper_profile();     // six scheme variants, 2000 paths, t in [0, 2000]
RunConfig kubo_desk_profile();      // reduced: 200 paths, t in [0, 200]
RunConfig dpd_sweep_paper_profile(); // N=3000, box 10^3, twenty dt values, t_end 1000
RunConfig dpd_sweep_desk_profile();  // N=375, box 5^3, five dt values, t_end 200
RunConfig dpd_single_desk_profile();

} // namespace svdpd
