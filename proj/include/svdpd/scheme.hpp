// Copyright 2026 the svdpd developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "svdpd/errors.hpp"
#include "svdpd/noise.hpp"

namespace svdpd {

enum class SchemeFamily {
    euler_a, // symplectic Euler, position-first gradients
    euler_b, // symplectic Euler, momentum-first gradients
    sv_ab,   // Störmer–Verlet as (Euler-A)∘(Euler-B)
    sv_ba,   // Störmer–Verlet as (Euler-B)∘(Euler-A)
};

/// Discretization of the dissipative force in the two SV-AB half-kicks.
/// The variants form a lattice: ab4 generalizes ab1/ab2/ab3 through (alpha,
/// beta), ab5 generalizes ab3 through (lambda1, lambda2), and ab6 generalizes
/// ab4 and ab5 simultaneously. ab2 is the GCC method, ab3 the GW modified
/// velocity-Verlet.
enum class SvAbVariant {
    ab1, // F^D at (q^k, p^k) and (q^{k+1}, p^{k+1}); implicit final kick
    ab2_gcc,
    ab3_gw,
    ab4,
    ab5,
    ab6,
};

struct SchemeSpec {
    SchemeFamily family = SchemeFamily::sv_ab;
    SvAbVariant variant = SvAbVariant::ab3_gw;
    double alpha = 1.0;
    double beta = 1.0;
    double lambda1 = 0.5;
    double lambda2 = 0.5;
    NoiseMode noise_mode = NoiseMode::independent_halves;

    /// Blend weight for the first-kick momentum argument:
    /// alpha·p^k + (1−alpha)·p^{k−1+λ₁}.
    double effective_alpha() const {
        switch (variant) {
        case SvAbVariant::ab1:
        case SvAbVariant::ab2_gcc: return 1.0;
        case SvAbVariant::ab3_gw:
        case SvAbVariant::ab5: return 0.0;
        default: return alpha;
        }
    }

    /// Blend weight for the final-kick momentum argument:
    /// beta·p^{k+λ₂} + (1−beta)·p^{k+1}. Below 1 the kick is implicit.
    double effective_beta() const {
        switch (variant) {
        case SvAbVariant::ab1: return 0.0;
        case SvAbVariant::ab2_gcc:
        case SvAbVariant::ab3_gw:
        case SvAbVariant::ab5: return 1.0;
        default: return beta;
        }
    }

    /// ab1 needs no predictor momenta; every other variant computes them and
    /// carries the λ₁ predictor into the next step.
    bool uses_predictor() const { return variant != SvAbVariant::ab1; }

    void validate() const {
        std::vector<std::string> bad;
        auto in_unit = [&](double v, const char* name) {
            if (!(v >= 0.0 && v <= 1.0)) bad.push_back(std::string(name) + " outside [0,1]");
        };
        in_unit(alpha, "alpha");
        in_unit(beta, "beta");
        in_unit(lambda1, "lambda1");
        in_unit(lambda2, "lambda2");
        if (!bad.empty()) {
            std::string msg = "invalid scheme:";
            for (const auto& b : bad) msg += " " + b + ";";
            throw config_error(msg);
        }
    }
};

/// Per-trajectory state carried between SV-AB steps: the previous step's
/// λ₁ predictor momentum, seeded with the initial momentum at step 0.
struct StepperState {
    std::vector<double> prev_predictor;
    std::uint64_t step_index = 0;

    static StepperState initial(const std::vector<double>& p0) {
        return StepperState{p0, 0};
    }
};

const char* to_string(SchemeFamily f);
const char* to_string(SvAbVariant v);
const char* to_string(NoiseMode m);
SchemeFamily family_from_string(const std::string& s);
SvAbVariant variant_from_string(const std::string& s);
NoiseMode noise_mode_from_string(const std::string& s);

/// Short label such as "sv_ab/ab3_gw" used in CSV rows and filenames.
std::string scheme_label(const SchemeSpec& s);

} // namespace svdpd
