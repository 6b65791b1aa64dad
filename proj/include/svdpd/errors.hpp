// Copyright 2026 the svdpd developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace svdpd {

/// Invalid run configuration (bad field values, unknown keys, ...).
class config_error : public std::invalid_argument {
public:
    explicit config_error(const std::string& what) : std::invalid_argument(what) {}
};

/// Numerical failure during integration (blow-up, non-convergence).
/// Carries the step index at which the failure was detected.
class numerical_error : public std::runtime_error {
public:
    numerical_error(std::uint64_t step, const std::string& what)
        : std::runtime_error("step " + std::to_string(step) + ": " + what), step_(step) {}

    std::uint64_t step() const noexcept { return step_; }

private:
    std::uint64_t step_;
};

/// Two particles at exactly zero distance: the unit pair vector is undefined.
class singular_pair_error : public numerical_error {
public:
    singular_pair_error(std::uint64_t step, std::uint32_t i, std::uint32_t j)
        : numerical_error(step, "coincident particles (" + std::to_string(i) + ", " +
                                    std::to_string(j) + ")"),
          i_(i), j_(j) {}

    std::uint32_t first() const noexcept { return i_; }
    std::uint32_t second() const noexcept { return j_; }

private:
    std::uint32_t i_, j_;
};

} // namespace svdpd
