// Copyright 2026 the svdpd developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <concepts>
#include <cstddef>
#include <vector>

#include "svdpd/noise.hpp"

namespace svdpd {

/*
 * Contract for a separable stochastic Hamiltonian model with external
 * (dissipative) forces:
 *
 *   H(q,p)      = T(p) + V(q)
 *   h_c(q,p)    = S_c(p) + U_c(q)   per noise channel c
 *   dissipative forces F^D(q,p), and per-channel stochastic-dissipative
 *   forces F^SD_c(q,p) entering with the channel's Wiener increment.
 *
 * Separability is what makes the Euler-A/B half-maps explicit: no mixed
 * second derivative of H is ever required. The per-channel gradients are
 * exposed as scaled accumulations (acc += scale * grad) so integrators can
 * assemble noise impulses without temporaries.
 */
template <class M>
concept SeparableModel = requires(const M& m, const std::vector<double>& q,
                                  const std::vector<double>& p, Channel c, double scale,
                                  std::vector<double>& acc, std::vector<Channel>& ch) {
    { m.dim() } -> std::convertible_to<std::size_t>;
    m.grad_T(p, acc);
    m.grad_V(q, acc);
    m.channels(q, ch);
    m.add_grad_U(q, c, scale, acc);
    m.add_grad_S(p, c, scale, acc);
    m.dissipative(q, p, acc);
    m.add_stochastic_dissipative(q, p, c, scale, acc);
};

} // namespace svdpd
