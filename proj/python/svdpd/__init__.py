"""Stochastic Stormer-Verlet integrators for dissipative particle dynamics.

Thin wrapper over the C++ core: counter-based Gaussian noise, the damped Kubo
oscillator with its closed-form expected Hamiltonian, and the DPD engine with
the SV-AB/SV-BA scheme families.
"""

from svdpd._core import (  # noqa: F401
    DpdParams,
    DpdSystem,
    SchemeSpec,
    __version__,
    draw_noise,
    gaussian_from_counter,
    kinetic_temperature,
    kubo_ensemble,
    kubo_exact,
    kubo_expected_hamiltonian,
    minimum_image,
    total_energy,
    total_momentum,
    weight_d,
    weight_r,
)
