"""Plane-wave boundary matching for the flat barrier.

An independent route to the scattering coefficients: two 4x4 linear solves
(left and right incidence) instead of the closed-form matrix. The barrier
occupies ``(-b/2, b/2)``. At each interface the wavefunction is continuous,
and so is its derivative divided by the local wavenumber and weighted by the
impedance ratio epsilon (``1`` outside, ``1/epsilon`` inside). At alpha = 2
this is ordinary derivative continuity.
"""
from __future__ import annotations

import numpy as np

from .core import LevyContext, epsilon_ratio, inside_wavenumber, wavenumber
from .transfer import ScatteringSet


def _wave_rows(q: complex, weight: complex, x: float) -> np.ndarray:
    # columns: coefficients of exp(-i q x), exp(+i q x); rows: value, weighted derivative / q
    em = np.exp(-1j * q * x)
    ep = np.exp(1j * q * x)
    return np.array([[em, ep], [-1j * weight * em, 1j * weight * ep]], dtype=complex)


def boundary_matching(ctx: LevyContext, V: complex, b: float, E: float) -> ScatteringSet:
    """Scattering coefficients of the barrier from direct interface matching.

    The left reflection coefficient is reported with the sign convention of
    :func:`~fracscatter.transfer.scattering_set` (``r_l = m21/m22``), which is
    the negative of the reflected-wave amplitude in this basis.
    """
    k = wavenumber(ctx, E)
    kbar = inside_wavenumber(ctx, E, V)
    eps = epsilon_ratio(ctx, E, V)
    h = 0.5 * b
    out_l = _wave_rows(k, 1.0, -h)
    out_r = _wave_rows(k, 1.0, h)
    in_l = _wave_rows(kbar, 1.0 / eps, -h)
    in_r = _wave_rows(kbar, 1.0 / eps, h)

    # unknowns: [left e^{-ikx}, left e^{+ikx}, inside e^{-ik'x}, inside e^{+ik'x},
    #            right e^{-ikx}, right e^{+ikx}]; two of the six are fixed per case
    A = np.zeros((4, 6), dtype=complex)
    A[0:2, 0:2] = out_l
    A[0:2, 2:4] = -in_l
    A[2:4, 2:4] = in_r
    A[2:4, 4:6] = -out_r

    # left incidence: left = (1, rho), right = (tau, 0)
    free = [1, 2, 3, 4]
    rhs = -A[:, 0]
    rho, _, _, tau_l = np.linalg.solve(A[:, free], rhs)
    # right incidence: left = (0, tau'), right = (rho', 1)
    rhs = -A[:, 5]
    tau_r, _, _, rho_r = np.linalg.solve(A[:, free], rhs)

    t_l = complex(tau_l)
    t_r = complex(tau_r)
    r_l = -complex(rho)
    r_r = complex(rho_r)
    return ScatteringSet(t_l, t_r, r_l, r_r, abs(t_l) ** 2, abs(r_l) ** 2, abs(r_r) ** 2)
