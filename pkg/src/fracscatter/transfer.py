"""Transfer matrices, scattering coefficients and the CPA residual.

Coefficient vectors are taken in the plane-wave basis used by the closed
forms below; the barrier matrix is referenced to the barrier midpoint, so
its off-diagonal entries carry no propagation phase.
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from typing import Union

import numpy as np

from .core import (
    DomainError,
    LevyContext,
    epsilon_pair,
    inside_wavenumber,
    principal_power,
    wavenumber,
)

__all__ = [
    "ComplexDelta",
    "ComplexBarrier",
    "Potential",
    "TransferMatrix",
    "ScatteringSet",
    "SpectralSingularityError",
    "SingularOverlapWarning",
    "delta_matrix",
    "barrier_matrix",
    "transfer_matrix",
    "scattering_set",
    "log_amplitudes",
    "cpa_residual",
    "compose",
    "free_propagation",
    "translated",
]


class SingularOverlapWarning(RuntimeWarning):
    """A CPA residual was requested exactly at a spectral singularity."""


class SpectralSingularityError(ArithmeticError):
    """``m22`` vanished exactly; the energy is a spectral singularity."""

    def __init__(self, energy=None, alpha=None):
        self.energy = energy
        self.alpha = alpha
        super().__init__(f"m22 = 0 at E={energy!r}, alpha={alpha!r}")


@dataclass(frozen=True)
class ComplexDelta:
    """Point interaction ``zeta * delta(x - x0)``.

    The closed-form matrix carries no ``x0`` phase; use :func:`translated`
    when the phase matters.
    """

    zeta: complex
    x0: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "zeta", complex(self.zeta))
        if not (math.isfinite(self.zeta.real) and math.isfinite(self.zeta.imag)):
            raise DomainError("zeta must be finite")


@dataclass(frozen=True)
class ComplexBarrier:
    """Flat complex barrier of height ``V = V1 + i V2`` and width ``b``."""

    V: complex
    b: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "V", complex(self.V))
        object.__setattr__(self, "b", float(self.b))
        if not (self.b > 0 and math.isfinite(self.b)):
            raise DomainError("barrier width b must be positive")
        if not (math.isfinite(self.V.real) and math.isfinite(self.V.imag)):
            raise DomainError("V must be finite")


Potential = Union[ComplexDelta, ComplexBarrier]


@dataclass(frozen=True)
class TransferMatrix:
    m11: complex
    m12: complex
    m21: complex
    m22: complex

    @classmethod
    def identity(cls) -> "TransferMatrix":
        return cls(1 + 0j, 0j, 0j, 1 + 0j)

    @classmethod
    def from_array(cls, a) -> "TransferMatrix":
        a = np.asarray(a, dtype=complex)
        return cls(complex(a[0, 0]), complex(a[0, 1]), complex(a[1, 0]), complex(a[1, 1]))

    def as_array(self) -> np.ndarray:
        return np.array([[self.m11, self.m12], [self.m21, self.m22]], dtype=complex)

    def det(self) -> complex:
        return self.m11 * self.m22 - self.m12 * self.m21

    def det_scale(self) -> float:
        """Magnitude of the products entering the determinant (for relative checks)."""
        return max(1.0, abs(self.m11 * self.m22), abs(self.m12 * self.m21))

    def __matmul__(self, other: "TransferMatrix") -> "TransferMatrix":
        return compose(self, other)

    def to_json(self) -> dict:
        """Entries as ``[re, im]`` pairs."""
        return {
            name: [getattr(self, name).real, getattr(self, name).imag]
            for name in ("m11", "m12", "m21", "m22")
        }

    @classmethod
    def from_json(cls, data: dict) -> "TransferMatrix":
        return cls(*(complex(*data[name]) for name in ("m11", "m12", "m21", "m22")))


@dataclass(frozen=True)
class ScatteringSet:
    t_l: complex
    t_r: complex
    r_l: complex
    r_r: complex
    T: float
    R_l: float
    R_r: float


def _delta_coupling(ctx: LevyContext, E: float) -> complex:
    k = wavenumber(ctx, E)
    return 1.0 / (2.0 * ctx.diffusion * principal_power(k, ctx.alpha - 1.0) * ctx.hbar**ctx.alpha)


def delta_matrix(ctx: LevyContext, zeta: complex, E: float) -> TransferMatrix:
    """Transfer matrix of ``zeta * delta(x - x0)`` at real energy `E`."""
    if not E > 0:
        raise DomainError("energy must be positive")
    x = 1j * complex(zeta) * _delta_coupling(ctx, E)
    return TransferMatrix(1 + x, x, -x, 1 - x)


def barrier_matrix(ctx: LevyContext, V: complex, b: float, E: float) -> TransferMatrix:
    """Transfer matrix of a flat barrier of height `V` on an interval of width `b`."""
    if not E > 0:
        raise DomainError("energy must be positive")
    if not b > 0:
        raise DomainError("barrier width b must be positive")
    k = wavenumber(ctx, E)
    kbar = inside_wavenumber(ctx, E, V)
    eps, d = epsilon_pair(ctx, E, V)
    # with z = kbar b, m22 e^{ikb} = cos z - i mu1 sin z = e^{iz} + q (e^{iz} - e^{-iz}),
    # q = (eps - 1)**2 / (4 eps). Neither form of 1 - mu1 cancels for eps near 1,
    # and sin z taken directly stays exact when z is tiny and eps is huge
    z = kbar * b
    two_i_sin = 2j * cmath.sin(z)
    q = d * d / (4.0 * eps)
    m12 = d * (2.0 + d) / (4.0 * eps) * two_i_sin
    return TransferMatrix(
        (cmath.exp(-1j * z) - q * two_i_sin) * cmath.exp(1j * k * b),
        m12,
        -m12,
        (cmath.exp(1j * z) + q * two_i_sin) * cmath.exp(-1j * k * b),
    )


def transfer_matrix(ctx: LevyContext, potential: Potential, E: float) -> TransferMatrix:
    if isinstance(potential, ComplexDelta):
        return delta_matrix(ctx, potential.zeta, E)
    if isinstance(potential, ComplexBarrier):
        return barrier_matrix(ctx, potential.V, potential.b, E)
    raise TypeError(f"unsupported potential {potential!r}")


def scattering_set(M: TransferMatrix, energy=None, alpha=None) -> ScatteringSet:
    """Reflection and transmission coefficients from a transfer matrix.

    ``t_l = t_r = 1/m22``, ``r_l = m21/m22``, ``r_r = m12/m22``. An exact zero
    of ``m22`` raises :class:`SpectralSingularityError` carrying `energy` and
    `alpha` so the caller can record the singular point.
    """
    if M.m22 == 0:
        raise SpectralSingularityError(energy, alpha)
    t = 1.0 / M.m22
    r_l = M.m21 / M.m22
    r_r = M.m12 / M.m22
    return ScatteringSet(t, t, r_l, r_r, abs(t) ** 2, abs(r_l) ** 2, abs(r_r) ** 2)


def log_amplitudes(M: TransferMatrix) -> tuple[float, float, float]:
    """``(log10 T, log10 R_l, log10 R_r)`` without forming the amplitudes.

    Zero amplitudes map to ``-inf``; ``m22 = 0`` maps to ``+inf``.
    """

    def lg(z: complex) -> float:
        a = abs(z)
        return math.log10(a) if a > 0 else -math.inf

    l22 = lg(M.m22)
    return -2.0 * l22, 2.0 * (lg(M.m21) - l22), 2.0 * (lg(M.m12) - l22)


def cpa_residual(M: TransferMatrix) -> complex:
    """CPA residual ``C = t_l t_r - r_l r_r = (1 - m12 m21) / m22**2``.

    When ``m22`` is exactly zero the quotient is undefined; ``m12 m21 - 1``
    is returned instead and a :class:`SingularOverlapWarning` is issued.
    """
    p = M.m12 * M.m21
    if M.m22 == 0:
        warnings.warn("m22 = 0: CPA residual evaluated as m12*m21 - 1", SingularOverlapWarning, stacklevel=2)
        return p - 1.0
    return (1.0 - p) / (M.m22 * M.m22)


def compose(A: TransferMatrix, B: TransferMatrix) -> TransferMatrix:
    """Matrix product ``A @ B`` (B acts first)."""
    return TransferMatrix(
        A.m11 * B.m11 + A.m12 * B.m21,
        A.m11 * B.m12 + A.m12 * B.m22,
        A.m21 * B.m11 + A.m22 * B.m21,
        A.m21 * B.m12 + A.m22 * B.m22,
    )


def free_propagation(k: complex, x0: float) -> TransferMatrix:
    """Coefficient map for a rigid shift of the potential by `x0`."""
    return TransferMatrix(cmath.exp(1j * k * x0), 0j, 0j, cmath.exp(-1j * k * x0))


def translated(M: TransferMatrix, k: complex, x0: float) -> TransferMatrix:
    """`M` for the same potential moved by `x0`.

    Off-diagonal entries pick up ``exp(+-2 i k x0)``; ``m11``, ``m22`` and
    every ``|m22|``/``|C|`` observable are unchanged.
    """
    return compose(compose(free_propagation(k, x0), M), free_propagation(k, -x0))
