"""Lévy context and dispersion-level quantities.

Every fractional power in the package goes through :func:`principal_power`,
which uses the principal branch ``Arg z in (-pi, pi]``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "DomainError",
    "LevyContext",
    "principal_power",
    "diffusion_coefficient",
    "wavenumber",
    "inside_wavenumber",
    "epsilon_ratio",
    "epsilon_pair",
    "mu_pair",
]


class DomainError(ValueError):
    """Raised when an input lies outside the domain of a formula."""


def principal_power(z: complex, w: float) -> complex:
    """Return ``z**w`` on the principal branch for real exponent `w`.

    Positive real `z` takes the real power, so ``principal_power(4, 0.5)``
    is exactly 2. On the negative real axis the argument is ``+pi``.
    """
    z = complex(z)
    if z.imag == 0.0:
        if z.real > 0.0:
            return complex(z.real**w, 0.0)
        if z.real == 0.0:
            if w > 0:
                return 0j
            raise DomainError("zero base with non-positive exponent")
        theta = math.pi
    else:
        theta = math.atan2(z.imag, z.real)
    mag = abs(z) ** w
    return complex(mag * math.cos(w * theta), mag * math.sin(w * theta))


@dataclass(frozen=True)
class LevyContext:
    """Physical constants for one Lévy index.

    Parameters
    ----------
    alpha : float
        Lévy index, ``1 < alpha <= 2``.
    v : float
        Characteristic velocity (natural units, c = 1).
    m : float
        Particle mass.
    hbar : float
        Reduced Planck constant.
    """

    alpha: float
    v: float = 1e-5
    m: float = 1.0
    hbar: float = 1.0

    def __post_init__(self) -> None:
        for name in ("alpha", "v", "m", "hbar"):
            try:
                value = float(getattr(self, name))
            except (TypeError, ValueError):
                raise DomainError(f"{name} must be a finite real number") from None
            if not math.isfinite(value):
                raise DomainError(f"{name} must be a finite real number")
            object.__setattr__(self, name, value)
        if not 1.0 < self.alpha <= 2.0:
            raise DomainError("alpha must lie in (1, 2]")
        if self.v <= 0:
            raise DomainError("v must be positive")
        if self.m <= 0:
            raise DomainError("m must be positive")
        if self.hbar <= 0:
            raise DomainError("hbar must be positive")
        d = self.v ** (2.0 - self.alpha) / (self.alpha * self.m ** (self.alpha - 1.0))
        if not (math.isfinite(d) and d > 0):
            raise DomainError("diffusion coefficient is not finite and positive")

    @property
    def diffusion(self) -> float:
        return diffusion_coefficient(self)

    @property
    def energy_scale(self) -> float:
        """``D_alpha * hbar**alpha``, the factor dividing every energy."""
        return self.diffusion * self.hbar**self.alpha

    def with_alpha(self, alpha: float) -> "LevyContext":
        return LevyContext(alpha, self.v, self.m, self.hbar)


def diffusion_coefficient(ctx: LevyContext) -> float:
    """Generalised diffusion coefficient ``v**(2-a) / (a * m**(a-1))``."""
    a = ctx.alpha
    return ctx.v ** (2.0 - a) / (a * ctx.m ** (a - 1.0))


def wavenumber(ctx: LevyContext, E: complex) -> complex:
    """Free-space wavenumber ``(E / (D hbar**a))**(1/a)``."""
    if E == 0:
        raise DomainError("wavenumber is undefined at zero energy")
    return principal_power(complex(E) / ctx.energy_scale, 1.0 / ctx.alpha)


def inside_wavenumber(ctx: LevyContext, E: float, V: complex) -> complex:
    """Wavenumber inside a flat region of height `V`."""
    diff = complex(E) - complex(V)
    if diff == 0:
        raise DomainError("E equals V: inside wavenumber sits on the branch point")
    return principal_power(diff / ctx.energy_scale, 1.0 / ctx.alpha)


def _log_ratio(ctx: LevyContext, E: float, V: complex) -> complex:
    """``log(k / kbar)``; the energy scale cancels and ``|E - V| / E`` is taken via log1p."""
    if not E > 0:
        raise DomainError("energy must be positive")
    V = complex(V)
    a, c = V.real / E, V.imag / E
    dr = (E - V.real) / E  # exact subtraction when V.real is close to E
    if dr == 0.0 and c == 0.0:
        raise DomainError("E equals V: inside wavenumber sits on the branch point")
    if abs(a) < 0.5:
        # log|1 - V/E| via log1p of |1 - V/E|**2 - 1, accurate when V << E
        lm = 0.5 * math.log1p(a * (a - 2.0) + c * c)
    else:
        lm = math.log(math.hypot(dr, c))
    theta = math.pi if (c == 0.0 and dr < 0.0) else math.atan2(-c, dr)
    return complex(-lm, -theta) / ctx.alpha


def epsilon_pair(ctx: LevyContext, E: float, V: complex) -> tuple[complex, complex]:
    """``(eps, eps - 1)`` with ``eps = (k / kbar)**(alpha - 1)``.

    ``eps - 1`` is formed by a complex expm1, so it keeps full relative
    precision when alpha is close to 1 or V is small next to E.
    Since ``Arg kbar = Arg(E - V) / alpha`` never reaches the cut, this is
    the principal power of the ratio.
    """
    u = (ctx.alpha - 1.0) * _log_ratio(ctx, E, V)
    er = math.exp(u.real)
    half = math.sin(0.5 * u.imag)
    d = complex(math.expm1(u.real) * math.cos(u.imag) - 2.0 * half * half, er * math.sin(u.imag))
    return complex(er * math.cos(u.imag), er * math.sin(u.imag)), d


def epsilon_ratio(ctx: LevyContext, E: float, V: complex) -> complex:
    """Impedance ratio ``(k / kbar)**(alpha - 1)``."""
    return epsilon_pair(ctx, E, V)[0]


def mu_pair(eps: complex, eps_minus_one: complex | None = None) -> tuple[complex, complex]:
    """Return ``(mu1, mu2) = ((eps + 1/eps)/2, (eps - 1/eps)/2)``.

    With `eps_minus_one` supplied, both are formed from ``d = eps - 1``
    (``mu1 = 1 + d**2/(2 eps)``, ``mu2 = d (2 + d)/(2 eps)``), avoiding the
    cancellation near ``eps = 1``.
    """
    eps = complex(eps)
    if eps == 0:
        raise DomainError("epsilon must be non-zero")
    if eps_minus_one is not None:
        d = complex(eps_minus_one)
        return 1.0 + d * d / (2.0 * eps), d * (2.0 + d) / (2.0 * eps)
    inv = 1.0 / eps
    return 0.5 * (eps + inv), 0.5 * (eps - inv)
