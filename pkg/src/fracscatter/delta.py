"""Closed-form spectral singularity of the gain delta ``-i rho delta(x - x0)``."""
from __future__ import annotations

import cmath
import enum
import math
import sys
from dataclasses import dataclass

from .core import DomainError, LevyContext

__all__ = [
    "ShiftClass",
    "DeltaSSResult",
    "delta_ss_energy",
    "delta_ss_result",
    "ss_phase_condition",
    "ss_ratio",
    "classify_shift",
]

_PHASE_TOL = 1e-12
_BOUNDED_RTOL = 1e-12
_LOG_MAX = math.log(sys.float_info.max)
_LOG_MIN = math.log(sys.float_info.min)


class ShiftClass(str, enum.Enum):
    """Direction of the SS energy as alpha decreases from 2."""

    BLUE_SHIFT = "BlueShift"
    RED_SHIFT = "RedShift"
    BOUNDED = "Bounded"
    INDETERMINATE = "Indeterminate"


@dataclass(frozen=True)
class DeltaSSResult:
    e_ss: float
    rho: float
    alpha: float
    shift_class: ShiftClass

    def to_json(self) -> dict:
        return {
            "alpha": self.alpha,
            "rho": self.rho,
            "e_ss": self.e_ss,
            "shift_class": self.shift_class.value,
        }


def _check_alpha(alpha: float) -> None:
    if alpha == 1.0:
        raise DomainError("alpha = 1 makes the SS exponent 1/(alpha - 1) blow up")
    if not 1.0 < alpha <= 2.0:
        raise DomainError("alpha must lie in (1, 2]")


def delta_ss_energy(ctx: LevyContext, rho: float) -> float:
    """Real SS energy of ``-i rho delta``.

    ``m v**((a-2)/(a-1)) (a / hbar**a)**(1/(a-1)) (rho/2)**(a/(a-1))``,
    evaluated in logs so that tiny strengths do not underflow midway.
    """
    if not rho > 0:
        raise DomainError("rho must be positive")
    a = ctx.alpha
    _check_alpha(a)
    if a == 2.0:
        # exact square-root case: m rho**2 / (2 hbar**2)
        return ctx.m * rho * rho / (2.0 * ctx.hbar * ctx.hbar)
    p = 1.0 / (a - 1.0)
    log_e = (
        math.log(ctx.m)
        + (a - 2.0) * p * math.log(ctx.v)
        + p * (math.log(a) - a * math.log(ctx.hbar))
        + a * p * math.log(rho / 2.0)
    )
    if log_e > _LOG_MAX:
        raise OverflowError(f"SS energy exp({log_e:.6g}) exceeds the double range")
    if log_e < _LOG_MIN:
        raise ArithmeticError(f"SS energy exp({log_e:.6g}) underflows the double range")
    return math.exp(log_e)


def classify_shift(rho: float, v: float, hbar: float = 1.0) -> ShiftClass:
    """Classify how the SS energy moves as alpha decreases.

    Blue shift when ``2 hbar v / rho < 1``, red shift when it exceeds
    ``e/2``, bounded at exact equality ``2 hbar v = rho``; the band in
    between has no monotonicity guarantee and is reported as indeterminate.
    """
    if not (rho > 0 and v > 0 and hbar > 0):
        raise DomainError("rho, v and hbar must be positive")
    q = 2.0 * hbar * v / rho
    if math.isclose(q, 1.0, rel_tol=_BOUNDED_RTOL, abs_tol=0.0):
        return ShiftClass.BOUNDED
    if q < 1.0:
        return ShiftClass.BLUE_SHIFT
    if q > math.e / 2.0:
        return ShiftClass.RED_SHIFT
    return ShiftClass.INDETERMINATE


def delta_ss_result(ctx: LevyContext, rho: float) -> DeltaSSResult:
    return DeltaSSResult(
        delta_ss_energy(ctx, rho), float(rho), ctx.alpha, classify_shift(rho, ctx.v, ctx.hbar)
    )


def ss_phase_condition(zeta: complex) -> tuple[bool, float]:
    """Whether ``zeta`` has phase ``-pi/2`` (pure gain), and ``rho = |zeta|``.

    Only that phase gives a real SS energy.
    """
    zeta = complex(zeta)
    if zeta == 0:
        raise DomainError("zeta must be non-zero")
    phi = cmath.phase(zeta)
    return abs(phi + math.pi / 2.0) <= _PHASE_TOL, abs(zeta)


def ss_ratio(ctx: LevyContext, alpha1: float, alpha2: float, rho: float) -> float:
    """``E_ss(alpha1) / E_ss(alpha2)`` at fixed rho, v, hbar of `ctx`.

    ``(a1**(1/(a1-1)) / a2**(1/(a2-1))) * (2 hbar v / rho)**((a1-a2)/((a1-1)(a2-1)))``;
    the mass cancels.
    """
    for a in (alpha1, alpha2):
        _check_alpha(a)
    if not rho > 0:
        raise DomainError("rho must be positive")
    p1 = 1.0 / (alpha1 - 1.0)
    p2 = 1.0 / (alpha2 - 1.0)
    expo = (alpha1 - alpha2) * p1 * p2
    log_r = p1 * math.log(alpha1) - p2 * math.log(alpha2) + expo * math.log(2.0 * ctx.hbar * ctx.v / rho)
    return math.exp(log_r)
