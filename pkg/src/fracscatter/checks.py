"""Seeded invariant checks shared by the ``check`` subcommand and the tests."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import LevyContext, epsilon_pair, inside_wavenumber, mu_pair
from .oracle import boundary_matching
from .transfer import (
    TransferMatrix,
    barrier_matrix,
    cpa_residual,
    delta_matrix,
    scattering_set,
)

# draws whose |Im(kbar b)| exceeds this overflow exp() in double precision
MAX_DECAY = 300.0


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    worst: float
    tol: float
    draws: int

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: worst={self.worst:.3e} tol={self.tol:.0e} draws={self.draws}"


@dataclass(frozen=True)
class BarrierDraw:
    alpha: float
    E: float
    V: complex
    b: float


def draw_barriers(n: int, seed: int = 0, *, alpha2: bool = False, real_v: bool = False,
                  b_max: float = 100.0) -> list[BarrierDraw]:
    """Random barrier configurations over the sweep domain.

    alpha in (1, 2], E log-uniform on [1e-3, 1e4], V uniform in the disc
    ``|V| <= 100`` and b log-uniform on [0.1, `b_max`]. Draws landing on
    ``E = V`` or with ``|Im(kbar b)| > MAX_DECAY`` are redrawn.
    """
    rng = np.random.default_rng(seed)
    out: list[BarrierDraw] = []
    while len(out) < n:
        alpha = 2.0 if alpha2 else float(2.0 - rng.uniform(0.0, 1.0) * (1.0 - 1e-6))
        E = float(10.0 ** rng.uniform(-3.0, 4.0))
        r = 100.0 * math.sqrt(rng.uniform())
        phi = rng.uniform(-math.pi, math.pi)
        V = complex(r * math.cos(phi), 0.0 if real_v else r * math.sin(phi))
        b = float(10.0 ** rng.uniform(-1.0, math.log10(b_max)))
        if E == V:
            continue
        kbar = inside_wavenumber(LevyContext(alpha), E, V)
        if abs(kbar.imag * b) > MAX_DECAY:
            continue
        out.append(BarrierDraw(alpha, E, V, b))
    return out


def _rel(a: complex, b: complex, floor: float = 1e-300) -> float:
    return abs(a - b) / max(abs(a), abs(b), floor)


def check_determinant(n: int = 10_000, seed: int = 1, tol: float = 1e-10) -> CheckResult:
    """``det M = 1`` relative to the size of the products entering it."""
    worst = 0.0
    for d in draw_barriers(n, seed):
        M = barrier_matrix(LevyContext(d.alpha), d.V, d.b, d.E)
        worst = max(worst, abs(M.det() - 1.0) / M.det_scale())
    rng = np.random.default_rng(seed + 1)
    for _ in range(n // 10):
        alpha = float(2.0 - rng.uniform(0.0, 0.999))
        zeta = complex(*rng.normal(0.0, 10.0, 2))
        M = delta_matrix(LevyContext(alpha), zeta, float(10.0 ** rng.uniform(-3, 4)))
        worst = max(worst, abs(M.det() - 1.0) / M.det_scale())
    return CheckResult("det M = 1", worst <= tol, worst, tol, n + n // 10)


def check_mu_identity(n: int = 10_000, seed: int = 2, tol: float = 1e-12) -> CheckResult:
    """``mu1**2 - mu2**2 = 1`` for |eps| in [1e-6, 1e6]."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        eps = cmath.rect(10.0 ** rng.uniform(-6.0, 6.0), rng.uniform(-math.pi, math.pi))
        mu1, mu2 = mu_pair(eps)
        # relative to the terms being subtracted
        worst = max(worst, abs(mu1 * mu1 - mu2 * mu2 - 1.0) / max(1.0, abs(mu1) ** 2))
    return CheckResult("mu1^2 - mu2^2 = 1", worst <= tol, worst, tol, n)


def standard_barrier_matrix(m: float, hbar: float, V: complex, b: float, E: float) -> TransferMatrix:
    """Textbook square-root barrier matrix, written independently of the fractional code."""
    k = cmath.sqrt(2.0 * m * E) / hbar
    kb = cmath.sqrt(2.0 * m * (E - V)) / hbar
    if kb.imag < 0 or (kb.imag == 0 and kb.real < 0):
        kb = -kb
    eps = k / kb
    mu1 = 0.5 * (eps + 1.0 / eps)
    mu2 = 0.5 * (eps - 1.0 / eps)
    c, s = cmath.cos(kb * b), cmath.sin(kb * b)
    return TransferMatrix(
        (c - 1j * mu1 * s) * cmath.exp(1j * k * b),
        1j * mu2 * s,
        -1j * mu2 * s,
        (c + 1j * mu1 * s) * cmath.exp(-1j * k * b),
    )


def check_alpha2_reduction(n: int = 2_000, seed: int = 3, tol: float = 1e-12) -> CheckResult:
    """At alpha = 2 the barrier matrix equals the textbook closed form entrywise.

    Differences are measured against the largest entry, since the textbook
    form itself rounds at that scale.
    """
    worst = 0.0
    for d in draw_barriers(n, seed, alpha2=True, b_max=10.0):
        ctx = LevyContext(2.0)
        A = barrier_matrix(ctx, d.V, d.b, d.E).as_array()
        B = standard_barrier_matrix(ctx.m, ctx.hbar, d.V, d.b, d.E).as_array()
        worst = max(worst, float(np.max(np.abs(A - B)) / np.max(np.abs(B))))
    return CheckResult("alpha=2 reduction", worst <= tol, worst, tol, n)


def check_unitarity(n: int = 2_000, seed: int = 4, tol: float = 1e-10) -> CheckResult:
    """R + T = 1 for real barriers at alpha = 2 and for Hermitian deltas."""
    worst = 0.0
    for d in draw_barriers(n, seed, alpha2=True, real_v=True, b_max=10.0):
        S = scattering_set(barrier_matrix(LevyContext(2.0), d.V, d.b, d.E))
        worst = max(worst, abs(S.R_l + S.T - 1.0), abs(S.R_r + S.T - 1.0))
    rng = np.random.default_rng(seed + 1)
    for _ in range(n):
        S = scattering_set(delta_matrix(LevyContext(2.0), float(rng.normal(0, 10)), float(10 ** rng.uniform(-3, 4))))
        worst = max(worst, abs(S.R_l + S.T - 1.0))
    return CheckResult("R + T = 1 (Hermitian, alpha=2)", worst <= tol, worst, tol, 2 * n)


def check_oracle(n: int = 1_000, seed: int = 5, tol: float = 1e-10) -> CheckResult:
    """Closed-form coefficients against the boundary-matching solve."""
    worst = 0.0
    for d in draw_barriers(n, seed):
        ctx = LevyContext(d.alpha)
        S = scattering_set(barrier_matrix(ctx, d.V, d.b, d.E))
        O = boundary_matching(ctx, d.V, d.b, d.E)
        for a, b in ((S.t_l, O.t_l), (S.t_r, O.t_r), (S.r_l, O.r_l), (S.r_r, O.r_r)):
            # amplitudes are relative to a unit incident wave, which sets the rounding floor
            scale = max(abs(S.t_l), abs(S.r_l), abs(S.r_r), 1.0)
            worst = max(worst, abs(a - b) / scale)
    return CheckResult("closed form = boundary matching", worst <= tol, worst, tol, n)


def random_unimodular(rng: np.random.Generator) -> TransferMatrix:
    """Random complex 2x2 matrix rescaled to det = 1."""
    while True:
        a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        det = a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]
        if abs(det) > 1e-3:
            return TransferMatrix.from_array(a / np.sqrt(det))


def check_cpa_equivalence(n: int = 1_000, seed: int = 6, tol: float = 1e-10) -> CheckResult:
    """``C = (1 - m12 m21)/m22**2`` agrees with ``(2 - m11 m22)/m22**2`` and vanishes with ``1 - m12 m21``.

    Half the draws are forced onto ``m12 m21 = 1`` so both sides of the
    equivalence are exercised.
    """
    rng = np.random.default_rng(seed)
    worst = 0.0
    for i in range(n):
        M = random_unimodular(rng)
        if i % 2:
            # pick m12, m21 with product 1 and m11 m22 = 2
            m12 = complex(*rng.normal(size=2))
            m11 = complex(*rng.normal(size=2))
            M = TransferMatrix(m11, m12, 1.0 / m12, 2.0 / m11)
        C = cpa_residual(M)
        alt = (2.0 - M.m11 * M.m22) / (M.m22 * M.m22)
        worst = max(worst, abs(C - alt) / max(1.0, abs(C)))
        zero_c = abs(C) * abs(M.m22) ** 2 <= tol
        zero_p = abs(M.m12 * M.m21 - 1.0) <= tol
        if zero_c != zero_p:
            worst = math.inf
    return CheckResult("C = 0 <=> m12 m21 = 1", worst <= tol, worst, tol, n)


def barrier_certificate(ctx: LevyContext, V: complex, b: float, E: float) -> float:
    """``|mu2**2 sin**2(kbar b) - 1|``."""
    _, mu2 = mu_pair(*epsilon_pair(ctx, E, V))
    s = cmath.sin(inside_wavenumber(ctx, E, V) * b)
    return abs(mu2 * mu2 * s * s - 1.0)


SUITE: dict[str, Callable[..., CheckResult]] = {
    "determinant": check_determinant,
    "mu-identity": check_mu_identity,
    "alpha2-reduction": check_alpha2_reduction,
    "unitarity": check_unitarity,
    "oracle": check_oracle,
    "cpa-equivalence": check_cpa_equivalence,
}


def run_suite(scale: float = 1.0, seed: int = 0) -> list[CheckResult]:
    """Run every check; `scale` shrinks or grows the draw counts."""
    counts = {
        "determinant": 10_000,
        "mu-identity": 10_000,
        "alpha2-reduction": 2_000,
        "unitarity": 2_000,
        "oracle": 1_000,
        "cpa-equivalence": 1_000,
    }
    results = []
    for i, (name, fn) in enumerate(SUITE.items()):
        n = max(10, int(counts[name] * scale))
        results.append(fn(n, seed + 100 * i + 1))
    return results
