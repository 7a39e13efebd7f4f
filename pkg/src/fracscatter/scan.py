"""Grid scans over (E, alpha), minimum refinement and sub-peak tracking.

Fields are log10 observables stored as ``(4, n_alpha, n_energy)`` blocks with
rows R, T, |m22|, |C| (see :mod:`fracscatter.kernels`). Alpha rows run from
``alpha_max`` downwards. Infinite logs saturate at ``+-LOG_CAP``; NaN marks
points that were skipped (branch point ``E = V`` on a real barrier).
"""
from __future__ import annotations

import cmath
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from . import kernels
from .core import DomainError, LevyContext, inside_wavenumber, epsilon_pair, mu_pair
from .transfer import ComplexBarrier, ComplexDelta, Potential, delta_matrix

__all__ = [
    "LOG_CAP",
    "OBSERVABLES",
    "ScanGrid",
    "ScanField",
    "SingularityReport",
    "TrackSample",
    "SubPeakTrack",
    "evaluate",
    "scan_fields",
    "scan_field",
    "find_ss",
    "find_cpa",
    "find_minima",
    "track_subpeaks",
    "alpha_profile",
    "resolve_workers",
]

LOG_CAP = 308.0
OBSERVABLES = ("R", "T", "m22", "C")
_ROW = {"R": kernels.ROW_R, "T": kernels.ROW_T, "m22": kernels.ROW_M22, "C": kernels.ROW_C}
_KIND_ROW = {"SS": kernels.ROW_M22, "CPA": kernels.ROW_C}

DEFAULT_THRESHOLD = 6.0
DEFAULT_RTOL = 1e-10
DEFAULT_MAXITER = 200
DEFAULT_E_POINTS = 4000
# development points are zeros in the (E, alpha) plane; a 6-decade depth
# needs both coordinates close to machine precision
_DEVELOP_RTOL = 1e-15


def resolve_workers(workers: int | None = None) -> int:
    """Worker count: explicit value, else ``FRACSCATTER_THREADS``, else CPU count."""
    if workers is None:
        env = os.environ.get("FRACSCATTER_THREADS", "").strip()
        workers = int(env) if env else (os.cpu_count() or 1)
    return max(1, int(workers))


@dataclass(frozen=True)
class ScanGrid:
    """Energy/alpha sampling.

    ``alpha_values`` overrides the uniform alpha axis with an explicit list
    (e.g. a handful of curves at fixed alpha).
    """

    e_min: float
    e_max: float
    e_points: int = DEFAULT_E_POINTS
    e_scale: str = "linear"
    alpha_min: float = 2.0
    alpha_max: float = 2.0
    alpha_points: int = 1
    alpha_values: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        if self.e_scale == "logarithmic":
            object.__setattr__(self, "e_scale", "log")
        if self.e_scale not in ("linear", "log"):
            raise DomainError("e_scale must be 'linear' or 'log'")
        if not (self.e_min > 0 and math.isfinite(self.e_max)):
            raise DomainError("energies must be positive and finite")
        if self.e_min > self.e_max or (self.e_min == self.e_max and self.e_points != 1):
            raise DomainError("e_min must be below e_max")
        if self.e_min < self.e_max and self.e_points < 2:
            raise DomainError("e_points must be at least 2")
        if self.alpha_values is not None:
            vals = tuple(float(a) for a in self.alpha_values)
            if not vals:
                raise DomainError("alpha_values must not be empty")
            object.__setattr__(self, "alpha_values", vals)
            for a in vals:
                _check_alpha(a)
        else:
            _check_alpha(self.alpha_min)
            _check_alpha(self.alpha_max)
            if self.alpha_min > self.alpha_max:
                raise DomainError("alpha_min must not exceed alpha_max")
            if self.alpha_min < self.alpha_max and self.alpha_points < 2:
                raise DomainError("alpha_points must be at least 2")

    def energies(self) -> np.ndarray:
        if self.e_min == self.e_max:
            return np.array([float(self.e_min)])
        if self.e_scale == "log":
            return np.geomspace(self.e_min, self.e_max, self.e_points)
        return np.linspace(self.e_min, self.e_max, self.e_points)

    def alphas(self) -> np.ndarray:
        if self.alpha_values is not None:
            return np.array(self.alpha_values)
        if self.alpha_min == self.alpha_max:
            return np.array([float(self.alpha_max)])
        return np.linspace(self.alpha_max, self.alpha_min, self.alpha_points)


def _check_alpha(a: float) -> None:
    if not 1.0 < a <= 2.0:
        raise DomainError("alpha must lie in (1, 2]")


@dataclass(frozen=True)
class ScanField:
    alphas: np.ndarray
    energies: np.ndarray
    values: np.ndarray  # (4, n_alpha, n_energy), capped log10

    def observable(self, name: str) -> np.ndarray:
        return self.values[_ROW[name]]

    @property
    def flagged(self) -> np.ndarray:
        return np.isnan(self.values[kernels.ROW_M22])


@dataclass(frozen=True)
class SingularityReport:
    kind: str
    e_star: float
    alpha_star: float
    residual: float
    depth: float
    bracket: tuple[float, float]
    certificate: float | None = None

    def to_json(self) -> dict:
        out = {
            "kind": self.kind,
            "e_star": self.e_star,
            "alpha_star": self.alpha_star,
            "residual": self.residual,
            "depth": self.depth,
            "bracket": list(self.bracket),
        }
        if self.certificate is not None:
            out["certificate"] = self.certificate
        return out


class TrackSample(NamedTuple):
    alpha: float
    e_peak: float
    log10R: float
    log10T: float
    log10_residual: float


@dataclass(frozen=True)
class SubPeakTrack:
    """One sub-peak followed across decreasing alpha.

    ``peak_id`` orders the tracks by starting energy on the alpha = 2 row;
    ``developed_at`` is the refined alpha where the residual first sinks
    `threshold` decades below the row median.
    """

    peak_id: int
    kind: str
    e_start: float
    samples: tuple[TrackSample, ...]
    developed_at: float | None = None
    developed_energy: float | None = None
    developed_depth: float | None = None
    main: bool = False

    def to_json(self) -> dict:
        return {
            "peak_id": self.peak_id,
            "kind": self.kind,
            "main": self.main,
            "e_start": self.e_start,
            "developed_at": self.developed_at,
            "developed_energy": self.developed_energy,
            "developed_depth": self.developed_depth,
            "samples": [list(s) for s in self.samples],
        }


# -- evaluation -----------------------------------------------------------------


def evaluate(potential: Potential, ctx: LevyContext, energies) -> np.ndarray:
    """Uncapped log10 observables ``(4, n)`` at one alpha."""
    E = np.ascontiguousarray(np.atleast_1d(np.asarray(energies, dtype=np.float64)))
    if isinstance(potential, ComplexBarrier):
        return kernels.barrier_log_observables(ctx.alpha, ctx.energy_scale, potential.V, potential.b, E)
    if isinstance(potential, ComplexDelta):
        return kernels.delta_log_observables(ctx.alpha, ctx.energy_scale, potential.zeta, E)
    raise TypeError(f"unsupported potential {potential!r}")


def _golden(potential: Potential, ctx: LevyContext, which: int, lo: float, hi: float,
            rtol: float, maxiter: int) -> tuple[float, float]:
    if isinstance(potential, ComplexBarrier):
        return kernels.golden_barrier(
            ctx.alpha, ctx.energy_scale, potential.V, potential.b, which, lo, hi, rtol, maxiter
        )
    return kernels.golden_delta(ctx.alpha, ctx.energy_scale, potential.zeta, which, lo, hi, rtol, maxiter)


def _cap(values: np.ndarray) -> np.ndarray:
    return np.clip(values, -LOG_CAP, LOG_CAP)


def _map_ordered(fn, items: Sequence, workers: int) -> list:
    if workers <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def scan_fields(potential: Potential, ctx: LevyContext, grid: ScanGrid,
                workers: int | None = None) -> ScanField:
    """All four log10 observables over the grid, one row per alpha.

    Rows are evaluated independently (in threads when ``workers > 1``) and
    assembled in index order, so the result does not depend on scheduling.
    """
    energies = grid.energies()
    alphas = grid.alphas()
    rows = _map_ordered(
        lambda a: evaluate(potential, ctx.with_alpha(float(a)), energies),
        list(alphas),
        resolve_workers(workers),
    )
    values = np.stack(rows, axis=1) if rows else np.empty((4, 0, energies.size))
    return ScanField(alphas, energies, _cap(values))


def scan_field(potential: Potential, ctx: LevyContext, grid: ScanGrid, observable: str,
               workers: int | None = None) -> np.ndarray:
    """Capped log10 field of one observable (``"R"``, ``"T"``, ``"m22"``, ``"C"``)."""
    if observable in ("|m22|", "abs_m22"):
        observable = "m22"
    if observable in ("|C|", "abs_C"):
        observable = "C"
    if observable not in _ROW:
        raise ValueError(f"unknown observable {observable!r}")
    return scan_fields(potential, ctx, grid, workers).observable(observable)


# -- minima -----------------------------------------------------------------------


def _local_minima(row: np.ndarray) -> np.ndarray:
    r = np.where(np.isnan(row), np.inf, row)
    if r.size < 3:
        return np.empty(0, dtype=int)
    return np.flatnonzero((r[1:-1] < r[:-2]) & (r[1:-1] <= r[2:])) + 1


def _log_median(logrow: np.ndarray) -> float:
    finite = logrow[~np.isnan(logrow)]
    if finite.size == 0:
        return math.nan
    med = float(np.median(np.power(10.0, np.clip(finite, -LOG_CAP, LOG_CAP))))
    return math.log10(med) if med > 0 else -LOG_CAP


def _depth(log_median: float, log_residual: float) -> float:
    return float(min(LOG_CAP, log_median - max(log_residual, -2 * LOG_CAP)))


def _certificate(potential: Potential, ctx: LevyContext, E: float) -> float:
    """Transcendental CPA residual ``|m12 m21 - 1|`` by a route independent of C."""
    if isinstance(potential, ComplexBarrier):
        kbar = inside_wavenumber(ctx, E, potential.V)
        _, mu2 = mu_pair(*epsilon_pair(ctx, E, potential.V))
        s = cmath.sin(kbar * potential.b)
        return abs(mu2 * mu2 * s * s - 1.0)
    M = delta_matrix(ctx, potential.zeta, E)
    return abs(M.m12 * M.m21 - 1.0)


def find_minima(potential: Potential, ctx: LevyContext, e_range: tuple[float, float], kind: str,
                *, e_points: int = DEFAULT_E_POINTS, threshold: float = DEFAULT_THRESHOLD,
                rtol: float = DEFAULT_RTOL, maxiter: int = DEFAULT_MAXITER) -> list[SingularityReport]:
    """Grid minima of ``|m22|`` (``kind="SS"``) or ``|C|`` (``kind="CPA"``).

    Each interior grid minimum is refined by golden section on its two
    neighbouring grid cells. Candidates at least `threshold` decades below
    the grid median are returned, sorted by energy.
    """
    if kind not in _KIND_ROW:
        raise ValueError("kind must be 'SS' or 'CPA'")
    e_lo, e_hi = map(float, e_range)
    if not (0 < e_lo < e_hi):
        raise DomainError("energy range must be positive and increasing")
    which = _KIND_ROW[kind]
    energies = np.linspace(e_lo, e_hi, e_points)
    row = evaluate(potential, ctx, energies)[which]
    log_med = _log_median(row)
    reports = []
    for i in _local_minima(row):
        lo, hi = float(energies[i - 1]), float(energies[i + 1])
        x, fx = _golden(potential, ctx, which, lo, hi, rtol, maxiter)
        depth = _depth(log_med, fx)
        if depth < threshold:
            continue
        residual = 10.0 ** fx if fx > -2 * LOG_CAP else 0.0
        cert = _certificate(potential, ctx, x) if kind == "CPA" else None
        reports.append(SingularityReport(kind, x, ctx.alpha, residual, depth, (lo, hi), cert))
    reports.sort(key=lambda r: r.e_star)
    return reports


def find_ss(potential: Potential, ctx: LevyContext, e_range: tuple[float, float],
            **kwargs) -> list[SingularityReport]:
    """Spectral singularities: refined zeros of ``|m22(E)|`` on the real axis."""
    return find_minima(potential, ctx, e_range, "SS", **kwargs)


def find_cpa(potential: Potential, ctx: LevyContext, e_range: tuple[float, float],
             **kwargs) -> list[SingularityReport]:
    """CPA points: deep minima of ``|C(E)|``, each with its transcendental certificate."""
    return find_minima(potential, ctx, e_range, "CPA", **kwargs)


# -- tracking ---------------------------------------------------------------------


@dataclass
class _Track:
    peak_id: int
    e_start: float
    main: bool
    rows: list[int] = field(default_factory=list)
    idx: list[int] = field(default_factory=list)
    energies: list[float] = field(default_factory=list)
    residuals: list[float] = field(default_factory=list)
    open: bool = True


def track_subpeaks(potential: Potential, ctx: LevyContext, grid: ScanGrid, kind: str, *,
                   threshold: float = DEFAULT_THRESHOLD, window: float | None = None,
                   include_below: bool = False, rtol: float = DEFAULT_RTOL,
                   maxiter: int = DEFAULT_MAXITER, workers: int | None = None,
                   field_: ScanField | None = None) -> list[SubPeakTrack]:
    """Follow the alpha = 2 sub-peaks of ``|m22|`` or ``|C|`` to lower alpha.

    The deepest minimum on the alpha = 2 row is the main peak (``main=True``);
    tracks start there and at every minimum above it (and below it too with
    `include_below`). Each track continues to the nearest minimum of the next
    row within `window` (default: half the median spacing between minima on
    the first row) and is closed when none is found. Along each track the
    per-row minimum is refined in E; local minima of that sequence in alpha
    are refined jointly in (E, alpha), and the first one reaching `threshold`
    decades below its row median fixes ``developed_at``.
    """
    if kind not in _KIND_ROW:
        raise ValueError("kind must be 'SS' or 'CPA'")
    alphas = grid.alphas()
    if alphas[0] != 2.0:
        raise DomainError("tracking grid must start at alpha = 2")
    which = _KIND_ROW[kind]
    fld = field_ if field_ is not None else scan_fields(potential, ctx, grid, workers)
    energies = fld.energies
    res = fld.values[which]
    de = float(energies[1] - energies[0]) if energies.size > 1 else 0.0
    row_minima = [_local_minima(res[j]) for j in range(alphas.size)]
    row_median = [_log_median(res[j]) for j in range(alphas.size)]

    first = row_minima[0]
    if first.size == 0:
        return []
    main_idx = int(first[np.argmin(res[0][first])])
    if window is None:
        window = 0.5 * float(np.median(np.diff(energies[first]))) if first.size > 1 else math.inf
    starts = [int(i) for i in first if include_below or i >= main_idx]
    tracks = [
        _Track(n, float(energies[i]), i == main_idx, [0], [i]) for n, i in enumerate(starts)
    ]

    for j in range(1, alphas.size):
        cand = row_minima[j]
        claims: dict[int, tuple[float, _Track]] = {}
        for t in tracks:
            if not t.open:
                continue
            if cand.size == 0:
                t.open = False
                continue
            d = np.abs(energies[cand] - energies[t.idx[-1]])
            k = int(np.argmin(d))
            if d[k] > window:
                t.open = False
                continue
            c = int(cand[k])
            prev = claims.get(c)
            if prev is None or d[k] < prev[0]:
                if prev is not None:
                    prev[1].open = False
                claims[c] = (float(d[k]), t)
            else:
                t.open = False
        for c, (_, t) in claims.items():
            t.rows.append(j)
            t.idx.append(c)

    n_e = energies.size
    out = []
    for t in tracks:
        samples = []
        for j, i in zip(t.rows, t.idx):
            c_ctx = ctx.with_alpha(float(alphas[j]))
            lo = float(energies[max(i - 1, 0)])
            hi = float(energies[min(i + 1, n_e - 1)])
            x, fx = _golden(potential, c_ctx, which, lo, hi, rtol, maxiter)
            obs = evaluate(potential, c_ctx, [x])[:, 0]
            t.energies.append(x)
            t.residuals.append(fx)
            samples.append(
                TrackSample(float(alphas[j]), x, _clip1(obs[kernels.ROW_R]), _clip1(obs[kernels.ROW_T]), _clip1(fx))
            )
        dev = _develop(potential, ctx, alphas, t, which, row_median, threshold, window, de)
        out.append(
            SubPeakTrack(
                t.peak_id, kind, t.e_start, tuple(samples),
                dev[0] if dev else None, dev[1] if dev else None, dev[2] if dev else None, t.main,
            )
        )
    return out


def _clip1(v: float) -> float:
    if v != v:
        return v
    return float(min(LOG_CAP, max(-LOG_CAP, v)))


def _develop(potential, ctx, alphas, t: _Track, which, row_median, threshold, window, de):
    r = t.residuals
    n = len(r)
    if n < 2:
        return None
    a = [float(alphas[j]) for j in t.rows]
    e = t.energies
    for s in range(n):
        left = r[s - 1] if s > 0 else math.inf
        right = r[s + 1] if s + 1 < n else math.inf
        if not (r[s] < left and r[s] <= right):
            continue
        if s + 1 >= n:
            # bottoming out on the last row: the zero lies beyond the grid
            continue
        nb = [q for q in (s - 1, s, s + 1) if 0 <= q < n]
        a_lo, a_hi = a[nb[-1]], a[nb[0]]
        xs = [a[q] for q in reversed(nb)]
        ys = [e[q] for q in reversed(nb)]
        half = max(abs(e[q] - e[s]) for q in nb) + 2.0 * de
        half = min(half, window) if math.isfinite(window) else half

        def inner(alpha):
            c_ctx = ctx.with_alpha(alpha)
            centre = float(np.interp(alpha, xs, ys))
            return _golden(potential, c_ctx, which, centre - half, centre + half, _DEVELOP_RTOL, DEFAULT_MAXITER)

        a_star, f_star = kernels.golden_section(
            lambda al: inner(al)[1], a_lo, a_hi, _DEVELOP_RTOL, DEFAULT_MAXITER
        )
        depth = _depth(row_median[t.rows[s]], f_star)
        if depth >= threshold:
            return a_star, inner(a_star)[0], depth
    return None


# -- alpha cuts -------------------------------------------------------------------


def alpha_profile(potential: Potential, ctx: LevyContext, E: float,
                  alpha_range: tuple[float, float], points: int = 2000,
                  workers: int | None = None) -> np.ndarray:
    """Fixed-energy cut: rows ``(alpha, log10 R, log10 T, log10 |C|)``, alpha descending."""
    if not E > 0:
        raise DomainError("energy must be positive")
    lo, hi = sorted(map(float, alpha_range))
    grid = ScanGrid(E, E, 1, alpha_min=lo, alpha_max=hi, alpha_points=points)
    fld = scan_fields(potential, ctx, grid, workers)
    v = fld.values[:, :, 0]
    return np.column_stack([fld.alphas, v[kernels.ROW_R], v[kernels.ROW_T], v[kernels.ROW_C]])


def local_maxima(values: Iterable[float]) -> np.ndarray:
    """Indices of strict interior local maxima."""
    v = np.asarray(list(values), dtype=float)
    return _local_minima(-v)
