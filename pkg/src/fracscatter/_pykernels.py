"""Pure-Python/numpy twin of ``_ckernels``; same formulas, same row layout."""
from __future__ import annotations

import math

import numpy as np

_LN10 = math.log(10.0)
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def _cpow(z: np.ndarray, w: float) -> np.ndarray:
    re = z.real
    im = z.imag
    theta = np.where((im == 0.0) & (re < 0.0), np.pi, np.arctan2(im, re))
    mag = np.hypot(re, im) ** w
    out = mag * np.cos(w * theta) + 1j * (mag * np.sin(w * theta))
    pos = (im == 0.0) & (re > 0.0)
    if pos.any():
        out = np.where(pos, np.where(pos, re, 1.0) ** w + 0j, out)
    return out


def _lgabs(z):
    with np.errstate(divide="ignore"):
        return np.log10(np.abs(z))


def _eps_pair(alpha, E, V):
    # eps = exp(u), u = (a-1) log(k/kbar); eps - 1 via expm1 keeps small offsets exact
    a = V.real / E
    c = V.imag / E
    dr = (E - V.real) / E
    with np.errstate(invalid="ignore", divide="ignore"):
        lm = np.where(np.abs(a) < 0.5, 0.5 * np.log1p(a * (a - 2.0) + c * c), np.log(np.hypot(dr, c)))
    theta = np.where((c == 0.0) & (dr < 0.0), np.pi, np.arctan2(-c, dr))
    ur = -(alpha - 1.0) / alpha * lm
    ui = -(alpha - 1.0) / alpha * theta
    er = np.exp(ur)
    half = np.sin(0.5 * ui)
    eps = er * np.cos(ui) + 1j * (er * np.sin(ui))
    d = (np.expm1(ur) * np.cos(ui) - 2.0 * half * half) + 1j * (er * np.sin(ui))
    return eps, d


def barrier_log_observables(alpha, escale, V, b, E):
    E = np.ascontiguousarray(E, dtype=np.float64)
    out = np.full((4, E.size), np.nan)
    w = (E - complex(V)) / escale
    ok = (E > 0) & (w != 0)
    if not ok.any():
        return out
    e = E[ok]
    w = w[ok]
    kr = (e / escale) ** (1.0 / alpha)
    kbar = _cpow(w, 1.0 / alpha)
    eps, dm = _eps_pair(alpha, e, complex(V))
    x = kbar.real * b
    y = kbar.imag * b
    ay = np.abs(y)
    cx = np.cos(x)
    sx = np.sin(x)
    ep_s = np.exp(-y - ay) * (cx + 1j * sx)
    # 2i sin(kbar b) e^{-|y|}, formed without subtracting exponentials
    h = -0.5 * np.expm1(-2.0 * ay)
    ts = 2j * (sx * (1.0 - h) + 1j * (cx * np.copysign(h, y)))
    fe = 4.0 * eps
    phase = np.cos(kr * b) - 1j * np.sin(kr * b)
    m22 = (ep_s + dm * dm / fe * ts) * phase
    m12 = dm * (2.0 + dm) / fe * ts
    l22 = _lgabs(m22)
    lm22 = l22 + ay / _LN10
    out[0, ok] = 2.0 * (_lgabs(m12) - l22)
    out[1, ok] = -2.0 * lm22
    out[2, ok] = lm22
    out[3, ok] = _lgabs(np.exp(-2.0 * ay) + m12 * m12) - 2.0 * l22
    return out


def delta_log_observables(alpha, escale, zeta, E):
    E = np.ascontiguousarray(E, dtype=np.float64)
    out = np.full((4, E.size), np.nan)
    ok = E > 0
    if not ok.any():
        return out
    kr = (E[ok] / escale) ** (1.0 / alpha)
    c = 1.0 / (2.0 * escale * kr ** (alpha - 1.0))
    x = 1j * complex(zeta) * c
    l22 = _lgabs(1.0 - x)
    out[0, ok] = 2.0 * (_lgabs(x) - l22)
    out[1, ok] = -2.0 * l22
    out[2, ok] = l22
    out[3, ok] = _lgabs(1.0 + x * x) - 2.0 * l22
    return out


# scalar paths for the minimiser; numpy call overhead dominates on single points


def _spow(z: complex, w: float) -> complex:
    if z.imag == 0.0:
        if z.real > 0.0:
            return complex(z.real**w, 0.0)
        if z.real == 0.0:
            return 0j
        theta = math.pi
    else:
        theta = math.atan2(z.imag, z.real)
    mag = math.hypot(z.real, z.imag) ** w
    return complex(mag * math.cos(w * theta), mag * math.sin(w * theta))


def _slg(z: complex) -> float:
    a = math.hypot(z.real, z.imag)
    return math.log10(a) if a > 0 else -math.inf


def _seps_pair(alpha, E, V):
    a = V.real / E
    c = V.imag / E
    dr = (E - V.real) / E
    lm = 0.5 * math.log1p(a * (a - 2.0) + c * c) if abs(a) < 0.5 else math.log(math.hypot(dr, c))
    theta = math.pi if (c == 0.0 and dr < 0.0) else math.atan2(-c, dr)
    ur = -(alpha - 1.0) / alpha * lm
    ui = -(alpha - 1.0) / alpha * theta
    er = math.exp(ur)
    half = math.sin(0.5 * ui)
    eps = complex(er * math.cos(ui), er * math.sin(ui))
    return eps, complex(math.expm1(ur) * math.cos(ui) - 2.0 * half * half, er * math.sin(ui))


def _barrier_point(alpha, escale, V, b, which, E):
    if not E > 0:
        return math.inf
    w = (E - V) / escale
    if w == 0:
        return math.inf
    kr = (E / escale) ** (1.0 / alpha)
    kbar = _spow(w, 1.0 / alpha)
    eps, dm = _seps_pair(alpha, E, V)
    x = kbar.real * b
    y = kbar.imag * b
    ay = abs(y)
    cx = math.cos(x)
    sx = math.sin(x)
    ep_s = math.exp(-y - ay) * complex(cx, sx)
    h = -0.5 * math.expm1(-2.0 * ay)
    ts = 2j * complex(sx * (1.0 - h), cx * math.copysign(h, y))
    fe = 4.0 * eps
    phase = complex(math.cos(kr * b), -math.sin(kr * b))
    m22 = (ep_s + dm * dm / fe * ts) * phase
    l22 = _slg(m22)
    if which == 2:
        return l22 + ay / _LN10
    m12 = dm * (2.0 + dm) / fe * ts
    if which == 3:
        return _slg(math.exp(-2.0 * ay) + m12 * m12) - 2.0 * l22
    if which == 0:
        return 2.0 * (_slg(m12) - l22)
    return -2.0 * (l22 + ay / _LN10)


def _delta_point(alpha, escale, zeta, which, E):
    if not E > 0:
        return math.inf
    kr = (E / escale) ** (1.0 / alpha)
    c = 1.0 / (2.0 * escale * kr ** (alpha - 1.0))
    x = 1j * zeta * c
    l22 = _slg(1.0 - x)
    if which == 2:
        return l22
    if which == 3:
        return _slg(1.0 + x * x) - 2.0 * l22
    if which == 0:
        return 2.0 * (_slg(x) - l22)
    return -2.0 * l22


def golden_section(f, lo, hi, rtol, maxiter):
    """Golden-section minimisation of `f` on ``[lo, hi]``.

    Stops when the bracket width falls below ``rtol * max(|lo|, |hi|)`` or
    after `maxiter` shrink steps. NaN values count as ``+inf``. Returns the
    better of the two interior probes as ``(x, f(x))``.
    """

    def g(x):
        v = f(x)
        return math.inf if v != v else v

    a, z = lo, hi
    c = z - _INVPHI * (z - a)
    d = a + _INVPHI * (z - a)
    fc, fd = g(c), g(d)
    for _ in range(maxiter):
        if z - a <= rtol * max(abs(a), abs(z)):
            break
        if fc < fd:
            z, d, fd = d, c, fc
            c = z - _INVPHI * (z - a)
            fc = g(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (z - a)
            fd = g(d)
    return (c, fc) if fc < fd else (d, fd)


def golden_barrier(alpha, escale, V, b, which, lo, hi, rtol, maxiter):
    V = complex(V)
    return golden_section(
        lambda e: _barrier_point(alpha, escale, V, b, which, e), lo, hi, rtol, maxiter
    )


def golden_delta(alpha, escale, zeta, which, lo, hi, rtol, maxiter):
    zeta = complex(zeta)
    return golden_section(lambda e: _delta_point(alpha, escale, zeta, which, e), lo, hi, rtol, maxiter)
