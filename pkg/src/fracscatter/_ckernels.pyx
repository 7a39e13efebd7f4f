# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled log-observable kernels.

Row layout of every observable block: 0 log10 R, 1 log10 T, 2 log10|m22|,
3 log10|C|. Barrier entries are carried scaled by exp(-|Im kbar b|) so the
logs stay finite where the raw entries overflow.
"""
import numpy as np

from libc.math cimport atan2, copysign, cos, exp, expm1, fabs, log1p, hypot, log, log10, pow, sin, sqrt, INFINITY, NAN, M_PI

cdef double LN10 = 2.302585092994046


cdef inline double complex _cpow(double complex z, double w) noexcept nogil:
    cdef double re = z.real, im = z.imag, theta, mag
    if im == 0.0:
        if re > 0.0:
            return pow(re, w) + 0j
        if re == 0.0:
            return 0j
        theta = M_PI
    else:
        theta = atan2(im, re)
    mag = pow(hypot(re, im), w)
    return mag * cos(w * theta) + 1j * (mag * sin(w * theta))


cdef inline double _lgabs(double complex z) noexcept nogil:
    return log10(hypot(z.real, z.imag))


cdef void _barrier_point(double alpha, double escale, double complex V, double b,
                         double E, int only, double* out) noexcept nogil:
    # polar form: kbar = |w|^(1/a) e^{i theta/a}; the ratio k/kbar has argument
    # -theta/a inside (-pi, pi), so eps = |k/kbar|^(a-1) e^{-i (a-1) theta/a}
    # is the principal power of the ratio without a complex division.
    # log|k/kbar| = -log|1 - V/E|/a uses log1p, and eps - 1 uses expm1.
    cdef double wr, wi, theta, lw, le, lr, kr, kbm, kba, er, phi, x, y, ay, decay
    cdef double l22, l21, cx, sx, va, vc, dr, lm, hs
    cdef double complex kbar, dm, inv4e, ep_s, ts, phase, m22, m12
    if not (E > 0.0):
        out[0] = NAN; out[1] = NAN; out[2] = NAN; out[3] = NAN
        return
    wr = (E - V.real) / escale
    wi = -V.imag / escale
    if wr == 0.0 and wi == 0.0:
        out[0] = NAN; out[1] = NAN; out[2] = NAN; out[3] = NAN
        return
    theta = M_PI if (wi == 0.0 and wr < 0.0) else atan2(wi, wr)
    lw = log(hypot(wr, wi))
    le = log(E / escale)
    kr = exp(le / alpha)
    kbm = exp(lw / alpha)
    kba = theta / alpha
    kbar = kbm * cos(kba) + 1j * (kbm * sin(kba))
    va = V.real / E
    vc = V.imag / E
    dr = (E - V.real) / E
    if fabs(va) < 0.5:
        lm = 0.5 * log1p(va * (va - 2.0) + vc * vc)
    else:
        lm = log(hypot(dr, vc))
    lr = -(alpha - 1.0) / alpha * lm
    er = exp(lr)
    phi = -(alpha - 1.0) * kba
    hs = sin(0.5 * phi)
    dm = (expm1(lr) * cos(phi) - 2.0 * hs * hs) + 1j * (er * sin(phi))
    inv4e = (0.25 / er) * (cos(phi) - 1j * sin(phi))
    x = kbar.real * b
    y = kbar.imag * b
    ay = fabs(y)
    decay = exp(-2.0 * ay)
    cx = cos(x)
    sx = sin(x)
    # exp(i kbar b) scaled by exp(-|y|)
    if y >= 0.0:
        ep_s = decay * (cx + 1j * sx)
    else:
        ep_s = cx + 1j * sx
    # 2i sin(kbar b) e^{-|y|}, formed without subtracting exponentials
    hs = -0.5 * expm1(-2.0 * ay)
    ts = 2j * (sx * (1.0 - hs) + 1j * (cx * copysign(hs, y)))
    phase = cos(kr * b) - 1j * sin(kr * b)
    m22 = (ep_s + dm * dm * inv4e * ts) * phase
    l22 = _lgabs(m22)
    out[2] = l22 + ay / LN10
    if only == 2:
        return
    m12 = dm * (2.0 + dm) * inv4e * ts
    if only == 3:
        out[3] = _lgabs(decay + m12 * m12) - 2.0 * l22
        return
    l21 = _lgabs(m12)
    out[0] = 2.0 * (l21 - l22)
    out[1] = -2.0 * out[2]
    out[3] = _lgabs(decay + m12 * m12) - 2.0 * l22


cdef void _delta_point(double alpha, double escale, double complex zeta,
                       double E, int only, double* out) noexcept nogil:
    cdef double c, l22
    cdef double complex x
    if not (E > 0.0):
        out[0] = NAN; out[1] = NAN; out[2] = NAN; out[3] = NAN
        return
    # k^(a-1) = (E/escale)^((a-1)/a)
    c = 0.5 / (escale * exp((alpha - 1.0) / alpha * log(E / escale)))
    x = 1j * zeta * c
    l22 = _lgabs(1.0 - x)
    out[2] = l22
    if only == 2:
        return
    out[3] = _lgabs(1.0 + x * x) - 2.0 * l22
    if only == 3:
        return
    out[0] = 2.0 * (_lgabs(x) - l22)
    out[1] = -2.0 * l22


def barrier_log_observables(double alpha, double escale, double complex V, double b, E):
    cdef double[::1] e = np.ascontiguousarray(E, dtype=np.float64)
    cdef Py_ssize_t n = e.shape[0], i
    res = np.empty((4, n), dtype=np.float64)
    cdef double[:, ::1] o = res
    cdef double buf[4]
    with nogil:
        for i in range(n):
            _barrier_point(alpha, escale, V, b, e[i], -1, buf)
            o[0, i] = buf[0]; o[1, i] = buf[1]; o[2, i] = buf[2]; o[3, i] = buf[3]
    return res


def delta_log_observables(double alpha, double escale, double complex zeta, E):
    cdef double[::1] e = np.ascontiguousarray(E, dtype=np.float64)
    cdef Py_ssize_t n = e.shape[0], i
    res = np.empty((4, n), dtype=np.float64)
    cdef double[:, ::1] o = res
    cdef double buf[4]
    with nogil:
        for i in range(n):
            _delta_point(alpha, escale, zeta, e[i], -1, buf)
            o[0, i] = buf[0]; o[1, i] = buf[1]; o[2, i] = buf[2]; o[3, i] = buf[3]
    return res


cdef inline double _eval(int kind, double alpha, double escale, double complex p,
                         double b, int which, double E) noexcept nogil:
    cdef double buf[4]
    if kind == 0:
        _barrier_point(alpha, escale, p, b, E, which, buf)
    else:
        _delta_point(alpha, escale, p, E, which, buf)
    if buf[which] != buf[which]:
        return INFINITY
    return buf[which]


cdef (double, double) _golden(int kind, double alpha, double escale, double complex p,
                              double b, int which, double lo, double hi,
                              double rtol, int maxiter) noexcept nogil:
    cdef double invphi = (sqrt(5.0) - 1.0) / 2.0
    cdef double a = lo, z = hi, c, d, fc, fd, scale
    cdef int it
    c = z - invphi * (z - a)
    d = a + invphi * (z - a)
    fc = _eval(kind, alpha, escale, p, b, which, c)
    fd = _eval(kind, alpha, escale, p, b, which, d)
    for it in range(maxiter):
        scale = fabs(a) if fabs(a) > fabs(z) else fabs(z)
        if z - a <= rtol * scale:
            break
        if fc < fd:
            z = d; d = c; fd = fc
            c = z - invphi * (z - a)
            fc = _eval(kind, alpha, escale, p, b, which, c)
        else:
            a = c; c = d; fc = fd
            d = a + invphi * (z - a)
            fd = _eval(kind, alpha, escale, p, b, which, d)
    if fc < fd:
        return c, fc
    return d, fd


def golden_barrier(double alpha, double escale, double complex V, double b, int which,
                   double lo, double hi, double rtol, int maxiter):
    """Minimise log-observable row `which` over E in [lo, hi]; returns (E, value)."""
    cdef (double, double) r
    with nogil:
        r = _golden(0, alpha, escale, V, b, which, lo, hi, rtol, maxiter)
    return r[0], r[1]


def golden_delta(double alpha, double escale, double complex zeta, int which,
                 double lo, double hi, double rtol, int maxiter):
    cdef (double, double) r
    with nogil:
        r = _golden(1, alpha, escale, zeta, 0.0, which, lo, hi, rtol, maxiter)
    return r[0], r[1]
