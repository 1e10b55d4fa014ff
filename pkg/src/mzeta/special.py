"""Complex special functions: log-Gamma, Riemann and Hurwitz zeta, Bernoulli numbers.

All floating-point routines accept scalars or numpy arrays of complex
arguments and return the same shape (a Python ``complex`` for scalar input).
"""
import math
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import CapExceeded, DomainError, PoleError

BERNOULLI_CAP = 64
EM_TERMS = 12
POLE_TOL = 1e-14

_LOG_PI = math.log(math.pi)
_LOG_2PI = math.log(2 * math.pi)
_LOG_SQRT_2PI = 0.5 * _LOG_2PI

# Lanczos-type rational approximation, g = 671/128, 14 terms.
_LANCZOS_G = 5.24218750000000000
_LANCZOS_C0 = 0.999999999999997092
_LANCZOS_COEF = (
    57.1562356658629235, -59.5979603554754912, 14.1360979747417471,
    -0.491913816097620199, 0.339946499848118887e-4, 0.465236289270485756e-4,
    -0.983744753048795646e-4, 0.158088703224912494e-3, -0.210264441724104883e-3,
    0.217439618115212643e-3, -0.164318106536763890e-3, 0.844182239838527433e-4,
    -0.261908384015814087e-4, 0.368991826595316234e-5,
)

_CHUNK = 4096


def _prep(z):
    arr = np.asarray(z, dtype=complex)
    return arr, arr.ndim == 0


def _out(arr, scalar):
    return complex(arr) if scalar else arr


# ---------------------------------------------------------------------------
# Gamma


def _nonpositive_integer(z, tol=POLE_TOL):
    r = np.round(z.real)
    return (r <= 0) & (np.abs(z - r) < tol)


def _loggamma_right(z):
    ser = np.full(z.shape, _LANCZOS_C0, dtype=complex)
    y = z.copy()
    for c in _LANCZOS_COEF:
        y = y + 1
        ser += c / y
    tmp = z + _LANCZOS_G
    return (z + 0.5) * np.log(tmp) - tmp + _LOG_SQRT_2PI + np.log(ser) - np.log(z)


def _log_sinpi_upper(z):
    # log sin(pi z) continued analytically through Im z >= 0:
    # sin(pi z) = (i/2) e^{-i pi z} (1 - e^{2 pi i z}) with |e^{2 pi i z}| <= 1
    return -1j * np.pi * z + np.log1p(-np.exp(2j * np.pi * z)) - math.log(2) + 0.5j * np.pi


def _loggamma(z):
    out = np.empty_like(z)
    right = z.real >= 0.5
    if right.any():
        out[right] = _loggamma_right(z[right])
    left = ~right
    if left.any():
        # reflection in the upper half plane, conjugate symmetry below; the
        # real axis takes the limit from above
        zl = z[left]
        up = zl.imag >= 0
        zu = np.where(up, zl, np.conj(zl))
        val = _LOG_PI - _log_sinpi_upper(zu) - _loggamma_right(1 - zu)
        out[left] = np.where(up, val, np.conj(val))
    return out


def log_gamma(z):
    """Principal branch of log Gamma(z).

    Raises PoleError when any entry is within 1e-14 of a non-positive integer.
    """
    z, scalar = _prep(z)
    if np.any(_nonpositive_integer(z)):
        raise PoleError("log_gamma: argument at a pole of Gamma")
    return _out(_loggamma(z), scalar)


def gamma(z):
    return np.exp(log_gamma(z))


def rgamma(z):
    """Reciprocal Gamma 1/Gamma(z), entire (exactly zero at the poles)."""
    z, scalar = _prep(z)
    out = np.zeros_like(z)
    ok = ~_nonpositive_integer(z)
    out[ok] = np.exp(-_loggamma(z[ok]))
    return _out(out, scalar)


# ---------------------------------------------------------------------------
# Bernoulli numbers


@lru_cache(maxsize=None)
def _bernoulli_list(n):
    b = [Fraction(1)]
    for m in range(1, n + 1):
        acc = Fraction(0)
        for k in range(m):
            acc += math.comb(m + 1, k) * b[k]
        b.append(-acc / (m + 1))
    return tuple(b)


def bernoulli_number(n, cap=BERNOULLI_CAP):
    """Exact B_n as a Fraction, with B_1 = -1/2."""
    if n < 0:
        raise DomainError("bernoulli_number: n must be non-negative")
    if n > cap:
        raise CapExceeded(f"bernoulli_number: n={n} exceeds cap {cap}")
    return _bernoulli_list(max(n, 1))[n]


def bernoulli_poly(n, x, cap=BERNOULLI_CAP):
    """B_n(x) = sum_k C(n,k) B_k x^(n-k).

    Exact (a Fraction) when ``x`` is an int or Fraction, a float otherwise.
    """
    if n > cap:
        raise CapExceeded(f"bernoulli_poly: n={n} exceeds cap {cap}")
    exact = isinstance(x, (int, Fraction))
    xx = Fraction(x) if exact else float(x)
    acc = Fraction(0) if exact else 0.0
    for k in range(n + 1):
        bk = bernoulli_number(k, cap)
        acc += math.comb(n, k) * (bk if exact else float(bk)) * xx ** (n - k)
    return acc


def zeta_neg_odd(n, cap=BERNOULLI_CAP):
    """Exact zeta(1 - 2n) = -B_{2n} / (2n) for n >= 1."""
    if n < 1:
        raise DomainError("zeta_neg_odd: n must be >= 1")
    if 2 * n > cap:
        raise CapExceeded(f"zeta_neg_odd: 2n={2 * n} exceeds cap {cap}")
    return -bernoulli_number(2 * n, cap) / (2 * n)


_EM_COEF = tuple(
    float(bernoulli_number(2 * k) / math.factorial(2 * k)) for k in range(1, 31)
)


def complex_binomial(x, k):
    """C(x, k) = prod_{i<k} (x - i) / (k - i), a polynomial in x."""
    x, scalar = _prep(x)
    out = np.ones_like(x)
    for i in range(k):
        out = out * (x - i) / (k - i)
    return _out(out, scalar)


# ---------------------------------------------------------------------------
# Zeta functions


def _em_cutoff(s):
    smax = float(np.max(np.abs(s))) if s.size else 0.0
    return int(math.ceil(1.1 * smax)) + 25


def _hurwitz_em(s, a, terms=EM_TERMS):
    """Euler-Maclaurin evaluation of sum_{n>=0} (n + a)^(-s) (continued)."""
    out = np.empty_like(s)
    for lo in range(0, s.size, _CHUNK):
        sc = s.flat[lo:lo + _CHUNK]
        N = _em_cutoff(sc)
        logn = np.log(np.arange(N) + a)
        head = np.exp(-np.outer(sc, logn)).sum(axis=1)
        x = N + a
        lx = math.log(x)
        xs = np.exp(-sc * lx)
        tail = x * xs / (sc - 1) + 0.5 * xs
        poch = sc.copy()
        xpow = xs / x
        for k in range(1, terms + 1):
            tail += _EM_COEF[k - 1] * poch * xpow
            poch = poch * (sc + 2 * k - 1) * (sc + 2 * k)
            xpow = xpow / (x * x)
        out.flat[lo:lo + _CHUNK] = head + tail
    return out


def _zeta_reflect(s):
    # zeta(s) = 2^s pi^(s-1) sin(pi s / 2) Gamma(1-s) zeta(1-s)
    u = 1 - s
    pref = np.exp(s * math.log(2) + (s - 1) * _LOG_PI + _loggamma(u))
    out = pref * np.sin(0.5 * np.pi * s) * _hurwitz_em(u, 1.0)
    r = np.round(s.real)
    trivial = (r < 0) & (r % 2 == 0) & (np.abs(s - r) < POLE_TOL)
    out[trivial] = 0.0
    return out


def riemann_zeta(s):
    """Riemann zeta(s); Euler-Maclaurin for Re s >= -1/2, functional equation below."""
    s, scalar = _prep(s)
    if np.any(np.abs(s - 1) < POLE_TOL):
        raise PoleError("riemann_zeta: pole at s = 1")
    out = np.empty_like(s)
    left = s.real < -0.5
    if (~left).any():
        out[~left] = _hurwitz_em(s[~left], 1.0)
    if left.any():
        out[left] = _zeta_reflect(s[left])
    return _out(out, scalar)


def _rational(a, max_den=1000):
    fr = Fraction(a).limit_denominator(max_den)
    if abs(float(fr) - a) < 1e-15:
        return fr
    return None


def _hurwitz_reflect(u, fr):
    # Hurwitz's formula, with the periodic zeta at v = 1 - u reduced to
    # Hurwitz values at rational points b/q (Re v > 1).
    p, q = fr.numerator, fr.denominator
    v = 1 - u
    per_plus = np.zeros_like(v)   # sum_n e^{+2 pi i n a} n^-v
    per_minus = np.zeros_like(v)  # sum_n e^{-2 pi i n a} n^-v
    for b in range(1, q + 1):
        h = _hurwitz_em(v, b / q)
        ang = 2 * np.pi * ((b * p) % q) / q
        per_plus += np.exp(1j * ang) * h
        per_minus += np.exp(-1j * ang) * h
    qv = np.exp(-v * math.log(q))
    per_plus *= qv
    per_minus *= qv
    base = _loggamma(v) - v * _LOG_2PI
    return np.exp(base + 0.5j * np.pi * v) * per_minus + np.exp(base - 0.5j * np.pi * v) * per_plus


def hurwitz_zeta(s, a):
    """Hurwitz zeta(s, a) = sum_{n>=0} (n + a)^(-s) for 0 < a <= 1.

    Euler-Maclaurin is used for Re s >= -1/2; further left, Hurwitz's
    formula is applied when ``a`` is rational with denominator <= 1000.
    """
    a = float(a)
    if not 0.0 < a <= 1.0:
        raise DomainError(f"hurwitz_zeta: a={a} not in (0, 1]")
    s, scalar = _prep(s)
    if np.any(np.abs(s - 1) < POLE_TOL):
        raise PoleError("hurwitz_zeta: pole at s = 1")
    if a == 1.0:
        return _out(np.asarray(riemann_zeta(s), dtype=complex), scalar)
    out = np.empty_like(s)
    fr = _rational(a)
    left = (s.real < -0.5) if fr is not None else np.zeros(s.shape, bool)
    if (~left).any():
        out[~left] = _hurwitz_em(s[~left], a)
    if left.any():
        out[left] = _hurwitz_reflect(s[left], fr)
    return _out(out, scalar)


def hurwitz_tail(s, start):
    """sum_{n >= start} n^(-s) for an integer start >= 1 (= zeta(s, start))."""
    s, scalar = _prep(s)
    if np.any(np.abs(s - 1) < POLE_TOL):
        raise PoleError("hurwitz_tail: pole at s = 1")
    return _out(_hurwitz_em(s, float(start)), scalar)
