"""Direct summation of the multiple series inside their convergence regions.

Every series here is a sum over the chain of partial sums
``n_j < n_{j+1} < ... < n_r`` (``n_i = m_1 + ... + m_i``), with the first
``j`` indices entering through an ordinary (Mordell-Tornheim) convolution.
Truncating at ``n_r <= K`` is done exactly with prefix sums and
convolutions.  The omitted part is split by the first level that exceeds
``K``; for each split the outer factor is an exactly known prefix sum and
the inner factor is a nested tail

    T(a_1, ..., a_m; K) = sum_{K < n_1 < ... < n_m} n_1^-a_1 ... n_m^-a_m

which is evaluated by an Euler-Maclaurin expansion plus one exact Hurwitz
zeta step.  For Euler-Zagier shapes the split is exact; for ``j >= 2`` and
for character weights the innermost factor is replaced by its leading
asymptotics and the residual is reported in ``err_est``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import fftconvolve

from .errors import BudgetExceeded, DomainError, OutOfRegion
from .special import _EM_COEF, hurwitz_tail, riemann_zeta

R_CAP = 4
DIRECT_MARGIN = 0.05

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class Shape:
    j: int
    r: int

    def __post_init__(self):
        if not 1 <= self.j <= self.r:
            raise DomainError(f"shape needs 1 <= j <= r, got j={self.j}, r={self.r}")
        if self.r > R_CAP:
            raise DomainError(f"r={self.r} exceeds the configured cap {R_CAP}")


@dataclass
class EvalResult:
    value: complex
    err_est: float
    method: str
    depth: int = 0
    warnings: list = field(default_factory=list)
    tail_bound: float | None = None
    terms: list = field(default_factory=list)

    def to_json(self):
        return {
            "value": [self.value.real, self.value.imag],
            "err_est": self.err_est,
            "method": self.method,
            "depth": self.depth,
            "warnings": list(self.warnings),
            **({"terms": [t.to_json() for t in self.terms]} if self.terms else {}),
        }


@dataclass
class TruncationConfig:
    """Truncation controls.

    ``M`` caps the largest partial sum ``n_r`` (the innermost index range);
    ``work_cap`` bounds the number of elementary terms one call may touch.
    """

    M: int = 4000
    target_tol: float = 1e-10
    work_cap: int = 10 ** 8
    max_M: int = 2 ** 18

    def __post_init__(self):
        if self.M < 2:
            raise DomainError("TruncationConfig.M must be >= 2")
        if self.target_tol <= 0:
            raise DomainError("TruncationConfig.target_tol must be positive")


def as_args(s):
    return [complex(x) for x in s]


# ---------------------------------------------------------------------------
# regions


def region_contains(shape, s, margin=0.0):
    """Membership of s in the absolute-convergence region of the (j, r) series."""
    j, r = shape.j, shape.r
    if len(s) != r + 1:
        raise DomainError(f"argument vector has length {len(s)}, expected {r + 1}")
    re = [complex(x).real for x in s]
    for k in range(1, r - j + 1):
        if not sum(re[r + 1 - k:]) > k + margin:
            return False
    if not sum(re[j:]) > r - j + margin:
        return False
    return all(x > 1 + margin for x in re[:j])


def ez_region_contains(s, margin=0.0):
    re = [complex(x).real for x in s]
    r = len(re)
    return all(sum(re[r - k:]) > k + margin for k in range(1, r + 1))


def mt_region_contains(s, margin=0.0):
    re = [complex(x).real for x in s]
    return all(x > 1 + margin for x in re[:-1]) and re[-1] > margin


# ---------------------------------------------------------------------------
# nested tails  T(a_1..a_m; K)


_TAIL_EM_TERMS = 5
_TAIL_PRUNE = 18.0


def _tail_step(terms):
    """Expansion in n of sum_{n' > n} f(n') for f = sum c n^-beta."""
    out = []
    for c, beta in terms:
        out.append((c / (beta - 1), beta - 1))
        out.append((-0.5 * c, beta))
        poch = beta
        for k in range(1, _TAIL_EM_TERMS + 1):
            out.append((c * _EM_COEF[k - 1] * poch, beta + 2 * k - 1))
            poch = poch * (beta + 2 * k - 1) * (beta + 2 * k)
    lead = min(float(np.min(b.real)) for _, b in out)
    return [(c, b) for c, b in out if float(np.min(b.real)) <= lead + _TAIL_PRUNE]


def nested_tail(exps, K):
    """sum over K < n_1 < ... < n_m of prod n_i^(-a_i); entries may be arrays.

    Requires every suffix sum Re(a_i + ... + a_m) > m - i + 1.
    """
    exps = [np.asarray(a, dtype=complex) for a in exps]
    if not exps:
        return np.asarray(1.0 + 0j)
    shape = np.broadcast_shapes(*(a.shape for a in exps))
    exps = [np.broadcast_to(a, shape) for a in exps]
    terms = [(np.ones(shape, dtype=complex), np.zeros(shape, dtype=complex))]
    for a in exps[:0:-1]:
        terms = _tail_step([(c, b + a) for c, b in terms])
    a1 = exps[0]
    total = np.zeros(shape, dtype=complex)
    for c, b in terms:
        total = total + c * np.asarray(hurwitz_tail((b + a1).ravel(), K + 1)).reshape(shape)
    return total


def nested_tail_bound(sigmas, K):
    """Upper bound for |T| from sum_{m>N} (m)^-sigma < N^(1-sigma)/(sigma-1), level by level."""
    m = len(sigmas)
    if m == 0:
        return 1.0
    bound = 1.0
    acc = 0.0
    for k, sig in enumerate(reversed(sigmas), start=1):
        acc += sig
        if acc <= k:
            return math.inf
        bound /= acc - k
    return bound * K ** (m - acc)


# ---------------------------------------------------------------------------
# exact truncated sums


def _cumsum(x):
    # blocked prefix sum: error grows like (block + n/block) eps, not n eps
    n = x.size
    b = 64
    nb = -(-n // b)
    pad = np.zeros(nb * b, dtype=x.dtype)
    pad[:n] = x
    blocks = pad.reshape(nb, b).cumsum(axis=1)
    offsets = np.concatenate([[0], np.cumsum(blocks[:, -1])[:-1]])
    return (blocks + offsets[:, None]).ravel()[:n]


def _conv(a, b):
    """c[n] = sum_{n1 + n2 = n, n1, n2 >= 1} a[n1] b[n2] on arrays indexed from n = 1."""
    K = a.size
    full = np.convolve(a, b) if K <= 8192 else fftconvolve(a, b)
    out = np.zeros(K, dtype=complex)
    out[1:] = full[:K - 1]
    return out


def _shifted_prefix(a):
    """c[n] = sum_{n' < n} a[n'] (arrays indexed from n = 1)."""
    out = np.zeros_like(a)
    out[1:] = _cumsum(a)[:-1]
    return out


def _power_matrix_dot(w, logn, vec):
    """sum_n n^-w vec[n] for every entry of w."""
    out = np.empty(w.shape, dtype=complex)
    flat = w.ravel()
    res = out.ravel()
    step = max(1, 2 ** 21 // max(1, logn.size))
    for lo in range(0, flat.size, step):
        blk = flat[lo:lo + step]
        res[lo:lo + step] = np.exp(-np.outer(blk, logn)) @ vec
    return res.reshape(w.shape)


def _char_array(chi, K):
    if chi is None:
        return None
    return np.asarray(chi.values[np.arange(1, K + 1) % chi.q], dtype=complex)


def _char_mean(chi):
    return 1.0 if chi is None else chi.mean


def _char_l(s, chi):
    if chi is None or chi.q == 1:
        return riemann_zeta(s)
    from .dirichlet import l_line
    return l_line(s, chi)


def chain_sum(mt_exps, chain_exps, w, chis=None, K=4000):
    """Core evaluator shared by all direct sums.

    ``mt_exps``: exponents of the j independent indices m_1..m_j.
    ``chain_exps``: exponents of the partial sums n_j, ..., n_r except the
    last, which is the array ``w`` (evaluated elementwise).
    ``chis``: per-index characters (length r) or None.

    Returns (values, model_err, tail_bound, rounding_err) arrays shaped
    like ``w``; ``model_err`` is zero when the tail split is exact.
    """
    w = np.atleast_1d(np.asarray(w, dtype=complex))
    mt_exps = [complex(x) for x in mt_exps]
    chain_exps = [complex(x) for x in chain_exps]
    j = len(mt_exps)
    r = j + len(chain_exps)
    if chis is None:
        chis = [None] * r
    n = np.arange(1, K + 1, dtype=float)
    logn = np.log(n)

    # independent part: g(P) = sum_{m_1+..+m_j = P} prod chi_i(m_i) m_i^-s_i
    g = None
    for i, a in enumerate(mt_exps):
        term = np.exp(-a * logn)
        ca = _char_array(chis[i], K)
        if ca is not None:
            term = term * ca
        g = term if g is None else _conv(g, term)

    # partial-sum chain; level index L counts from j to r
    exps_all = chain_exps + [None]   # None marks the batch exponent w
    prefix_totals = []               # (level L, C_L) for L = j..r-1
    arr = g
    for idx, a in enumerate(exps_all):
        L = j + idx
        if idx > 0:
            ca = _char_array(chis[L - 1], K)
            arr = _shifted_prefix(arr) if ca is None else _conv(arr, ca)
        if a is None:
            break
        arr = arr * np.exp(-a * logn)
        prefix_totals.append((L, arr.sum()))
    last_weights = arr             # value at the last level is sum_n n^-w * last_weights[n]

    values = _power_matrix_dot(w, logn, last_weights)
    abs_scale = _power_matrix_dot(w.real + 0j, logn, np.abs(last_weights)).real
    err = np.zeros(w.shape)
    bound = np.zeros(w.shape)
    qmax = max((c.q for c in chis if c is not None), default=1)
    exact_weights = all(c is None or c.q == 1 for c in chis)

    def mean_from(L):
        out = 1.0
        for lv in range(L + 1, r + 1):
            out *= _char_mean(chis[lv - 1])
        return out

    # splits where n_L <= K < n_{L+1}
    for L, C in prefix_totals:
        tail_exps = exps_all[L + 1 - j:-1] + [w]
        t = nested_tail(tail_exps, K)
        contrib = C * mean_from(L) * t
        values = values + contrib
        abs_scale = abs_scale + np.abs(contrib)
        fixed = [x.real for x in tail_exps[:-1]]
        tb = np.array([nested_tail_bound(fixed + [wk.real], K) for wk in w.ravel()]).reshape(w.shape)
        bound = bound + abs(C) * tb
        if not exact_weights:
            err = err + qmax * np.abs(contrib) * (1 + np.abs(np.asarray(tail_exps[0]) - 1)) / K * (r - L)

    # configurations with n_j > K: leading asymptotics of g
    rest = chain_exps[1:] + [w] if chain_exps else []
    first = chain_exps[0] if chain_exps else None
    none_total = np.zeros(w.shape, dtype=complex)
    for i, a in enumerate(mt_exps):
        coef = _char_mean(chis[i])
        for k, b in enumerate(mt_exps):
            if k != i:
                coef *= complex(_char_l(b, chis[k]))
        if coef == 0:
            continue
        lead = (a + first) if first is not None else (a + w)
        t = nested_tail([lead] + rest, K)
        none_total = none_total + coef * mean_from(j) * t
    values = values + none_total
    abs_scale = abs_scale + np.abs(none_total)
    if j >= 2:
        smin = min(x.real for x in mt_exps)
        smax = max(abs(x) for x in mt_exps)
        rho = 10 * max((1 + smax) / K, K ** (1 - smin))
        err = err + rho * np.abs(none_total)
    if not exact_weights:
        err = err + qmax * np.abs(none_total) * 10 / K
    bound = bound + np.abs(none_total) * 2
    return values, err, bound, 64 * _EPS * abs_scale


def _work(K, r, batch):
    return K * (r + batch) + (K * K if r > 1 and K <= 8192 else 0)


def _rate(mt_exps, chis):
    """Conservative convergence order in K of the non-exact tail pieces."""
    p = 1.0
    if len(mt_exps) >= 2:
        sig = sorted(x.real for x in mt_exps)
        p = min(p, sig[1] - 1)
    return max(p, 0.05)


def _run(mt_exps, chain_exps, w, chis, cfg):
    """chain_sum with adaptive doubling of K until err_est <= target_tol.

    When the tail split is not exact the model error is measured by
    comparing against the sum truncated at K/2.
    """
    cfg = cfg or TruncationConfig()
    w = np.atleast_1d(np.asarray(w, dtype=complex))
    r = len(mt_exps) + len(chain_exps)
    exact = len(mt_exps) == 1 and all(c is None or c.q == 1 for c in (chis or []))
    K = cfg.M
    warnings = []
    while True:
        if _work(K, r, w.size) * (1 if exact else 1.5) > cfg.work_cap:
            raise BudgetExceeded(f"direct sum would touch ~{_work(K, r, w.size):.3g} terms "
                                 f"(cap {cfg.work_cap:.3g})")
        vals, model, bound, rnd = chain_sum(mt_exps, chain_exps, w, chis, K)
        if exact:
            err = rnd
        else:
            half = chain_sum(mt_exps, chain_exps, w, chis, K // 2)[0]
            p = _rate(mt_exps, chis)
            err = np.maximum(2 * np.abs(vals - half) / (2 ** p - 1), 0.01 * model) + rnd
        if np.all(err <= cfg.target_tol):
            break
        if 2 * K > cfg.max_M or _work(2 * K, r, w.size) * 1.5 > cfg.work_cap:
            warnings.append(f"err_est {float(np.max(err)):.2e} above target_tol {cfg.target_tol:.1e} at M={K}")
            break
        K *= 2
    return vals, err, bound, warnings, K


def _check_chars(chis, r):
    if chis is None:
        return None
    chis = list(chis)
    if len(chis) != r:
        raise DomainError(f"expected {r} characters, got {len(chis)}")
    if len({c.q for c in chis}) != 1:
        raise DomainError("all characters must share one modulus")
    return chis


def hat_direct_batch(shape, s_head, w, chis=None, cfg=None):
    """Vectorised zeta-hat / L-hat direct sum over the last argument ``w``.

    ``s_head`` holds s_1..s_r; callers are responsible for region checks.
    """
    s_head = as_args(s_head)
    j, r = shape.j, shape.r
    return _run(s_head[:j], s_head[j:r], w, _check_chars(chis, r), cfg)


def _single(shape, s, chis, cfg, tag):
    s = as_args(s)
    if not region_contains(shape, s, DIRECT_MARGIN):
        raise OutOfRegion(f"{tag}: {s} is outside the convergence region of shape "
                          f"({shape.j},{shape.r}) with margin {DIRECT_MARGIN}")
    vals, err, bound, warnings, K = hat_direct_batch(shape, s[:-1], [s[-1]], chis, cfg)
    return EvalResult(complex(vals[0]), float(err[0]), "direct", 0, warnings, float(bound[0]))


def zeta_mt_hat_direct(shape, s, cfg=None):
    """Direct value of the generalized Mordell-Tornheim zeta-function."""
    return _single(shape, s, None, cfg, "zeta_mt_hat_direct")


def l_mt_hat_direct(shape, s, chis, cfg=None):
    """Direct value of the character-twisted generalized series."""
    if len(chis) != shape.r:
        raise DomainError(f"expected {shape.r} characters, got {len(chis)}")
    return _single(shape, s, chis, cfg, "l_mt_hat_direct")


def zeta_ez_direct(s, cfg=None):
    """Euler-Zagier multiple zeta sum_{m_1 < ... < m_r} m_1^-s_1 ... m_r^-s_r."""
    s = as_args(s)
    if not ez_region_contains(s, DIRECT_MARGIN):
        raise OutOfRegion(f"zeta_ez_direct: {s} outside the convergence region")
    if len(s) > R_CAP:
        raise DomainError(f"depth {len(s)} exceeds cap {R_CAP}")
    if len(s) == 1:
        vals, err, bound, warnings, K = _run([s[0]], [], [0j], None, cfg)
    else:
        vals, err, bound, warnings, K = _run([s[0]], [0j] + s[1:-1], [s[-1]], None, cfg)
    return EvalResult(complex(vals[0]), float(err[0]), "direct", 0, warnings, float(bound[0]))


def zeta_mt_direct(s, cfg=None):
    """Mordell-Tornheim zeta; the same code path as the j = r generalized sum."""
    s = as_args(s)
    r = len(s) - 1
    if not mt_region_contains(s, DIRECT_MARGIN):
        raise OutOfRegion(f"zeta_mt_direct: {s} outside the convergence region")
    return zeta_mt_hat_direct(Shape(r, r), s, cfg)


AV_MAX_M = 1200


def zeta_av_direct(s, cfg=None):
    """Apostol-Vu sum over 1 <= m_1 < ... < m_r of prod m_i^-s_i (m_1+..+m_r)^-s_{r+1}.

    Dynamic programming over (largest index, running total) with the total
    capped at M (at most ``AV_MAX_M``); err_est is a rigorous bound on the
    omitted terms.
    """
    cfg = cfg or TruncationConfig()
    s = as_args(s)
    r = len(s) - 1
    if r < 1 or r > R_CAP:
        raise DomainError(f"zeta_av_direct: r={r} outside 1..{R_CAP}")
    if not mt_region_contains(s, DIRECT_MARGIN):
        raise OutOfRegion(f"zeta_av_direct: {s} outside the convergence region")
    if r == 1:
        v = complex(riemann_zeta(s[0] + s[1]))
        return EvalResult(v, float(64 * _EPS * (1 + abs(v))), "exact-identity", 0, [], 0.0)
    K = min(cfg.M, AV_MAX_M)
    if K * K * r > cfg.work_cap:
        raise BudgetExceeded("zeta_av_direct: work cap exceeded")
    m = np.arange(K + 1, dtype=float)
    m[0] = 1.0
    logm = np.log(m)
    # D[m, P]: sum over chains ending with largest index m and total P
    D = np.zeros((K + 1, K + 1), dtype=complex)
    idx = np.arange(1, K + 1)
    D[idx, idx] = np.exp(-s[0] * logm[1:])
    for i in range(1, r):
        E = np.cumsum(D, axis=0)    # E[m, P] = sum_{m' <= m} D[m', P]
        Dn = np.zeros_like(D)
        pw = np.exp(-s[i] * logm)
        for mm in range(1, K + 1):
            Dn[mm, mm:] = pw[mm] * E[mm - 1, :K + 1 - mm]
        D = Dn
    P = np.arange(K + 1, dtype=float)
    P[0] = 1.0
    weights = np.exp(-s[r] * np.log(P))
    weights[0] = 0.0
    value = complex((D.sum(axis=0) * weights).sum())
    sig = [x.real for x in s]
    N = K // r
    pre = 1.0
    for x in sig[:r - 1]:
        pre *= float(riemann_zeta(x).real)
    expo = sig[r - 1] + max(sig[r], 0.0)
    bound = pre * (N - 1) ** (1 - expo) / (expo - 1) if N > 1 else math.inf
    if sig[r] < 0:
        bound = math.inf
    res = EvalResult(value, bound, "direct", 0, [], bound)
    if bound > cfg.target_tol:
        res.warnings.append(f"err_est {bound:.2e} above target_tol {cfg.target_tol:.1e}")
    return res
