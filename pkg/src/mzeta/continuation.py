"""Meromorphic continuation by Mellin-Barnes integrals and contour shifting.

Every evaluator works on a batch: the first r arguments are fixed and the
last one, ``w = s_{r+1}``, is an array.  The level-(r-1) function F that
appears in the integrand is requested once for all contour nodes and residue
points of the whole batch.  Contour nodes sit on a common lattice
``t = k h``, so nested contours produce sums that coincide and are
evaluated only once.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dirichlet import l_at_neg_int, l_line, totient
from .errors import (DepthExceeded, DomainError, NoValidContour, PoleError,
                     QuadratureDiverged, SingularPoint)
from .series import (DIRECT_MARGIN, EvalResult, Shape, TruncationConfig, hat_direct_batch,
                     region_contains)
from .singularity import distance_to_atlas, singular_planes_at
from .special import complex_binomial, log_gamma, rgamma, riemann_zeta, zeta_neg_odd

_EPS = np.finfo(float).eps
POLE_GAP = 0.25


@dataclass
class ContinuationConfig:
    N: int = 6
    epsilon: float = 0.5
    c_abscissa: float | None = None
    quad_T: float = 40.0
    quad_h: float = 0.02
    max_depth: int | None = None
    quad_tol: float = 1e-9
    inner_h: float = 0.05
    max_refine: int = 3
    contour_margin: float = 0.3
    singular_tol: float = 1e-9
    circle_radius: float = 0.05
    circle_points: int = 16
    trunc: TruncationConfig = field(
        default_factory=lambda: TruncationConfig(M=4000, target_tol=1e-10, max_M=32768))

    def __post_init__(self):
        if not 0 < self.epsilon < 1:
            raise DomainError("epsilon must lie in (0, 1)")
        if not 0 < self.quad_h <= 0.1:
            raise DomainError("quad_h must lie in (0, 0.1]")
        if self.quad_T < 20:
            raise DomainError("quad_T must be >= 20")
        if self.N < 1:
            raise DomainError("N must be a positive integer")


@dataclass
class MBTerm:
    kind: str
    value: complex

    def to_json(self):
        return {"kind": self.kind, "value": [self.value.real, self.value.imag]}


class _Ctx:
    """Per-call state: kind, characters, configuration and bookkeeping."""

    def __init__(self, kind, chis, cfg, r):
        self.kind = kind
        self.chis = list(chis) if chis is not None else None
        self.cfg = cfg
        self.max_depth = cfg.max_depth if cfg.max_depth is not None else r + 4
        self.warnings = []
        self.depth_used = 0

    def warn(self, msg):
        if msg not in self.warnings:
            self.warnings.append(msg)

    def chi(self, i):
        """Character at 1-based slot i (None in the zeta case)."""
        return None if self.chis is None else self.chis[i - 1]


# ---------------------------------------------------------------------------
# helpers


def _dedupe(x):
    flat = np.asarray(x, dtype=complex).ravel()
    key = np.round(flat.real * 2.0 ** 30) + 1j * np.round(flat.imag * 2.0 ** 30)
    _, first, inv = np.unique(key, return_index=True, return_inverse=True)
    return flat[first], inv.reshape(np.shape(x))


def _lattice_sums(w, c, h, ks):
    """Unique values of w_e + c + i h k and the inverse map, without sorting.

    Elements of w are grouped by (Re w, Im w mod h); within a group the sums
    are consecutive lattice points, so an occupancy array gives the dedupe.
    """
    m = np.round(w.imag / h)
    rho = w.imag - m * h
    key = np.round(w.real * 2.0 ** 30) + 1j * np.round(rho * 2.0 ** 30)
    _, grp = np.unique(key, return_inverse=True)
    inv = np.empty((w.size, ks.size), dtype=np.int64)
    values = []
    offset = 0
    for g in range(grp.max() + 1 if grp.size else 0):
        members = np.nonzero(grp == g)[0]
        mg = m[members].astype(np.int64)
        lo = mg.min()
        pos = (mg - lo)[:, None] + (ks - ks[0])[None, :]
        occ = np.zeros(int(pos.max()) + 1, dtype=bool)
        occ[pos.ravel()] = True
        rank = np.cumsum(occ) - 1
        inv[members] = offset + rank[pos]
        idx = np.nonzero(occ)[0]
        e0 = members[0]
        base = complex(w[e0].real + c, rho[e0] + (lo + ks[0]) * h)
        values.append(base + 1j * h * idx)
        offset += idx.size
    return np.concatenate(values) if values else np.zeros(0, complex), inv


def _gamma(z):
    return np.exp(np.asarray(log_gamma(z), dtype=complex))


def _region_mask(j, r, head, w, margin):
    """Vectorised region test for (head, w) over the array w."""
    re = [complex(x).real for x in head]
    wr = np.asarray(w).real
    ok = np.full(wr.shape, all(x > 1 + margin for x in re[:j]))
    for k in range(1, r - j + 1):
        ok &= sum(re[r + 1 - k:r]) + wr > k + margin
    ok &= sum(re[j:r]) + wr > r - j + margin
    return ok


def _base_value(ctx, x, chi):
    """zeta(x) or L(x, chi), elementwise."""
    if chi is None:
        return np.asarray(riemann_zeta(x), dtype=complex)
    return np.asarray(l_line(x, chi), dtype=complex)


def _mean(chi):
    return 1.0 if chi is None else (totient(chi.q) / chi.q if chi.principal else 0.0)


# ---------------------------------------------------------------------------
# batch evaluation of the level-r function in its last argument


def _batch(ctx, j, r, head, w, depth):
    """Values and error estimates of the (j, r) function at (head, w_e)."""
    if depth > ctx.max_depth:
        raise DepthExceeded(f"recursion depth {depth} exceeds max_depth {ctx.max_depth}")
    ctx.depth_used = max(ctx.depth_used, depth)
    w = np.asarray(w, dtype=complex)
    uw, inv = _dedupe(w)
    if r == 1:
        vals = _base_value(ctx, head[0] + uw, ctx.chi(1))
        errs = 64 * _EPS * (1 + np.abs(vals))
        return vals[inv], errs[inv]
    vals = np.empty(uw.shape, dtype=complex)
    errs = np.empty(uw.shape)
    inreg = _region_mask(j, r, head, uw, DIRECT_MARGIN)
    if inreg.any():
        chis = ctx.chis[:r] if ctx.chis is not None else None
        v, e, _, warns, _ = hat_direct_batch(Shape(j, r), head, uw[inreg], chis, ctx.cfg.trunc)
        vals[inreg], errs[inreg] = v, e
        for msg in warns:
            ctx.warn(f"direct sum at level ({j},{r}): {msg}")
    rest = ~inreg
    if rest.any():
        if j == r:
            v, e, _ = _mt_base_batch(ctx, r, head, uw[rest], depth, None)
        else:
            v, e, _ = _shift_batch(ctx, j, r, head, uw[rest], depth, None)
        vals[rest], errs[rest] = v, e
    return vals[inv], errs[inv]


# ---------------------------------------------------------------------------
# contour selection


def _choose_N(ctx, valid, inner_ok, fixed_N):
    cap = 2 * (ctx.max_depth + 4)
    if fixed_N is not None:
        N = fixed_N
        while not valid(N):
            N += 1
            if N > cap + fixed_N:
                raise NoValidContour("no admissible shift depth N found")
        if N != fixed_N:
            ctx.warn(f"shift depth N={fixed_N} puts a pole on the wrong side; used N={N}")
        return N
    first_valid = None
    for N in range(2, cap + 1, 2):
        if valid(N):
            if first_valid is None:
                first_valid = N
            if inner_ok(N):
                return N
    if first_valid is None:
        raise NoValidContour(f"no admissible shift depth N <= {cap}")
    return first_valid


# ---------------------------------------------------------------------------
# vertical-line quadrature


def _quadrature(ctx, w, c, shift, gz_fn, inner, h0, T):
    """(1/2 pi) int rgamma(w) Gamma(w+z) G(z) F(w+z+shift) dt on z = c + i t.

    ``gz_fn(z)`` gives the w-independent factor, ``inner(args)`` returns
    (F values, F errors).  For large |Im w| the kernel is flat between
    t = -Im w and t = 0, so the node window is widened by |Im w|; nodes
    where the kernel (with a polynomial allowance for F) is negligible are
    skipped.  The step is halved until the estimate based on the coarser
    subgrid agrees to the tolerance.
    """
    w = np.asarray(w, dtype=complex)
    pole_w = np.asarray(rgamma(w), dtype=complex) == 0
    lg_w = np.zeros(w.shape, dtype=complex)
    if (~pole_w).any():
        lg_w[~pole_w] = log_gamma(w[~pole_w])
    qtol = ctx.cfg.quad_tol
    k_lo = -int(math.ceil((T + max(0.0, float(np.max(w.imag)))) / h0))
    k_hi = int(math.ceil((T + max(0.0, -float(np.min(w.imag)))) / h0))
    peak = None

    def node_values(kk, step):
        nonlocal peak
        t = step * kk
        z = c + 1j * t
        gz = gz_fn(z)
        us, inv = _lattice_sums(w, c, step, kk)
        lg = np.asarray(log_gamma(us), dtype=complex)[inv]
        ker = np.exp(lg - lg_w[:, None]) * gz[None, :]
        ker[pole_w] = 0.0
        mag = np.abs(ker) * (2 + np.abs(t))[None, :] ** 10
        if peak is None:
            peak = np.max(np.abs(ker), axis=1, keepdims=True)
        keep = mag >= 1e-3 * qtol * peak
        vals = np.zeros(ker.shape, dtype=complex)
        errs = np.zeros(ker.shape)
        if keep.any():
            used = np.zeros(us.size, dtype=bool)
            used[inv[keep]] = True
            rank = np.cumsum(used) - 1
            fv, fe = inner(us[used] + shift)
            sel = rank[inv[keep]]
            vals[keep] = ker[keep] * fv[sel]
            errs[keep] = np.abs(ker[keep]) * fe[sel]
        return vals, errs, keep

    ks = np.arange(k_lo, k_hi + 1)
    f, fe, keep = node_values(ks, h0)
    if keep[:, 0].any() or keep[:, -1].any():
        raise QuadratureDiverged("integrand has not decayed at the truncation height")
    even = (ks % 2) == 0
    h = h0
    total = f.sum(axis=1)
    err_f = fe.sum(axis=1)
    integral = h * total / (2 * np.pi)
    qerr = np.abs(integral - 2 * h * f[:, even].sum(axis=1) / (2 * np.pi))
    tol = qtol * np.maximum(1.0, np.abs(integral))
    refine = 0
    while np.any(qerr > tol / 4) and refine < ctx.cfg.max_refine:
        refine += 1
        fm, fme, _ = node_values(2 * np.arange(k_lo, k_hi) + 1, h / 2)
        total = total + fm.sum(axis=1)
        new_integral = (h / 2) * total / (2 * np.pi)
        qerr = np.abs(new_integral - integral)
        integral = new_integral
        err_f = err_f + fme.sum(axis=1)
        k_lo, k_hi = 2 * k_lo, 2 * k_hi
        h /= 2
        tol = qtol * np.maximum(1.0, np.abs(integral))
    if np.any(qerr > tol / 4):
        ctx.warn(f"quadrature refinement stopped at h={h:g} with estimate {float(np.max(qerr)):.2e}")
    return integral, qerr + h * err_f / (2 * np.pi)


def _step(ctx, depth):
    return ctx.cfg.quad_h if depth == 0 else max(ctx.cfg.quad_h, ctx.cfg.inner_h)


# ---------------------------------------------------------------------------
# shifted formula for j <= r - 1


def _shift_batch(ctx, j, r, head, w, depth, fixed_N):
    """Contour-shifted evaluation; returns (values, errors, term dict)."""
    cfg = ctx.cfg
    eps = cfg.epsilon
    sr = complex(head[r - 1])
    inner_head = list(head[:r - 1])
    wr = w.real

    def valid(N):
        return bool(np.all(wr + N - eps >= POLE_GAP))

    def inner_ok(N):
        if r - 1 == 1:
            return True
        return bool(np.all(_region_mask(j, r - 1, inner_head, sr + w + N - eps,
                                        cfg.contour_margin)))

    N = _choose_N(ctx, valid, inner_ok, fixed_N)
    chi_r = ctx.chi(r)

    def inner(args):
        return _batch(ctx, j, r - 1, inner_head, args, depth + 1)

    # residue terms
    if chi_r is None:
        pole_coef = 1.0
        shifts = [2 * n - 1 for n in range(1, N // 2 + 1)]
        zvals = [complex(zeta_neg_odd(n)) for n in range(1, N // 2 + 1)]
        half = True
    else:
        pole_coef = _mean(chi_r)
        shifts = list(range(N))
        zvals = [l_at_neg_int(n, chi_r) for n in range(N)]
        half = False

    res_args = [sr + w + m for m in shifts]
    need_pole = pole_coef != 0
    if need_pole:
        if np.any(np.abs(w - 1) < 1e-14):
            raise PoleError("the last argument sits on s_{r+1} = 1")
        res_args.append(sr + w - 1)
    if half:
        res_args.append(sr + w)
    stacked = np.stack(res_args) if res_args else np.zeros((0, len(w)), complex)
    fv, fe = inner(stacked)
    idx = 0
    terms = {}
    total = np.zeros(len(w), dtype=complex)
    err = np.zeros(len(w))
    zsum = np.zeros(len(w), dtype=complex)
    for m, zv in zip(shifts, zvals):
        coef = np.asarray(complex_binomial(-w, m), dtype=complex) * zv
        zsum += coef * fv[idx]
        err += np.abs(coef) * fe[idx]
        idx += 1
    terms["residue-zeta-value"] = zsum
    total += zsum
    if need_pole:
        coef = pole_coef / (w - 1)
        terms["residue-pole-s"] = coef * fv[idx]
        total += terms["residue-pole-s"]
        err += np.abs(coef) * fe[idx]
        idx += 1
    if half:
        terms["residue-half"] = -0.5 * fv[idx]
        total += terms["residue-half"]
        err += 0.5 * fe[idx]

    def gz(z):
        neg = _base_value(ctx, -z, chi_r)
        return _gamma(-z) * neg

    integral, qerr = _quadrature(ctx, w, N - eps, sr, gz, inner, _step(ctx, depth), cfg.quad_T)
    terms["remainder-integral"] = integral
    total += integral
    err += qerr
    terms["_N"] = N
    return total, err, terms


# ---------------------------------------------------------------------------
# base chain j = r


def _mt_base_batch(ctx, r, head, w, depth, fixed_N):
    cfg = ctx.cfg
    eps = cfg.epsilon
    if r == 1:
        vals = _base_value(ctx, head[0] + w, ctx.chi(1))
        return vals, 64 * _EPS * (1 + np.abs(vals)), {}
    sr = complex(head[r - 1])
    inner_head = list(head[:r - 1])
    chi_r = ctx.chi(r)
    wr = w.real

    def valid(N):
        if not np.all(wr + N - eps >= POLE_GAP):
            return False
        return abs(sr.imag) >= POLE_GAP or abs(sr.real - 1 - (N - eps)) >= POLE_GAP

    def inner_ok(N):
        if r - 1 == 1:
            return True
        return bool(np.all(_region_mask(r - 1, r - 1, inner_head, w + N - eps,
                                        cfg.contour_margin)))

    N = _choose_N(ctx, valid, inner_ok, fixed_N)

    def inner(args):
        return _batch(ctx, r - 1, r - 1, inner_head, args, depth + 1)

    pole_coef = _mean(chi_r)
    with_pole = pole_coef != 0 and sr.real - 1 < N - eps
    res_args = [w + n for n in range(N)]
    if with_pole:
        res_args.append(w + sr - 1)
    fv, fe = inner(np.stack(res_args))
    total = np.zeros(len(w), dtype=complex)
    err = np.zeros(len(w))
    zsum = np.zeros(len(w), dtype=complex)
    hvals = _base_value(ctx, sr - np.arange(N, dtype=complex), chi_r)
    for n in range(N):
        coef = np.asarray(complex_binomial(-w, n), dtype=complex) * hvals[n]
        zsum += coef * fv[n]
        err += np.abs(coef) * fe[n]
    terms = {"residue-zeta-value": zsum}
    total += zsum
    if with_pole:
        coef = (pole_coef * _gamma(sr + w - 1) * complex(np.exp(log_gamma(1 - sr)))
                * np.asarray(rgamma(w), dtype=complex))
        terms["residue-pole-s"] = coef * fv[N]
        total += terms["residue-pole-s"]
        err += np.abs(coef) * fe[N]

    def gz(z):
        return _gamma(-z) * _base_value(ctx, sr - z, chi_r)

    integral, qerr = _quadrature(ctx, w, N - eps, 0.0, gz, inner, _step(ctx, depth), cfg.quad_T)
    terms["remainder-integral"] = integral
    total += integral
    err += qerr
    terms["_N"] = N
    return total, err, terms


# ---------------------------------------------------------------------------
# public entry points


def _check_args(kind, shape, s, chis):
    if kind not in ("zeta", "L"):
        raise DomainError(f"kind must be 'zeta' or 'L', got {kind!r}")
    if len(s) != shape.r + 1:
        raise DomainError(f"argument vector has length {len(s)}, expected {shape.r + 1}")
    if kind == "L":
        if chis is None or len(chis) != shape.r:
            raise DomainError(f"L evaluation needs {shape.r} characters")
        if len({c.q for c in chis}) != 1:
            raise DomainError("all characters must share one modulus")
        return list(chis)
    return None


def _refuse_singular(kind, shape, s, chis, cfg):
    planes = singular_planes_at(kind, shape, s, chis, cfg.singular_tol)
    if planes:
        desc = ", ".join(f"{'+'.join(f's_{i}' for i in p.subset)} = {p.constant}" for p in planes)
        raise SingularPoint(f"point lies on candidate singular hyperplane(s): {desc}", planes)


def _terms_list(terms):
    order = ("residue-pole-s", "residue-half", "residue-zeta-value", "remainder-integral")
    return [MBTerm(k, complex(np.asarray(terms[k]).ravel()[0])) for k in order if k in terms]


def _circle_dir(n):
    v = np.array([1.0 + 0.37 * i for i in range(n)]) * np.exp(0.61j * np.arange(n))
    return v / np.linalg.norm(v)


def _with_fallback(kind, shape, s, chis, cfg, fn):
    """Run fn(s); on an internal pole coincidence average over a small circle.

    Off the atlas the continued function is holomorphic, so its value is the
    mean over any small circle in a complex line through the point.
    """
    try:
        return fn(s)
    except PoleError:
        pass
    dist = distance_to_atlas(kind, shape, s, chis)
    rho = min(cfg.circle_radius, 0.4 * dist)
    if rho < 1e-6:
        raise PoleError("point is too close to a singular hyperplane for circle averaging")
    v = _circle_dir(len(s))
    m = cfg.circle_points
    vals, errs, warns = [], [], []
    depth = 0
    for k in range(m):
        e = np.exp(2j * np.pi * (k + 0.5) / m)
        pt = [complex(x) + rho * e * vi for x, vi in zip(s, v)]
        res = fn(pt)
        vals.append(res.value)
        errs.append(res.err_est)
        warns.extend(res.warnings)
        depth = max(depth, res.depth)
    vals = np.array(vals)
    mean = complex(vals.mean())
    half = complex(vals[::2].mean())
    out = EvalResult(mean, float(max(errs) + abs(mean - half)), res.method, depth,
                     sorted(set(warns)))
    out.warnings.append(f"removable pole coincidence: averaged over a circle of radius {rho:g}")
    return out


def _finish(ctx, value, err, method, terms=None):
    res = EvalResult(complex(value), float(err), method, ctx.depth_used, list(ctx.warnings))
    if terms:
        res.terms = _terms_list(terms)
    return res


def _run_shift(kind, shape, s, chis, cfg, fixed_N):
    def fn(pt):
        ctx = _Ctx(kind, chis, cfg, shape.r)
        v, e, terms = _shift_batch(ctx, shape.j, shape.r, pt[:-1], np.array([pt[-1]]), 0, fixed_N)
        return _finish(ctx, v[0], e[0], "shifted", terms)
    return _with_fallback(kind, shape, s, chis, cfg, fn)


def shifted_eval_zeta(shape, s, cfg=None):
    """Continued zeta-hat value through the contour-shifted formula (shift depth cfg.N)."""
    cfg = cfg or ContinuationConfig()
    s = [complex(x) for x in s]
    _check_args("zeta", shape, s, None)
    if shape.j >= shape.r:
        raise DomainError("shifted_eval_zeta needs j <= r - 1")
    _refuse_singular("zeta", shape, s, None, cfg)
    return _run_shift("zeta", shape, s, None, cfg, cfg.N)


def shifted_eval_l(shape, s, chis, cfg=None):
    """Character-twisted counterpart of shifted_eval_zeta."""
    cfg = cfg or ContinuationConfig()
    s = [complex(x) for x in s]
    chis = _check_args("L", shape, s, chis)
    if shape.j >= shape.r:
        raise DomainError("shifted_eval_l needs j <= r - 1")
    _refuse_singular("L", shape, s, chis, cfg)
    return _run_shift("L", shape, s, chis, cfg, cfg.N)


def mt_base_continuation(r, s, cfg=None, chis=None, N=None):
    """Continuation of the Mordell-Tornheim function of depth r (L version with chis).

    The integrand is Gamma(s_{r+1}+z) Gamma(-z)/Gamma(s_{r+1}) times the
    depth r-1 function at s_{r+1}+z times zeta(s_r - z); shifting to
    Re z = N - epsilon picks up z = 0..N-1 and z = s_r - 1.
    """
    cfg = cfg or ContinuationConfig()
    shape = Shape(r, r)
    s = [complex(x) for x in s]
    kind = "zeta" if chis is None else "L"
    chis = _check_args(kind, shape, s, chis)
    _refuse_singular(kind, shape, s, chis, cfg)
    if r == 1:
        ctx = _Ctx(kind, chis, cfg, r)
        v = _base_value(ctx, np.array([s[0] + s[1]]), ctx.chi(1))[0]
        return EvalResult(complex(v), float(64 * _EPS * (1 + abs(v))), "exact-identity", 0, [])

    def fn(pt):
        ctx = _Ctx(kind, chis, cfg, r)
        v, e, terms = _mt_base_batch(ctx, r, pt[:-1], np.array([pt[-1]]), 0, N)
        return _finish(ctx, v[0], e[0], "shifted", terms)
    return _with_fallback(kind, shape, s, chis, cfg, fn)


def eval_auto(kind, shape, s, chis=None, cfg=None, N=None):
    """Evaluate anywhere off the singular set, choosing the route automatically.

    ``N`` fixes the shift depth of the outermost contour; by default it is
    chosen per call.
    """
    cfg = cfg or ContinuationConfig()
    s = [complex(x) for x in s]
    chis = _check_args(kind, shape, s, chis)
    _refuse_singular(kind, shape, s, chis, cfg)
    j, r = shape.j, shape.r
    if r == 1:
        ctx = _Ctx(kind, chis, cfg, r)
        v = _base_value(ctx, np.array([s[0] + s[1]]), ctx.chi(1))[0]
        return EvalResult(complex(v), float(64 * _EPS * (1 + abs(v))), "exact-identity", 0, [])
    if region_contains(shape, s, DIRECT_MARGIN):
        v, e, bound, warns, _ = hat_direct_batch(shape, s[:-1], [s[-1]], chis, cfg.trunc)
        return EvalResult(complex(v[0]), float(e[0]), "direct", 0, warns, float(bound[0]))
    if j == r:
        return mt_base_continuation(r, s, cfg, chis, N)
    return _run_shift(kind, shape, s, chis, cfg, N)


def eval_batch(kind, shape, head, w, chis=None, cfg=None):
    """Vectorised evaluation over the last argument (no singular-set screening)."""
    cfg = cfg or ContinuationConfig()
    ctx = _Ctx(kind, chis, cfg, shape.r)
    v, e = _batch(ctx, shape.j, shape.r, [complex(x) for x in head], np.asarray(w, complex), 0)
    return v, e, ctx.warnings


# ---------------------------------------------------------------------------
# the integral representation on the original line


def _mb_parts(shape, s):
    j, r = shape.j, shape.r
    if j >= r:
        raise DomainError("the vertical-line representation needs j <= r - 1")
    return list(s[:r - 1]), complex(s[r - 1]), complex(s[r])


def mb_integrand_zeta(shape, s, z, cfg=None):
    """Integrand Gamma(w+z) Gamma(-z)/Gamma(w) F(s_r + w + z) zeta(-z) with w = s_{r+1}."""
    cfg = cfg or ContinuationConfig()
    s = [complex(x) for x in s]
    inner_head, sr, w = _mb_parts(shape, s)
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    scalar = z.size == 1
    ctx = _Ctx("zeta", None, cfg, shape.r)
    gm = np.asarray(log_gamma(-z), dtype=complex)
    if np.any(np.abs(z + 1) < 1e-14):
        raise PoleError("zeta(-z) has a pole at z = -1")
    gw = np.asarray(log_gamma(w + z), dtype=complex)
    fv, _ = _batch(ctx, shape.j, shape.r - 1, inner_head, sr + w + z, 1)
    out = np.exp(gm + gw) * complex(rgamma(w)) * fv * np.asarray(riemann_zeta(-z), dtype=complex)
    return complex(out[0]) if scalar else out


def mb_quadrature_eval(shape, s, cfg=None):
    """Direct quadrature of the vertical-line representation at c = -(1 + Re s_{r+1})/2."""
    cfg = cfg or ContinuationConfig()
    s = [complex(x) for x in s]
    inner_head, sr, w = _mb_parts(shape, s)
    if w.real <= 1:
        raise NoValidContour(f"no abscissa with -Re(s_{{r+1}}) < c < -1 for Re(s_{{r+1}}) = {w.real}")
    if not region_contains(shape, s, DIRECT_MARGIN):
        raise DomainError("mb_quadrature_eval is a check inside the convergence region")
    c = cfg.c_abscissa if cfg.c_abscissa is not None else -(1 + w.real) / 2
    if not -w.real < c < -1:
        raise NoValidContour(f"abscissa {c} outside (-Re s_(r+1), -1)")
    ctx = _Ctx("zeta", None, cfg, shape.r)

    def inner(args):
        return _batch(ctx, shape.j, shape.r - 1, inner_head, args, 1)

    def gz(z):
        return _gamma(-z) * np.asarray(riemann_zeta(-z), dtype=complex)

    val, err = _quadrature(ctx, np.array([w]), c, sr, gz, inner, cfg.quad_h, cfg.quad_T)
    res = _finish(ctx, val[0], err[0], "mb-quadrature")
    res.terms = [MBTerm("remainder-integral", complex(val[0]))]
    return res


def integrand_decay_rate(shape, s, cfg=None, N=None, t_lo=10.0, t_hi=30.0, points=41):
    """Least-squares rate a in |integrand| ~ exp(-a |Im z|) on Re z = N - epsilon."""
    cfg = cfg or ContinuationConfig()
    N = cfg.N if N is None else N
    t = np.linspace(t_lo, t_hi, points)
    z = N - cfg.epsilon + 1j * t
    vals = np.abs(mb_integrand_zeta(shape, s, z, cfg))
    slope = np.polyfit(t, np.log(vals), 1)[0]
    return float(-slope)
