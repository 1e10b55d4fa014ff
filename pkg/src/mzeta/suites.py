"""Consistency suites behind ``mzeta check``.

Each suite draws reproducible sample points from a seed, compares two
independent routes to the same quantity and returns a JSON-ready report
with per-point deltas and a verdict against a fixed tolerance.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .continuation import (ContinuationConfig, eval_auto, mb_quadrature_eval, shifted_eval_l,
                           shifted_eval_zeta)
from .errors import DomainError, MZetaError
from .series import DIRECT_MARGIN, Shape, hat_direct_batch, region_contains
from .singularity import (cancellation_check, distance_to_atlas, hyperplanes_zeta, phi_factor,
                          plane_from)

TOLERANCES = {"mb": 1e-6, "shift": 1e-6, "residue": 1e-5, "entire": 1e-4, "phi": 1.2}
SUITES = tuple(TOLERANCES)


def worker_count():
    """Thread cap from MZETA_THREADS (default 1)."""
    try:
        n = int(os.environ.get("MZETA_THREADS", "1"))
    except ValueError:
        n = 1
    return max(1, n)


def _pmap(fn, items):
    items = list(items)
    n = min(worker_count(), len(items))
    if n <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))   # map keeps input order


def _cj(z):
    z = complex(z)
    return [z.real, z.imag]


def in_region_points(shape, n, rng):
    """Random points of the convergence region with Re s_{r+1} > 1."""
    pts = []
    while len(pts) < n:
        re = np.concatenate([rng.uniform(1.5, 3.0, shape.j),
                             rng.uniform(1.2, 2.5, shape.r + 1 - shape.j)])
        im = rng.uniform(-1.0, 1.0, shape.r + 1)
        s = [complex(a, b) for a, b in zip(re, im)]
        if region_contains(shape, s, 0.2):
            pts.append(s)
    return pts


def off_region_points(shape, n, rng, kind="zeta", chis=None, min_dist=0.05):
    """Random points outside the region, kept away from the candidate singular set."""
    pts = []
    while len(pts) < n:
        re = rng.uniform(-1.5, 1.5, shape.r + 1)
        re[:shape.j] = rng.uniform(0.3, 2.0, shape.j)
        im = rng.uniform(-0.5, 0.5, shape.r + 1)
        s = [complex(a, b) for a, b in zip(re, im)]
        if region_contains(shape, s, DIRECT_MARGIN):
            continue
        if distance_to_atlas(kind, shape, s, chis) < min_dist:
            continue
        pts.append(s)
    return pts


def point_on_plane(plane, shape, rng):
    """Random point on ``plane``, solving for its last coordinate."""
    s = list(rng.uniform(-0.5, 1.5, shape.r + 1) + 0.2j * rng.uniform(-1, 1, shape.r + 1))
    i = plane.subset[-1] - 1
    s[i] -= plane.form(s)
    return [complex(x) for x in s]


def _direct(shape, s, chis, cfg):
    v, e, _, _, _ = hat_direct_batch(shape, s[:-1], [s[-1]], chis, cfg.trunc)
    return complex(v[0]), float(e[0])


def _report(suite, shape, points, tol, extra=None):
    deltas = [p["delta"] for p in points]
    ok = all(p.get("pass", True) for p in points) and all(np.isfinite(deltas))
    out = {"suite": suite, "shape": [shape.j, shape.r], "tol": tol, "points": points,
           "max_delta": float(max(deltas)) if deltas else 0.0, "pass": bool(ok)}
    if extra:
        out.update(extra)
    return out


def _guard(fn):
    """Turn a library error at one point into a failing row."""
    def run(x):
        try:
            return fn(x)
        except MZetaError as exc:
            return {"point": [_cj(z) for z in x] if isinstance(x, list) else None,
                    "delta": float("inf"), "pass": False, "error": f"{type(exc).__name__}: {exc}"}
    return run


def suite_mb(shape, seed=0, n_points=5, cfg=None):
    """Vertical-line quadrature against the direct sum."""
    cfg = cfg or ContinuationConfig()
    tol = TOLERANCES["mb"]
    pts = in_region_points(shape, n_points, np.random.default_rng(seed))

    def one(s):
        mb = mb_quadrature_eval(shape, s, cfg)
        d, _ = _direct(shape, s, None, cfg)
        delta = abs(mb.value - d)
        return {"point": [_cj(z) for z in s], "direct": _cj(d), "mb": _cj(mb.value),
                "delta": delta, "pass": delta <= tol}
    return _report("mb", shape, _pmap(_guard(one), pts), tol)


def suite_shift(shape, seed=0, n_points=5, cfg=None, depths=(4, 6, 8), n_off=10, chis=None):
    """Shifted formula against the direct sum, then N against N + 2 off the region."""
    cfg = cfg or ContinuationConfig()
    tol = TOLERANCES["shift"]
    kind = "zeta" if chis is None else "L"
    rng = np.random.default_rng(seed)
    pts = in_region_points(shape, n_points, rng)
    off = off_region_points(shape, n_off, rng, kind, chis)

    def shifted(s, N):
        c = ContinuationConfig(**{**cfg.__dict__, "N": N})
        if chis is None:
            return shifted_eval_zeta(shape, s, c).value
        return shifted_eval_l(shape, s, chis, c).value

    def inside(s):
        d, _ = _direct(shape, s, chis, cfg)
        deltas = {str(N): abs(shifted(s, N) - d) for N in depths}
        delta = max(deltas.values())
        return {"point": [_cj(z) for z in s], "where": "in-region", "deltas": deltas,
                "delta": delta, "pass": delta <= tol}

    def outside(s):
        N = depths[0]
        a, b = shifted(s, N), shifted(s, N + 2)
        delta = abs(a - b)
        return {"point": [_cj(z) for z in s], "where": "off-region", "value": _cj(b),
                "delta": delta, "pass": delta <= tol}

    rows = _pmap(_guard(inside), pts) + _pmap(_guard(outside), off)
    return _report("shift", shape, rows, tol)


def extrapolate_to_zero(ts, values):
    """Value at t = 0 of the interpolating polynomial through (ts, values) (Neville)."""
    ts = list(ts)
    p = [complex(v) for v in values]
    n = len(ts)
    for k in range(1, n):
        for i in range(n - k):
            p[i] = (ts[i + k] * p[i] - ts[i] * p[i + 1]) / (ts[i + k] - ts[i])
    return p[0]


def residue_at_one(shape, head=None, chis=None, cfg=None, ts=(1e-2, 1e-3, 1e-4)):
    """(s_{r+1} - 1) f along s_{r+1} = 1 + t, extrapolated to t = 0."""
    cfg = cfg or ContinuationConfig()
    kind = "zeta" if chis is None else "L"
    head = [2.0] * shape.r if head is None else list(head)
    g = [t * eval_auto(kind, shape, head + [1 + t], chis, cfg).value for t in ts]
    return extrapolate_to_zero(ts, g)


def suite_residue(shape, seed=0, n_points=1, cfg=None, chis=None):
    """Residue at s_{r+1} = 1 against the level r-1 value at s_r (times the character mean)."""
    if shape.j >= shape.r:
        raise DomainError("the residue suite needs j <= r - 1")
    cfg = cfg or ContinuationConfig()
    tol = TOLERANCES["residue"]
    kind = "zeta" if chis is None else "L"
    rng = np.random.default_rng(seed)
    heads = [[2.0] * shape.r]
    while len(heads) < n_points:
        heads.append(list(rng.uniform(1.6, 2.6, shape.r)))

    def one(head):
        res = residue_at_one(shape, head, chis, cfg)
        inner = eval_auto(kind, Shape(min(shape.j, shape.r - 1), shape.r - 1), head,
                          None if chis is None else chis[:-1], cfg).value
        factor = 1.0 if chis is None else chis[-1].mean
        expect = factor * inner
        delta = abs(res - expect)
        return {"point": [_cj(z) for z in head], "residue": _cj(res), "expected": _cj(expect),
                "factor": factor, "delta": delta, "pass": delta <= tol}
    return _report("residue", shape, _pmap(_guard(one), heads), tol)


def suite_entire(shape, chis, seed=0, n_points=5, cfg=None, t=1e-7):
    """Relative jump of the L-function across sampled zeta-type hyperplanes."""
    cfg = cfg or ContinuationConfig()
    tol = TOLERANCES["entire"]
    rng = np.random.default_rng(seed)
    planes = hyperplanes_zeta(shape, 3)
    picks = [planes[i] for i in rng.choice(len(planes), min(n_points, len(planes)), replace=False)]
    jobs = []
    for p in picks:
        v = rng.normal(size=shape.r + 1) + 1j * rng.normal(size=shape.r + 1)
        jobs.append((p, point_on_plane(p, shape, rng), v / np.linalg.norm(v)))

    def one(job):
        p, base, v = job
        try:
            a = eval_auto("L", shape, [b + t * x for b, x in zip(base, v)], chis, cfg).value
            b = eval_auto("L", shape, [b - t * x for b, x in zip(base, v)], chis, cfg).value
        except MZetaError as exc:
            return {"plane": p.to_json(), "delta": float("inf"), "pass": False,
                    "error": f"{type(exc).__name__}: {exc}"}
        delta = abs(a - b) / max(abs(a), abs(b), 1e-300)
        return {"plane": p.to_json(), "point": [_cj(z) for z in base], "delta": delta,
                "pass": delta < tol}
    return _report("entire", shape, _pmap(one, jobs), tol)


def round_trip_failures(shape, bound=3):
    """Planes whose (family, params) encoding does not rebuild the same plane."""
    bad = []
    for p in hyperplanes_zeta(shape, bound):
        try:
            if plane_from("zeta", shape, p.family, p.param_dict) != p:
                bad.append(p.to_json())
        except DomainError:
            bad.append(p.to_json())
    return bad


def suite_phi(shape, seed=0, n_points=5, cfg=None, phi_N=2, ratio_cap=2.0):
    """Pole order and boundedness of the regularised product near sampled planes.

    ``phi_ratio`` is |Phi f| at the closest probe over |Phi f| one decade
    further out; a product that stays bounded keeps it near or below 1.
    """
    cfg = cfg or ContinuationConfig()
    tol = TOLERANCES["phi"]
    rng = np.random.default_rng(seed)
    planes = hyperplanes_zeta(shape, phi_N)
    picks = [planes[i] for i in rng.choice(len(planes), min(n_points, len(planes)), replace=False)]
    jobs = [(p, point_on_plane(p, shape, rng)) for p in picks]

    def one(job):
        p, base = job
        try:
            rep = cancellation_check("zeta", shape, p, base, None, cfg)
        except MZetaError as exc:
            return {"plane": p.to_json(), "delta": float("inf"), "pass": False,
                    "error": f"{type(exc).__name__}: {exc}"}
        prods = [abs(phi_factor(shape, phi_N, [b + t * x for b, x in zip(base, rep.direction)]) * f)
                 for t, f in rep.samples]
        ratio = prods[-1] / prods[-2] if prods[-2] > 0 else float("inf")
        ok = rep.pole_order_raw <= tol and rep.bounded_product and ratio <= ratio_cap
        return {"plane": p.to_json(), "point": [_cj(z) for z in base],
                "pole_order": rep.pole_order_est, "pole_order_raw": rep.pole_order_raw,
                "bounded_product": rep.bounded_product, "phi_ratio": float(ratio),
                "delta": rep.pole_order_raw, "pass": bool(ok)}
    rows = _pmap(one, jobs)
    bad = round_trip_failures(shape)
    out = _report("phi", shape, rows, tol, {"round_trip_failures": bad})
    out["pass"] = out["pass"] and not bad
    return out


def run_suite(name, shape, seed=0, n_points=None, cfg=None, chis=None):
    if name == "mb":
        return suite_mb(shape, seed, n_points or 5, cfg)
    if name == "shift":
        return suite_shift(shape, seed, n_points or 5, cfg, chis=chis)
    if name == "residue":
        return suite_residue(shape, seed, n_points or 1, cfg, chis)
    if name == "entire":
        if chis is None:
            raise DomainError("the entire suite needs --chars")
        return suite_entire(shape, chis, seed, n_points or 5, cfg)
    if name == "phi":
        return suite_phi(shape, seed, n_points or 5, cfg)
    raise DomainError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
