"""Candidate singular hyperplanes of the continued series and numerical pole checks.

A hyperplane is ``sum_{i in S} s_i = c`` with integer ``c``.  The planes come
in families: a fixed index subset ``S`` together with a rule for the allowed
constants.  Families support both a membership predicate (any constant) and
bounded enumeration, so a point can be tested against the infinite atlas.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import DomainError, TransversalNotFound
from .series import Shape

# constants of the form base - d, d in {-1, 0, 1, 3, 5, ...}
def _in_d_set(d):
    return d in (-1, 0) or (d >= 1 and d % 2 == 1)


@dataclass(frozen=True)
class PrincipalPattern:
    flags: tuple

    @classmethod
    def of(cls, chis):
        return cls(tuple(bool(c.principal) for c in chis))

    def delta(self, i):
        """1 if the character at 1-based slot i is principal."""
        return 1 if self.flags[i - 1] else 0


@dataclass(frozen=True)
class Hyperplane:
    subset: tuple
    constant: int
    family: str
    params: tuple = ()

    @property
    def param_dict(self):
        return {k: (list(v) if isinstance(v, tuple) else v) for k, v in self.params}

    def form(self, s):
        """Value of the linear form sum_{i in S} s_i - c at s."""
        return sum(complex(s[i - 1]) for i in self.subset) - self.constant

    def to_json(self):
        return {"family": self.family, "subset": list(self.subset),
                "constant": self.constant, "params": self.param_dict}

    def sort_key(self):
        return (len(self.subset), self.subset, self.constant)


@dataclass(frozen=True)
class _Family:
    tag: str
    subset: tuple
    base: int
    pname: str | None       # None: single constant ``base``
    pmin: float = 0         # parameter lower bound, or "D" for the d-set
    extra: tuple = ()       # fixed parameters identifying the family member

    def allows(self, c):
        if self.pname is None:
            return c == self.base
        p = self.base - c
        if self.pmin == "D":
            return _in_d_set(p)
        return p >= self.pmin

    def plane(self, c):
        params = self.extra
        if self.pname is not None:
            params = params + ((self.pname, self.base - c),)
        return Hyperplane(self.subset, c, self.tag, params)

    def instances(self, bound):
        if self.pname is None:
            return [self.plane(self.base)] if abs(self.base) <= bound else []
        return [self.plane(c) for c in range(-bound, bound + 1) if self.allows(c)]


def _subsets(items, sizes):
    for m in sizes:
        yield from combinations(items, m)


def _families_zeta(shape):
    j, r = shape.j, shape.r
    last = r + 1
    if j == r:
        return _families_mt(r)
    fams = [_Family("pole", (last,), 1, None)]
    if j == r - 1:
        for J in _subsets(range(1, r), range(1, r - 1)):
            fams.append(_Family("r-1.partial", J + (r, last), len(J), "l", -1, (("j", J),)))
        fams.append(_Family("r-1.full", tuple(range(1, last + 1)), r - 1, "d", "D"))
        return fams
    fams.append(_Family("j.pair", (r, last), 1, "d", "D"))
    for L in range(3, r - j + 1):
        fams.append(_Family("j.suffix", tuple(range(r + 2 - L, last + 1)), L, "l", 0,
                            (("length", L),)))
    tail = tuple(range(j + 1, last + 1))
    for K in _subsets(range(1, j + 1), range(1, j + 1)):
        fams.append(_Family("j.mixed", K + tail, len(K), "l'", -(r - j), (("k", K),)))
    return fams


def _families_mt(r):
    last = r + 1
    fams = [_Family("mt.partial", J + (last,), len(J), "l", 0, (("j", J),))
            for J in _subsets(range(1, r + 1), range(1, r))]
    fams.append(_Family("mt.full", tuple(range(1, last + 1)), r, None))
    return fams


def _families_l(shape, pattern):
    j, r = shape.j, shape.r
    last = r + 1
    if len(pattern.flags) != r:
        raise DomainError(f"pattern has {len(pattern.flags)} flags, expected {r}")
    if not any(pattern.flags):
        return []
    if j == r:
        T = tuple(i for i in range(1, r + 1) if pattern.flags[i - 1])
        k = len(T)
        fams = [_Family("l-mt.partial", U + (last,), len(U), "l", 0, (("u", U),))
                for U in _subsets(T, range(1, k))]
        if k == r:
            fams.append(_Family("l-mt.full", T + (last,), k, None, 0, (("u", T),)))
        else:
            fams.append(_Family("l-mt.full", T + (last,), k, "l", 0, (("u", T),)))
        return fams
    fams = []
    if pattern.flags[r - 1]:
        fams.append(_Family("pole", (last,), 1, None))
    T = tuple(i for i in range(1, j + 1) if pattern.flags[i - 1])
    if j == r - 1:
        dr = pattern.delta(r)
        for U in _subsets(T, range(1, len(T) + 1)):
            fams.append(_Family("l.r-1.sub", U + (r, last), len(U), "l", -dr, (("u", U),)))
        return fams
    for d in range(1, r - j + 1):
        if pattern.flags[r - d - 1]:
            fams.append(_Family("l.j.suffix", tuple(range(r - d + 1, last + 1)), d + 1, "l0", 0,
                                (("d_h", d),)))
    big_delta = sum(pattern.delta(i) for i in range(r - j, r + 1))
    tail = tuple(range(j + 1, last + 1))
    for U in _subsets(T, range(1, len(T) + 1)):
        fams.append(_Family("l.j.mixed", U + tail, len(U), "l'", -big_delta, (("u", U),)))
    return fams


def families(kind, shape, pattern=None):
    if kind == "zeta":
        return _families_zeta(shape)
    if kind == "L":
        return _families_l(shape, pattern)
    raise DomainError(f"unknown kind {kind!r}")


def _sorted_unique(planes):
    seen = {}
    for p in planes:
        seen.setdefault((p.subset, p.constant, p.family, p.params), p)
    return sorted(seen.values(), key=lambda p: (p.sort_key(), p.family, p.params))


def hyperplanes_zeta(shape, const_bound):
    """All candidate planes of the zeta-hat function with |constant| <= const_bound."""
    if const_bound < 0:
        raise DomainError("const_bound must be >= 0")
    return _sorted_unique(p for f in _families_zeta(shape) for p in f.instances(const_bound))


def hyperplanes_l(shape, pattern, const_bound):
    if const_bound < 0:
        raise DomainError("const_bound must be >= 0")
    return _sorted_unique(p for f in _families_l(shape, pattern) for p in f.instances(const_bound))


def hyperplanes_mt(r, const_bound):
    if const_bound < 0:
        raise DomainError("const_bound must be >= 0")
    return _sorted_unique(p for f in _families_mt(r) for p in f.instances(const_bound))


def plane_from(kind, shape, family, params, pattern=None):
    """Rebuild a hyperplane from its (family, params) encoding."""
    params = {k: (tuple(v) if isinstance(v, list) else v) for k, v in params.items()}
    for fam in families(kind, shape, pattern):
        if fam.tag != family or any(params.get(k) != v for k, v in fam.extra):
            continue
        if fam.pname is None:
            return fam.plane(fam.base)
        if fam.pname in params:
            c = fam.base - params[fam.pname]
            if fam.allows(c):
                return fam.plane(c)
    raise DomainError(f"no plane of family {family!r} with params {params}")


def on_singular_set(point, planes, tol=1e-9):
    """Planes whose linear form is within ``tol`` of zero at ``point``."""
    if tol <= 0:
        raise DomainError("tol must be positive")
    return [p for p in planes if abs(p.form(point)) <= tol]


def singular_planes_at(kind, shape, s, chis=None, tol=1e-9):
    """Atlas planes (any constant) through ``s``; membership is tested per family."""
    pattern = PrincipalPattern.of(chis) if kind == "L" else None
    hits = []
    for fam in families(kind, shape, pattern):
        val = sum(complex(s[i - 1]) for i in fam.subset)
        n = round(val.real)
        if abs(val - n) <= tol and fam.allows(n):
            hits.append(fam.plane(n))
    return _sorted_unique(hits)


def distance_to_atlas(kind, shape, s, chis=None):
    """Smallest |linear form| over all atlas planes (per family the nearest allowed constant)."""
    pattern = PrincipalPattern.of(chis) if kind == "L" else None
    best = math.inf
    for fam in families(kind, shape, pattern):
        val = sum(complex(s[i - 1]) for i in fam.subset)
        n0 = math.floor(val.real)
        for n in range(n0 - 2, n0 + 4):
            if fam.allows(n):
                best = min(best, abs(val - n))
    return best


# ---------------------------------------------------------------------------
# regularising product and numerical pole checks


def phi_factor(shape, N, s):
    """Product of the linear forms of every zeta-hat plane with |constant| <= N.

    The j = r - k shape with k >= 1 is required.
    """
    if shape.j >= shape.r:
        raise DomainError("phi_factor needs j <= r - 1")
    out = 1 + 0j
    for p in hyperplanes_zeta(shape, N):
        out *= p.form(s)
    return out


_PROBE_T = (1e-1, 1e-2, 1e-3, 1e-4)
_GROWTH_CAP = 2.0


def _probe_directions(plane, r):
    n = np.zeros(r + 1)
    n[[i - 1 for i in plane.subset]] = 1.0
    yield n / np.linalg.norm(n)
    for i in reversed(plane.subset):
        e = np.zeros(r + 1)
        e[i - 1] = 1.0
        yield e
    rng = np.random.default_rng(7)
    for _ in range(8):
        v = rng.normal(size=r + 1)
        if abs(v @ n) > 0.2 * np.linalg.norm(v) * np.linalg.norm(n):
            yield v / np.linalg.norm(v)


def transversals(kind, shape, plane, base, chis=None):
    """Unit directions leaving ``plane`` whose probe points stay off the other planes."""
    r = shape.r
    found = False
    for v in _probe_directions(plane, r):
        for phase in (1.0, 1j, np.exp(0.25j * np.pi)):
            u = v * phase
            ok = True
            for t in _PROBE_T:
                pt = [complex(b) + t * ui for b, ui in zip(base, u)]
                if distance_to_atlas(kind, shape, pt, chis) < 0.5 * t * 1e-3:
                    ok = False
                    break
            if ok:
                found = True
                yield u
    if not found:
        raise TransversalNotFound(f"no probe direction avoids the other planes near {base}")


def transversal(kind, shape, plane, base, chis=None):
    return next(transversals(kind, shape, plane, base, chis))


@dataclass
class CancellationReport:
    pole_order_est: float
    pole_order_raw: float
    bounded_product: bool
    samples: list
    direction: tuple = ()

    def to_json(self):
        return {"pole_order_est": self.pole_order_est, "pole_order_raw": self.pole_order_raw,
                "bounded_product": self.bounded_product,
                "samples": [[t, abs(v)] for t, v in self.samples]}


def cancellation_check(kind, shape, plane, base, chis=None, cfg=None):
    """Approach ``plane`` transversally and estimate the pole order of the function.

    Samples t = 1e-1 ... 1e-4 along a transversal ray. The order is the
    log-log slope of |f| between the two closest samples, where the polar
    part dominates even when its residue is small next to the regular part.
    The product with the linear form counts as bounded when it grows by at
    most a factor 2 over that last decade (a double pole would give 10).
    A full-range log-log fit only steers the choice of ray away from
    accidental cancellation.
    """
    from .continuation import eval_auto

    if abs(plane.form(base)) > 1e-12:
        raise DomainError(f"base point is not on the plane (form = {abs(plane.form(base)):.3g})")
    best = None
    for attempt, v in enumerate(transversals(kind, shape, plane, base, chis)):
        samples = []
        prods = []
        for t in _PROBE_T:
            pt = [complex(b) + t * vi for b, vi in zip(base, v)]
            val = eval_auto(kind, shape, pt, chis, cfg).value
            samples.append((t, val))
            prods.append(abs(plane.form(pt) * val))
        logt = np.log([t for t, _ in samples])
        logf = np.log([max(abs(val), 1e-300) for _, val in samples])
        coef = np.polyfit(logt, logf, 1)
        resid = float(np.max(np.abs(np.polyval(coef, logt) - logf)))
        if best is None or resid < best[0]:
            best = (resid, -float(coef[0]), samples, prods, tuple(complex(x) for x in v))
        # a straight log-log line means no accidental cancellation on this ray
        if resid < 0.1 or attempt >= 5:
            break
    _, _, samples, prods, direction = best
    (t1, f1), (t2, f2) = samples[-2:]
    raw = float(np.log(max(abs(f2), 1e-300) / max(abs(f1), 1e-300)) / np.log(t1 / t2))
    bounded = prods[-1] <= _GROWTH_CAP * prods[-2]
    return CancellationReport(round(2 * raw) / 2, raw, bool(bounded), samples, direction)
