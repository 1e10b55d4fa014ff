"""Dirichlet characters mod q, generalized Bernoulli numbers and L(s, chi)."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product

import numpy as np

from .errors import CapExceeded, DomainError, PoleError
from .special import BERNOULLI_CAP, POLE_TOL, bernoulli_poly, hurwitz_zeta, riemann_zeta

MODULUS_CAP = 1000


def factorize(n):
    out = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def totient(q):
    """Euler's phi(q)."""
    if q < 1:
        raise DomainError("totient: q must be >= 1")
    phi = q
    for p in factorize(q):
        phi = phi // p * (p - 1)
    return phi


@dataclass(frozen=True, eq=False)
class DirichletCharacter:
    """A character mod q stored as its value table on residues 0..q-1."""

    q: int
    values: np.ndarray = field(repr=False)
    principal: bool
    index: int = 0
    exponents: tuple = ()

    def __call__(self, n):
        return self.values[np.asarray(n) % self.q]

    @property
    def mean(self):
        """Average of chi over one period: phi(q)/q if principal, else 0."""
        return totient(self.q) / self.q if self.principal else 0.0

    def __eq__(self, other):
        return (isinstance(other, DirichletCharacter) and self.q == other.q
                and np.allclose(self.values, other.values, atol=1e-12))

    def __hash__(self):
        return hash((self.q, self.index))


def _element_order(g, m):
    k, x = 1, g % m
    while x != 1:
        x = x * g % m
        k += 1
    return k


def _prime_power_generators(p, e):
    """Generators (mod p^e) and their orders for the cyclic factors of (Z/p^e)^*."""
    m = p ** e
    if p == 2:
        if e == 1:
            return []
        if e == 2:
            return [(m - 1, 2)]
        return [(m - 1, 2), (5, 2 ** (e - 2))]
    phi = m - m // p
    for g in range(2, m):
        if math.gcd(g, p) == 1 and _element_order(g, m) == phi:
            return [(g, phi)]
    raise AssertionError("no primitive root found")  # unreachable for odd p


def _crt_lift(residue, modulus, q):
    """The unit mod q that is `residue` mod `modulus` and 1 mod q/modulus."""
    other = q // modulus
    if other == 1:
        return residue % q
    # x = residue (mod modulus), x = 1 (mod other)
    inv = pow(modulus, -1, other)
    x = residue + modulus * ((1 - residue) * inv % other)
    return x % q


@lru_cache(maxsize=64)
def _group_structure(q):
    gens = []
    for p, e in sorted(factorize(q).items()):
        m = p ** e
        for g, order in _prime_power_generators(p, e):
            gens.append((_crt_lift(g, m, q), order))
    # discrete-log table: unit -> exponent vector
    dlog = {}
    orders = [o for _, o in gens]
    for exps in product(*(range(o) for o in orders)):
        x = 1
        for (g, _), k in zip(gens, exps):
            x = x * pow(g, k, q) % q
        dlog[x] = exps
    return tuple(gens), dlog


def characters_mod(q, cap=MODULUS_CAP):
    """All phi(q) characters mod q in canonical order (principal first).

    Characters are ordered lexicographically by their exponent tuples on the
    generators of the cyclic factors of (Z/q)^*.
    """
    if q < 1:
        raise DomainError("characters_mod: q must be >= 1")
    if q > cap:
        raise CapExceeded(f"characters_mod: q={q} exceeds cap {cap}")
    if q == 1:
        return [DirichletCharacter(1, np.ones(1, dtype=complex), True, 0, ())]
    gens, dlog = _group_structure(q)
    orders = [o for _, o in gens]
    units = sorted(dlog)
    logs = np.array([dlog[a] for a in units], dtype=float).reshape(len(units), len(orders))
    chars = []
    for idx, exps in enumerate(product(*(range(o) for o in orders))):
        phase = logs @ (np.array(exps, dtype=float) / np.array(orders, dtype=float)) if orders else np.zeros(len(units))
        vals = np.zeros(q, dtype=complex)
        vals[units] = np.exp(2j * np.pi * phase)
        # snap to exact +-1, +-i where applicable
        vals.real[np.abs(vals.real) < 1e-15] = 0.0
        vals.imag[np.abs(vals.imag) < 1e-15] = 0.0
        vals.setflags(write=False)
        chars.append(DirichletCharacter(q, vals, not any(exps), idx, tuple(exps)))
    return chars


def principal_character(q):
    return characters_mod(q)[0]


def character(q, index):
    chars = characters_mod(q)
    if not 0 <= index < len(chars):
        raise DomainError(f"character index {index} out of range for q={q}")
    return chars[index]


def gen_bernoulli(n, chi, cap=BERNOULLI_CAP):
    """B_{n,chi} = q^(n-1) sum_{a=1}^{q} chi(a) B_n(a/q)."""
    if n > cap:
        raise CapExceeded(f"gen_bernoulli: n={n} exceeds cap {cap}")
    q = chi.q
    acc = 0j
    for a in range(1, q + 1):
        c = chi.values[a % q]
        if c != 0:
            acc += c * float(bernoulli_poly(n, Fraction(a, q), cap))
    return complex(acc * float(Fraction(q) ** (n - 1)))


def l_at_neg_int(n, chi, cap=BERNOULLI_CAP):
    """L(-n, chi) = -B_{n+1,chi} / (n+1)."""
    if n < 0:
        raise DomainError("l_at_neg_int: n must be >= 0")
    if n + 1 > cap:
        raise CapExceeded(f"l_at_neg_int: n+1={n + 1} exceeds cap {cap}")
    return -gen_bernoulli(n + 1, chi, cap) / (n + 1)


def l_line(s, chi):
    """Dirichlet L(s, chi) = q^(-s) sum_a chi(a) zeta(s, a/q), any s (array ok)."""
    s_arr = np.asarray(s, dtype=complex)
    scalar = s_arr.ndim == 0
    s_arr = np.atleast_1d(s_arr)
    q = chi.q
    at_one = np.abs(s_arr - 1) < POLE_TOL
    if q == 1:
        out = np.asarray(riemann_zeta(s_arr), dtype=complex)
        return complex(out[0]) if scalar else out
    if at_one.any() and chi.principal:
        raise PoleError("l_line: principal L-function has a pole at s = 1")
    out = np.empty_like(s_arr)
    reg = ~at_one
    if reg.any():
        out[reg] = _l_sum(s_arr[reg], chi)
    if at_one.any():
        # removable in the sum: mean over a small circle around s = 1
        theta = 2 * np.pi * (np.arange(16) + 0.5) / 16
        ring = 1 + 1e-2 * np.exp(1j * theta)
        out[at_one] = _l_sum(ring, chi).mean()
    return complex(out[0]) if scalar else out


def _l_sum(s, chi):
    q = chi.q
    acc = np.zeros_like(s)
    for a in range(1, q + 1):
        c = chi.values[a % q]
        if c != 0:
            acc += c * np.asarray(hurwitz_zeta(s, a / q), dtype=complex)
    return acc * np.exp(-s * math.log(q))


def parse_character_spec(spec):
    """Parse ``"q:i1,i2,..."`` into a list of characters from the canonical table."""
    try:
        qs, idx = spec.split(":")
        q = int(qs)
        indices = [int(x) for x in idx.split(",") if x.strip()]
    except ValueError as exc:
        raise DomainError(f"bad character spec {spec!r}; expected 'q:i1,i2,...'") from exc
    if not indices:
        raise DomainError("character spec lists no indices")
    return [character(q, i) for i in indices]
