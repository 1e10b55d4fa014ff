import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mzeta import (CapExceeded, DomainError, PoleError, character, characters_mod, gen_bernoulli,
                   l_at_neg_int, l_line, parse_character_spec, principal_character, riemann_zeta,
                   totient)
from mzeta.dirichlet import factorize


def brute_totient(q):
    return sum(1 for a in range(1, q + 1) if math.gcd(a, q) == 1)


@pytest.mark.parametrize("q, phi", [(1, 1), (12, 4), (7, 6)])
def test_totient_examples(q, phi):
    assert totient(q) == phi


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3000))
def test_totient_and_factorize(q):
    assert totient(q) == brute_totient(q)
    f = factorize(q)
    assert math.prod(p ** e for p, e in (f.items() if isinstance(f, dict) else f)) == q


def test_characters_examples():
    c3 = characters_mod(3)
    assert len(c3) == 2 and c3[0].principal
    assert abs(c3[1].values[2] + 1) < 1e-12
    c4 = characters_mod(4)
    assert len(c4) == 2 and abs(c4[1].values[3] + 1) < 1e-12
    c5 = characters_mod(5)
    at2 = sorted(np.round(np.angle([c.values[2] for c in c5]) / (np.pi / 2)) % 4)
    assert at2 == [0, 1, 2, 3]


@pytest.mark.parametrize("q", [2, 3, 8, 9, 12, 15, 16, 24, 35, 63, 100, 105])
def test_character_group_axioms(q):
    table = characters_mod(q)
    assert len(table) == totient(q)
    units = [a for a in range(q) if math.gcd(a, q) == 1]
    vals = np.array([c.values for c in table])
    # pairwise distinct
    for i in range(len(table)):
        for k in range(i + 1, len(table)):
            assert np.max(np.abs(vals[i] - vals[k])) > 1e-6
    for idx, c in enumerate(table):
        assert c.index == idx
        assert abs(c.values[1] - 1) < 1e-12
        for a in range(q):
            assert (abs(c.values[a]) < 1e-15) == (math.gcd(a, q) > 1)
        for a in units:
            assert abs(abs(c.values[a]) - 1) < 1e-12
            for b in units[:8]:
                assert abs(c.values[a * b % q] - c.values[a] * c.values[b]) < 1e-12
        s = c.values.sum()
        assert abs(s - (totient(q) if c.principal else 0)) < 1e-10
        assert c.principal == all(abs(c.values[a] - 1) < 1e-12 for a in units)
    assert table[0].principal and not any(c.principal for c in table[1:])
    # closure under pointwise product
    for a in table[:4]:
        for b in table[:4]:
            prod = a.values * b.values
            assert min(np.max(np.abs(prod - v)) for v in vals) < 1e-10


def test_characters_cap_and_domain():
    with pytest.raises(CapExceeded):
        characters_mod(1001)
    with pytest.raises(CapExceeded):
        characters_mod(10 ** 6)
    with pytest.raises(DomainError):
        characters_mod(0)
    # modulus 1 is kept for the all-ones character used in degeneracy checks
    (triv,) = characters_mod(1)
    assert triv.principal and triv.values[0] == 1


def test_canonical_order_is_deterministic():
    a = characters_mod(21)
    b = characters_mod(21)
    assert all(np.array_equal(x.values, y.values) for x, y in zip(a, b))
    assert [c.exponents for c in a] == sorted(c.exponents for c in a)


def test_gen_bernoulli_examples():
    chi4 = character(4, 1)
    assert abs(gen_bernoulli(1, chi4) + 0.5) < 1e-14
    assert abs(gen_bernoulli(0, chi4)) < 1e-14
    triv = principal_character(1)
    assert abs(gen_bernoulli(2, triv) - 1 / 6) < 1e-14


def test_gen_bernoulli_matches_finite_sum_exactly_for_real_characters():
    for q in (3, 4, 5, 8, 12):
        for chi in characters_mod(q):
            if np.max(np.abs(chi.values.imag)) > 0:
                continue
            for n in range(0, 8):
                exact = Fraction(q) ** (n - 1) * sum(
                    int(round(chi.values[a % q].real)) * _bpoly(n, Fraction(a, q)) for a in range(1, q + 1))
                assert abs(gen_bernoulli(n, chi) - float(exact)) <= 1e-12 * max(1, abs(float(exact)))


def _bpoly(n, x):
    from mzeta import bernoulli_poly
    return bernoulli_poly(n, x)


def test_l_at_neg_int_examples():
    assert abs(l_at_neg_int(0, character(4, 1)) - 0.5) < 1e-14
    assert abs(l_at_neg_int(2, principal_character(1))) < 1e-14
    assert abs(l_at_neg_int(1, principal_character(2)) - 1 / 12) < 1e-14


def test_l_line_examples():
    s = 2 + 3j
    assert abs(l_line(s, principal_character(1)) - riemann_zeta(s)) < 1e-13
    assert abs(l_line(2, principal_character(2)) - math.pi ** 2 / 6 * 0.75) < 1e-12
    chi = character(4, 1)
    assert abs(l_line(-1, chi) - l_at_neg_int(1, chi)) < 1e-12
    with pytest.raises(PoleError):
        l_line(1, principal_character(5))
    assert abs(l_line(1, chi) - math.pi / 4) < 1e-12     # Leibniz


def test_l_line_matches_mpmath_dirichlet():
    for q in (3, 5, 7):
        for chi in characters_mod(q):
            for s in (2.5 + 1j, 0.5 + 14j, -1.5 + 0.3j):
                ref = complex(mpmath.dirichlet(s, [complex(v) for v in chi.values]))
                assert abs(l_line(s, chi) - ref) <= 1e-11 * max(1, abs(ref))


def test_l_at_neg_int_agrees_with_line_for_all_small_moduli():
    worst = 0.0
    for q in range(2, 13):
        for chi in characters_mod(q):
            for n in range(4):
                worst = max(worst, abs(l_line(-n, chi) - l_at_neg_int(n, chi)))
    assert worst < 1e-8


def test_principal_residue_extrapolates_to_phi_over_q():
    for q in (4, 6, 7, 12):
        chi = principal_character(q)
        ts = [1e-2, 1e-3, 1e-4]
        g = [t * l_line(1 + t, chi) for t in ts]
        # quadratic through three points evaluated at t = 0
        from mzeta.suites import extrapolate_to_zero
        assert abs(extrapolate_to_zero(ts, g) - totient(q) / q) < 1e-6


def test_parse_character_spec():
    chis = parse_character_spec("4:1,0")
    assert [c.index for c in chis] == [1, 0] and chis[1].principal
    for bad in ("4", "x:1", "4:", "4:9"):
        with pytest.raises((DomainError, IndexError)):
            parse_character_spec(bad)
