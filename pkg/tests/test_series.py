import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mzeta import (BudgetExceeded, DomainError, OutOfRegion, Shape, TruncationConfig, character,
                   l_line, l_mt_hat_direct, principal_character, region_contains, riemann_zeta,
                   zeta_av_direct, zeta_ez_direct, zeta_mt_direct, zeta_mt_hat_direct)

Z = {k: float(mpmath.zeta(k)) for k in range(2, 9)}
TORNHEIM_222 = math.pi ** 6 / 2835


def brute_mt2(a, b, c, M=5000, chi=None):
    """sum_{m,n<=M} chi(m) chi(n) m^-a n^-b (m+n)^-c, summed in row blocks."""
    m = np.arange(1, M + 1, dtype=float)
    w = np.ones(M) if chi is None else chi(np.arange(1, M + 1)).real
    wa, wb = w * m ** -a, w * m ** -b
    total = 0.0
    for lo in range(0, M, 500):
        mm = m[lo:lo + 500, None]
        total += (wa[lo:lo + 500, None] * wb[None, :] * (mm + m[None, :]) ** -c).sum()
    return total


def tornheim_integral(a, b, c):
    """T(a,b;c) = 1/Gamma(c) int_0^oo t^(c-1) Li_a(e^-t) Li_b(e^-t) dt (integer c >= 1)."""
    mpmath.mp.dps = 20
    f = lambda t: t ** (c - 1) * mpmath.polylog(a, mpmath.e ** -t) * mpmath.polylog(b, mpmath.e ** -t)
    return float(mpmath.quad(f, [0, 1, 10, mpmath.inf]) / mpmath.gamma(c))


# ---------------------------------------------------------------- regions

def test_region_examples():
    assert region_contains(Shape(2, 2), [2, 2, 2], 0)
    assert not region_contains(Shape(1, 2), [2, 0.5, 1], 0)
    assert region_contains(Shape(1, 2), [2, 1.5, 1.6], 0)
    assert not region_contains(Shape(2, 2), [2, 2, 0.04], 0.05)


def test_shape_invariants():
    with pytest.raises(DomainError):
        Shape(0, 2)
    with pytest.raises(DomainError):
        Shape(3, 2)
    with pytest.raises(DomainError):
        Shape(1, 5)


def test_out_of_region_errors():
    with pytest.raises(OutOfRegion):
        zeta_mt_hat_direct(Shape(1, 2), [2, 0.5, 1])
    with pytest.raises(OutOfRegion):
        zeta_ez_direct([2, 1])
    with pytest.raises(OutOfRegion):
        zeta_mt_direct([2, 2, 0])
    with pytest.raises(OutOfRegion):
        zeta_av_direct([1, 2, 2])
    with pytest.raises(DomainError):
        zeta_mt_hat_direct(Shape(1, 2), [2, 2])


def test_budget_exceeded():
    with pytest.raises(BudgetExceeded):
        zeta_mt_hat_direct(Shape(2, 2), [2, 2, 2], TruncationConfig(work_cap=100))
    with pytest.raises(BudgetExceeded):
        zeta_av_direct([2, 2, 2], TruncationConfig(work_cap=100))


# ---------------------------------------------------------------- values

def test_hat_examples():
    assert abs(zeta_mt_hat_direct(Shape(1, 1), [2, 2]).value - Z[4]) < 1e-13
    ez42 = Z[2] * Z[4] - Z[6] - (Z[3] ** 2 - 4 * math.pi ** 6 / 2835)   # sum_{m<n} m^-4 n^-2
    assert abs(zeta_mt_hat_direct(Shape(1, 2), [2, 2, 2]).value - ez42) < 1e-12
    assert abs(zeta_ez_direct([4, 2]).value - ez42) < 1e-12
    res = zeta_mt_hat_direct(Shape(2, 2), [2, 2, 2])
    assert abs(res.value - TORNHEIM_222) < 1e-10
    assert res.method == "direct" and res.err_est >= 0 and math.isfinite(res.err_est)


def test_mt_22_against_brute_force():
    M = 5000
    tail = 2 * Z[2] / (3 * M ** 3)              # omitted terms with max(m, n) > M
    assert abs(brute_mt2(2, 2, 2, M) - TORNHEIM_222) < tail + 1e-12
    assert abs(zeta_mt_direct([2, 2, 2]).value - brute_mt2(2, 2, 2, M)) < tail + 1e-10


def test_mt_221_against_integral_oracle():
    v = zeta_mt_direct([2, 2, 1]).value
    assert abs(v - tornheim_integral(2, 2, 1)) < 1e-8
    assert abs(zeta_mt_direct([3, 2, 2]).value - tornheim_integral(3, 2, 2)) < 1e-8


def test_ez_examples():
    assert abs(zeta_ez_direct([2]).value - Z[2]) < 1e-14
    assert abs(zeta_ez_direct([1, 2]).value - Z[3]) < 1e-13
    assert abs(zeta_ez_direct([2, 2]).value - math.pi ** 4 / 120) < 1e-13
    # depth three: sum_{a<b<c} (abc)^-2 = pi^6 / 5040
    assert abs(zeta_ez_direct([2, 2, 2]).value - math.pi ** 6 / 5040) < 1e-10


def test_mt_examples():
    assert abs(zeta_mt_direct([2, 2]).value - Z[4]) < 1e-13
    assert zeta_mt_direct([2, 2, 2]).value == zeta_mt_hat_direct(Shape(2, 2), [2, 2, 2]).value


def test_av_examples_and_decomposition():
    assert abs(zeta_av_direct([2, 2]).value - Z[4]) < 1e-10
    av = zeta_av_direct([2, 2, 2])
    # full MT sum = both orderings + the diagonal m = n, which gives zeta(6)/4
    assert abs(2 * av.value + Z[6] / 4 - TORNHEIM_222) <= 2 * av.err_est + 1e-12
    assert av.err_est < 1e-8
    # brute-force constrained double sum
    M = 3000
    m = np.arange(1, M + 1, dtype=float)
    brute = sum((m[k] ** -2 * m[k + 1:] ** -2 * (m[k] + m[k + 1:]) ** -2).sum() for k in range(M))
    assert abs(av.value - brute) < 1e-8


def test_l_examples():
    chi4 = character(4, 1)
    assert abs(l_mt_hat_direct(Shape(1, 1), [2, 2], [chi4]).value - l_line(4, chi4)) < 1e-13
    triv = principal_character(1)
    a = l_mt_hat_direct(Shape(2, 2), [2, 2, 2], [triv, triv]).value
    assert abs(a - zeta_mt_hat_direct(Shape(2, 2), [2, 2, 2]).value) < 1e-12
    chi3 = character(3, 1)
    M = 5000
    got = l_mt_hat_direct(Shape(2, 2), [2, 2, 2], [chi3, chi3]).value
    assert abs(got - brute_mt2(2, 2, 2, M, chi3)) < 2 * Z[2] / (3 * M ** 3) + 1e-8


def test_l_requires_uniform_modulus_and_count():
    with pytest.raises(DomainError):
        l_mt_hat_direct(Shape(2, 2), [2, 2, 2], [character(3, 1), character(4, 1)])
    with pytest.raises(DomainError):
        l_mt_hat_direct(Shape(2, 2), [2, 2, 2], [character(3, 1)])


# ---------------------------------------------------------------- properties

def _random_region_point(rng, shape):
    from mzeta.suites import in_region_points
    return in_region_points(shape, 1, rng)[0]


@pytest.mark.parametrize("r", [2, 3, 4])
def test_ez_identity(r):
    rng = np.random.default_rng(r)
    for _ in range(3):
        s = _random_region_point(rng, Shape(1, r))
        hat = zeta_mt_hat_direct(Shape(1, r), s)
        ez = zeta_ez_direct([s[0] + s[1]] + s[2:])
        assert abs(hat.value - ez.value) <= hat.err_est + ez.err_est + 1e-14


def test_permutation_symmetry_of_independent_slots():
    s = [2.3 + 0.4j, 1.7 - 0.2j, 2.9 + 0.1j, 1.6 + 0.3j]
    a = zeta_mt_hat_direct(Shape(3, 3), s).value
    b = zeta_mt_hat_direct(Shape(3, 3), [s[2], s[0], s[1], s[3]]).value
    assert abs(a - b) < 1e-10
    t = [2.3 + 0.4j, 1.7 - 0.2j, 1.4 + 0.1j, 1.6 + 0.3j]
    c = zeta_mt_hat_direct(Shape(2, 3), t).value
    d = zeta_mt_hat_direct(Shape(2, 3), [t[1], t[0], t[2], t[3]]).value
    assert abs(c - d) < 1e-10


@pytest.mark.parametrize("shape, s, chis", [
    (Shape(2, 2), [2.2, 1.8, 1.3 + 0.5j], None),
    (Shape(2, 3), [2.0, 1.9, 1.5, 1.3], None),
    (Shape(1, 2), [2.0, 1.5, 1.4], (3, [1, 0])),
])
def test_monotone_truncation(shape, s, chis):
    cs = None if chis is None else [character(chis[0], i) for i in chis[1]]
    lo = TruncationConfig(M=500, target_tol=1.0)
    hi = TruncationConfig(M=1000, target_tol=1.0)
    a = l_mt_hat_direct(shape, s, cs, lo) if cs else zeta_mt_hat_direct(shape, s, lo)
    b = l_mt_hat_direct(shape, s, cs, hi) if cs else zeta_mt_hat_direct(shape, s, hi)
    assert abs(a.value - b.value) <= a.err_est
    assert b.err_est <= a.err_est


def test_character_degeneracy():
    triv = principal_character(1)
    s = [2.1 + 0.3j, 1.4, 1.2 - 0.1j, 1.5]
    for j in (1, 2, 3):
        a = l_mt_hat_direct(Shape(j, 3), s, [triv] * 3).value
        b = zeta_mt_hat_direct(Shape(j, 3), s).value
        assert abs(a - b) < 1e-12


def test_err_est_meets_target_or_warns():
    res = zeta_mt_hat_direct(Shape(2, 2), [1.1, 1.1, 0.1], TruncationConfig(max_M=4000))
    assert res.err_est <= 1e-10 or res.warnings
    res = zeta_mt_hat_direct(Shape(1, 2), [2, 2, 2])
    assert res.err_est <= 1e-10 and not res.warnings


@settings(max_examples=25, deadline=None)
@given(st.floats(1.2, 4), st.floats(-3, 3), st.floats(0.2, 3), st.floats(-3, 3))
def test_depth_one_collapse(x, y, u, v):
    # the (1,1) series is a single zeta sum
    s = [complex(x, y), complex(u, v)]
    if x + u <= 1.2:
        return
    got = zeta_mt_hat_direct(Shape(1, 1), s).value
    assert abs(got - riemann_zeta(s[0] + s[1])) < 1e-11 * max(1, abs(got))
