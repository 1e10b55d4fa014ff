import numpy as np
import pytest

from mzeta import (DomainError, PrincipalPattern, Shape, cancellation_check, character,
                   distance_to_atlas, hyperplanes_l, hyperplanes_mt, hyperplanes_zeta,
                   on_singular_set, phi_factor, plane_from, principal_character,
                   singular_planes_at)

CHI4 = character(4, 1)


def keyset(planes):
    return {(p.subset, p.constant) for p in planes}


# ---------------------------------------------------------------- enumeration

def test_zeta_12_list():
    planes = keyset(hyperplanes_zeta(Shape(1, 2), 3))
    assert ((3,), 1) in planes
    # full-sum family with constants 1 - d, d in {-1, 0, 1, 3}
    assert {c for s, c in planes if s == (1, 2, 3)} == {2, 1, 0, -2}
    # these are exactly the singularities of the double zeta in (s_1+s_2, s_3)
    assert planes == {((3,), 1), ((1, 2, 3), 2), ((1, 2, 3), 1), ((1, 2, 3), 0), ((1, 2, 3), -2)}


def test_zeta_23_list():
    planes = keyset(hyperplanes_zeta(Shape(2, 3), 2))
    assert ((4,), 1) in planes
    for J in ((1, 3, 4), (2, 3, 4)):
        assert {c for s, c in planes if s == J} == {2, 1, 0, -1, -2}
    assert {c for s, c in planes if s == (1, 2, 3, 4)} == {2, 1, -1}


def test_zeta_13_list_has_suffix_and_mixed_families():
    planes = hyperplanes_zeta(Shape(1, 3), 2)
    fams = {p.family for p in planes}
    assert {"pole", "j.pair", "j.mixed"} <= fams
    assert ((4,), 1) in keyset(planes)


def test_bound_zero_only_constant_zero():
    for shape in (Shape(1, 2), Shape(2, 3), Shape(1, 3), Shape(1, 4)):
        planes = hyperplanes_zeta(shape, 0)
        assert planes and all(p.constant == 0 for p in planes)
    assert keyset(hyperplanes_zeta(Shape(1, 2), 0)) == {((1, 2, 3), 0)}


def test_negative_bound_rejected():
    with pytest.raises(DomainError):
        hyperplanes_zeta(Shape(1, 2), -1)


def test_deterministic_order():
    planes = hyperplanes_zeta(Shape(1, 3), 3)
    keys = [(len(p.subset), p.subset, p.constant) for p in planes]
    assert keys == sorted(keys)
    assert planes == hyperplanes_zeta(Shape(1, 3), 3)


def test_l_lists():
    assert hyperplanes_l(Shape(1, 2), PrincipalPattern((False, False)), 3) == []
    assert hyperplanes_l(Shape(1, 3), PrincipalPattern((False,) * 3), 3) == []
    both = keyset(hyperplanes_l(Shape(1, 2), PrincipalPattern((True, True)), 3))
    assert ((3,), 1) in both
    assert {c for s, c in both if s == (1, 2, 3)} >= {2, 1, 0, -1, -2, -3}
    only_last = hyperplanes_l(Shape(2, 3), PrincipalPattern((False, False, True)), 3)
    assert keyset(only_last) == {((4,), 1)}


@pytest.mark.parametrize("shape", [Shape(1, 2), Shape(2, 3)])
def test_specialization_all_principal_contains_zeta_atlas(shape):
    full = keyset(hyperplanes_l(shape, PrincipalPattern((True,) * shape.r), 4))
    assert keyset(hyperplanes_zeta(shape, 4)) <= full


def test_mt_lists():
    assert keyset(hyperplanes_mt(1, 3)) == {((1, 2), 1)}
    planes = keyset(hyperplanes_mt(2, 2))
    for S in ((1, 3), (2, 3)):
        assert {c for s, c in planes if s == S} == {1, 0, -1, -2}
    assert ((1, 2, 3), 2) in planes
    assert all(p.constant == 0 for p in hyperplanes_mt(3, 0))


@pytest.mark.parametrize("shape", [Shape(1, 2), Shape(2, 3), Shape(1, 3), Shape(1, 4), Shape(2, 4),
                                   Shape(3, 4), Shape(3, 3)])
def test_round_trip(shape):
    for p in hyperplanes_zeta(shape, 4):
        assert plane_from("zeta", shape, p.family, p.to_json()["params"]) == p


@pytest.mark.parametrize("flags", [(True, False, True), (False, True, True), (True, True, True)])
def test_round_trip_l(flags):
    pat = PrincipalPattern(flags)
    for shape in (Shape(1, 3), Shape(2, 3), Shape(3, 3)):
        for p in hyperplanes_l(shape, pat, 4):
            assert plane_from("L", shape, p.family, p.to_json()["params"], pat) == p


def test_plane_from_rejects_unknown():
    with pytest.raises(DomainError):
        plane_from("zeta", Shape(1, 2), "no-such-family", {})
    with pytest.raises(DomainError):
        plane_from("zeta", Shape(1, 2), "r-1.full", {"d": 2})   # even d is excluded


# ---------------------------------------------------------------- membership

def test_on_singular_set_examples():
    planes = hyperplanes_zeta(Shape(1, 2), 3)
    assert keyset(on_singular_set([2, 2, 1], planes)) >= {((3,), 1)}
    assert on_singular_set([0.123 + 0.4j, 0.77, -0.31 + 0.2j], planes) == []
    assert keyset(on_singular_set([2, -1, 1 + 1e-12], planes, 1e-9)) >= {((3,), 1)}
    with pytest.raises(DomainError):
        on_singular_set([2, 2, 1], planes, 0)


def test_predicate_covers_unbounded_constants():
    hits = singular_planes_at("zeta", Shape(1, 2), [1, 2, -43])      # sum = -40 = 1 - 41
    assert keyset(hits) == {((1, 2, 3), -40)}
    assert singular_planes_at("zeta", Shape(1, 2), [1, 2, -42]) == []  # 1 - 42: even d
    assert distance_to_atlas("zeta", Shape(1, 2), [1, 2, -43.1]) == pytest.approx(0.1, abs=1e-12)


# ---------------------------------------------------------------- Phi and cancellation

def test_phi_factor_examples():
    shape = Shape(1, 2)
    assert phi_factor(shape, 3, [0.123 + 0.4j, 0.77, -0.31 + 0.2j]) != 0
    assert phi_factor(shape, 3, [2, 2, 1]) == 0
    # degree = number of enumerated planes: scaling a generic point by lam scales
    # each form sum(s) - c ~ lam * sum(s) for large lam
    s = np.array([0.3 + 0.1j, 0.2, 0.4 - 0.3j])
    lam = 1e6
    ratio = phi_factor(shape, 3, lam * s) / phi_factor(shape, 3, s * lam / 10)
    assert abs(np.log10(abs(ratio)) - len(hyperplanes_zeta(shape, 3))) < 1e-4
    with pytest.raises(DomainError):
        phi_factor(Shape(2, 2), 2, [2, 2, 2])


def test_cancellation_simple_pole():
    plane = plane_from("zeta", Shape(1, 2), "pole", {})
    rep = cancellation_check("zeta", Shape(1, 2), plane, [2, 2, 1])
    assert rep.pole_order_est == 1.0 and abs(rep.pole_order_raw - 1) < 0.05
    assert rep.bounded_product


def test_cancellation_no_pole_for_nonprincipal_last_character():
    plane = plane_from("zeta", Shape(1, 2), "pole", {})
    rep = cancellation_check("L", Shape(1, 2), plane, [2, 2, 1], [CHI4, CHI4])
    assert rep.pole_order_est == 0.0


def test_cancellation_principal_last_character_has_pole():
    plane = plane_from("zeta", Shape(1, 2), "pole", {})
    rep = cancellation_check("L", Shape(1, 2), plane, [2, 2, 1], [CHI4, principal_character(4)])
    assert rep.pole_order_est == 1.0 and rep.bounded_product


def test_cancellation_rejects_off_plane_base():
    plane = plane_from("zeta", Shape(1, 2), "pole", {})
    with pytest.raises(DomainError):
        cancellation_check("zeta", Shape(1, 2), plane, [2, 2, 1.1])


def test_cancellation_small_residue_pole():
    # near s_1+..+s_4 = -1 the regular part dominates |f| until t ~ 1e-3; the
    # order must still come out as one simple pole
    shape = Shape(1, 3)
    plane = plane_from("zeta", shape, "j.mixed", {"k": (1,), "l'": 2})
    base = [0.2939394365759005 - 0.08217840429518031j, 1.0686421312431318 + 0.06645820008593133j,
            0.6657371441308624 - 0.022081193533147348j]
    base.append(-1 - sum(base))
    rep = cancellation_check("zeta", shape, plane, base)
    assert abs(rep.pole_order_raw - 1) < 0.1 and rep.bounded_product


def test_cancellation_full_sum_plane():
    shape = Shape(1, 2)
    plane = plane_from("zeta", shape, "r-1.full", {"d": 0})      # s_1+s_2+s_3 = 1
    base = [0.7 + 0.2j, 0.9, -0.6 - 0.2j]
    rep = cancellation_check("zeta", shape, plane, base)
    assert rep.pole_order_raw <= 1.2 and rep.bounded_product
    prods = [abs(phi_factor(shape, 2, [b + t * v for b, v in zip(base, rep.direction)]) * f)
             for t, f in rep.samples]
    # bounded as t -> 0: no growth over the last decade of approach
    assert prods[-1] <= 2 * prods[-2]
