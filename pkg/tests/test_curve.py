import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from ellgauss.curve import (
    INFINITY,
    Curve,
    CurvePoint,
    DivPolyCache,
    brute_count,
    division_poly,
    hasse_bound,
    mult_map_values,
    mult_maps,
    point_add,
    point_neg,
    scalar_mul,
    torsion_point,
)
from ellgauss.errors import DenominatorNotInvertible, OracleBudgetExceeded, SingularCurve
from ellgauss.fields import ExtensionRing
from ellgauss.polynomials import Poly, factor_degree_pattern

E511 = Curve(5, 1, 1)


def all_points(curve):
    p = curve.p
    pts = [INFINITY]
    for x in range(p):
        for y in range(p):
            if (y * y - (x ** 3 + curve.a * x + curve.b)) % p == 0:
                pts.append(CurvePoint(x, y))
    return pts


def naive_mul(curve, k, P):
    acc = INFINITY
    for _ in range(k):
        acc = point_add(curve, acc, P)
    return acc


def test_singular_curves_rejected():
    with pytest.raises(SingularCurve):
        Curve(5, 0, 0)
    # 4*8 + 27*4 = 140 = 0 mod 7
    with pytest.raises(SingularCurve):
        Curve(7, 2, 2)


def test_point_add_examples():
    P = CurvePoint(0, 1)
    assert point_add(E511, P, INFINITY) == P
    assert point_add(E511, P, P) == CurvePoint(4, 2)
    assert point_add(E511, P, CurvePoint(0, 4)).is_infinity


def test_scalar_mul_examples():
    P = CurvePoint(0, 1)
    assert scalar_mul(E511, 0, P).is_infinity
    assert scalar_mul(E511, 2, P) == CurvePoint(4, 2)
    assert scalar_mul(E511, 9, P).is_infinity


def test_group_laws_exhaustive_small():
    E = Curve(11, 3, 7)
    pts = all_points(E)
    rng = random.Random(0)
    for _ in range(200):
        P, Q, R = (rng.choice(pts) for _ in range(3))
        assert point_add(E, P, Q) == point_add(E, Q, P)
        assert point_add(E, point_add(E, P, Q), R) == point_add(E, P, point_add(E, Q, R))
        assert point_add(E, P, point_neg(E, P)).is_infinity


def test_group_law_over_extension_field():
    E = Curve(7, 1, 3)
    P, _ = torsion_point(E, 5)
    Q = scalar_mul(E, 2, P)
    R = scalar_mul(E, 3, P)
    assert point_add(E, Q, R).is_infinity
    assert point_add(E, point_add(E, P, Q), R) == point_add(E, P, point_add(E, Q, R))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 40), st.integers(0, 40), st.integers(0, 10**6))
def test_scalar_mul_additive(m, n, seed):
    E = Curve(101, 2, 3)
    P = E.random_point(random.Random(seed))
    assert scalar_mul(E, m + n, P) == point_add(E, scalar_mul(E, m, P), scalar_mul(E, n, P))
    if m <= 12:
        assert scalar_mul(E, m, P) == naive_mul(E, m, P)


def test_division_poly_base_cases():
    cache = DivPolyCache(E511)
    assert division_poly(cache, 1) == Poly(E511.field, [1])
    assert division_poly(cache, 2) == Poly(E511.field, [2])
    assert division_poly(cache, 3) == Poly(E511.field, [4, 2, 1, 0, 3])


def test_psi3_general_formula():
    E = Curve(101, 17, 29)
    a, b = E.a, E.b
    assert division_poly(DivPolyCache(E), 3) == Poly(E.field, [-a * a, 12 * b, 6 * a, 0, 3])


def test_division_poly_degrees():
    cache = DivPolyCache(Curve(7, 1, 1))
    assert division_poly(cache, 5).degree == 12
    assert division_poly(cache, 7).degree < 24  # p = ell: leading coefficient 7 vanishes
    cache5 = DivPolyCache(E511)
    assert division_poly(cache5, 5).degree == 10  # leading 5 vanishes, (25 - 5)/2 remains
    cache = DivPolyCache(Curve(101, 1, 1))
    for ell in (3, 5, 7, 11, 13):
        assert division_poly(cache, ell).degree == (ell * ell - 1) // 2


def test_torsion_characterization():
    E = Curve(97, 5, 11)
    cache = DivPolyCache(E)
    pts = all_points(E)[1:]
    for k in (3, 5, 7):
        psi = division_poly(cache, k)
        for P in pts:
            assert (psi(P.x) == 0) == scalar_mul(E, k, P).is_infinity


def test_mult_maps_match_scalar_mul():
    E = Curve(101, 2, 3)
    rng = random.Random(7)
    for _ in range(20):
        P = E.random_point(rng)
        for k in range(1, 7):
            kP = scalar_mul(E, k, P)
            if kP.is_infinity:
                continue
            Rx = ExtensionRing(E.field, [-P.x % E.p, 1])  # evaluate at x = P.x
            G, H = mult_map_values(E, Rx.gen, k)
            assert int(G.constant()) == kP.x
            assert int(H.constant()) * P.y % E.p == kP.y


def test_mult_maps_k1_and_torsion_denominator():
    E = Curve(101, 2, 3)
    cache = DivPolyCache(E)
    psi5 = division_poly(cache, 5)
    G, H = mult_maps(cache, 1, psi5)
    assert G == Poly(E.field, [0, 1]) and H == Poly(E.field, [1])
    with pytest.raises(DenominatorNotInvertible) as info:
        mult_maps(cache, 5, psi5)
    assert info.value.factor is not None


def test_torsion_point_example():
    P, h = torsion_point(E511, 3)
    assert scalar_mul(E511, 3, P).is_infinity
    assert not P.is_infinity
    assert scalar_mul(E511, 1, P) == P
    assert h.degree == min(d for d, _ in factor_degree_pattern(division_poly(DivPolyCache(E511), 3)))


def test_torsion_point_needs_quadratic_y():
    E = Curve(19, 1, 1)
    for ell in (5, 7):
        P, _ = torsion_point(E, ell)
        assert scalar_mul(E, ell, P).is_infinity


def test_full_torsion_count():
    # the roots of psi_ell account for (ell^2 - 1)/2 x-coordinates, i.e. ell^2 - 1 points
    for ell in (3, 5):
        psi = division_poly(DivPolyCache(Curve(103, 1, 6)), ell)
        total = sum(d * c for d, c in factor_degree_pattern(psi))
        assert 2 * total == ell * ell - 1


def test_brute_count_examples():
    assert brute_count(E511) == 9
    assert brute_count(Curve(7, 3, 2)) == len(all_points(Curve(7, 3, 2)))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([5, 7, 11, 13, 17, 101, 997]), st.integers(0, 10**6), st.integers(0, 10**6))
def test_brute_count_matches_enumeration_and_hasse(p, a, b):
    try:
        E = Curve(p, a, b)
    except SingularCurve:
        return
    n = brute_count(E)
    assert abs(n - (p + 1)) <= 2 * math.sqrt(p)
    assert abs(n - (p + 1)) <= hasse_bound(p)
    if p <= 101:
        assert n == len(all_points(E))


def test_brute_count_budget():
    E = Curve(10**7 + 19, 1, 1)
    with pytest.raises(OracleBudgetExceeded):
        brute_count(E)
