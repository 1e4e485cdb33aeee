import random

import pytest

from ellgauss.cyclic import (
    Character,
    CyclicAlgebra,
    apply_nu,
    connecting_poly,
    fixed_subalgebra_dimension,
    lagrange_resolvent,
    partial_trace,
    random_cyclic_algebra,
    subalgebra_minpolys,
    verify_cyclic,
)
from ellgauss.errors import NotSquarefree
from ellgauss.fields import ExtensionRing, PrimeField
from ellgauss.polynomials import Poly, cyclotomic_minpoly, factor_degree_pattern, is_squarefree

F3, F5, F31 = PrimeField(3), PrimeField(5), PrimeField(31)
SHAPES = [(1, 6), (2, 3), (3, 2), (6, 1), (2, 2), (1, 5), (4, 1), (1, 4)]


@pytest.fixture(scope="module", params=SHAPES, ids=lambda s: f"m{s[0]}k{s[1]}")
def algebra(request):
    m, k = request.param
    return random_cyclic_algebra(F31, m, k, random.Random(m * 10 + k))


def naive_partial_trace(alg, a, q):
    acc = alg.ring.zero
    for j in range(1, alg.n // q + 1):
        acc = acc + apply_nu(alg, a, j * q)
    return acc


def test_verify_cyclic_examples():
    X = Poly.x(F3)
    assert verify_cyclic(Poly(F3, [1, 0, 1]), X ** 3)
    assert not verify_cyclic(Poly(F5, [4, 0, 1]), Poly.x(F5))


def test_frobenius_cyclicity_of_irreducible():
    F7 = PrimeField(7)
    f = Poly(F7, [3, 0, 0, 1])  # irreducible cubic
    assert verify_cyclic(f, Poly.x(F7) ** 7 % f)


def test_cyclicity_characterizations_agree():
    # verify_cyclic(f, X^q) <=> squarefree f with all factors of one degree d and d = deg f
    # (for C = X^q the cycle has length d, so only irreducible f qualify)
    rng = random.Random(2)
    for _ in range(40):
        f = Poly(F5, [rng.randrange(5) for _ in range(4)] + [1])
        if not is_squarefree(f):
            with pytest.raises(NotSquarefree):
                factor_degree_pattern(f)
            continue
        pattern = factor_degree_pattern(f)
        C = Poly.x(F5) ** 5 % f
        assert verify_cyclic(f, C) == (pattern == [(4, 1)])


def test_random_algebras_have_equal_degree_factors(algebra):
    pattern = factor_degree_pattern(algebra.f)
    assert len(pattern) == 1
    assert verify_cyclic(algebra.f, algebra.C)


def test_apply_nu_identity_and_period(algebra):
    rng = random.Random(4)
    a = algebra.ring.random_element(rng)
    assert apply_nu(algebra, a, 0) == a
    assert apply_nu(algebra, a, algebra.n) == a
    assert apply_nu(algebra, apply_nu(algebra, a, 2), 3) == apply_nu(algebra, a, 5)


def test_fixed_elements_are_constants(algebra):
    rng = random.Random(5)
    tr = partial_trace(algebra, algebra.ring.random_element(rng), 1)
    assert apply_nu(algebra, tr, 1) == tr
    assert tr.is_constant()


def test_partial_trace_matches_naive(algebra):
    rng = random.Random(6)
    a = algebra.ring.random_element(rng)
    for q in range(1, algebra.n + 1):
        if algebra.n % q == 0:
            assert partial_trace(algebra, a, q) == naive_partial_trace(algebra, a, q)
    assert partial_trace(algebra, a, algebra.n) == a


def test_fixed_subalgebra_dimension(algebra):
    for q in range(1, algebra.n + 1):
        if algebra.n % q == 0:
            assert fixed_subalgebra_dimension(algebra, q) == q


def _rho(alg, q):
    S = ExtensionRing(alg.base, cyclotomic_minpoly(q, alg.base), is_field=True)
    return S, S.gen


def test_resolvent_laws(algebra):
    rng = random.Random(8)
    n = algebra.n
    a = algebra.ring.random_element(rng)
    for q in range(2, n + 1):
        if n % q:
            continue
        S, rho = _rho(algebra, q)
        chi = Character(q, rho)
        res = lagrange_resolvent(algebra, chi, a)
        ext, _ = algebra.extend(S)
        # twist: nu(res) = chi(nu)^-1 res
        assert apply_nu(ext, res, 1) == res * rho.inverse()
        # q-th power descends to the scalars
        assert (res ** q).is_constant()


def test_trivial_character_gives_trace(algebra):
    S = ExtensionRing(F31, [0, 1])
    chi = Character(1, S.one)
    a = algebra.ring.random_element(random.Random(9))
    res = lagrange_resolvent(algebra, chi, a)
    assert res.is_constant()


def test_subalgebra_minpolys_and_connecting_poly():
    alg = random_cyclic_algebra(F31, 1, 6, random.Random(11))
    M1, M2 = subalgebra_minpolys(alg, 2, 3)
    assert M1.degree == M2.degree == 3
    t6 = partial_trace(alg, alg.theta, 6)
    t3 = partial_trace(alg, alg.theta, 3)
    assert M1(t6).is_zero()
    assert M2(t3).is_zero()
    W, w = connecting_poly(alg, 2, 3)
    assert W(t3) == t6
    assert W.degree < 3
    for c in W.coeffs:
        assert apply_nu(alg, c, 2) == c


def test_connecting_poly_q1_one():
    alg = random_cyclic_algebra(F31, 2, 3, random.Random(12))
    W, _ = connecting_poly(alg, 1, alg.n)
    assert W(alg.theta) == alg.theta


def test_rejects_non_cyclic_pair():
    with pytest.raises(ValueError):
        CyclicAlgebra(Poly(F5, [4, 0, 1]), Poly.x(F5))


def test_ray_algebra_is_cyclic(atkin_case):
    _, ray = atkin_case
    B = ray.B
    assert verify_cyclic(ray.E_P, ray.G_c)
    th = B.theta
    for k in range(1, B.n):
        assert apply_nu(B, th, k) != th
    assert apply_nu(B, th, B.n) == th
