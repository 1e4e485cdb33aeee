import random

import pytest
from hypothesis import given, settings, strategies as st

from ellgauss.errors import NotInvertible
from ellgauss.fields import (
    ExtensionRing,
    PrimeField,
    frobenius_apply,
    frobenius_precompute,
    invert,
    power,
)
from ellgauss.polynomials import Poly


F3, F5, F7 = PrimeField(3), PrimeField(5), PrimeField(7)
F9 = ExtensionRing(F3, [1, 0, 1])  # x^2 + 1 over F_3


def test_invert_prime_field():
    assert invert(2, F5) == 3
    with pytest.raises(NotInvertible):
        invert(0, F7)


def test_invert_in_f9():
    x = F9.gen
    inv = invert(x)
    assert inv.flat() == (0, 2)
    assert x * inv == F9.one


def test_power_examples():
    assert power(2, 4, F5) == 1
    assert power(F9.gen, 0) == F9.one
    assert power(F9.gen, 9) == F9.gen


def test_frobenius_table_prime_field_is_identity():
    table = frobenius_precompute(F5)
    assert table.power is None
    for a in range(5):
        assert frobenius_apply(table, a) == a


def test_frobenius_table_f9():
    table = frobenius_precompute(F9)
    assert table.power.flat() == (0, 2)  # x^3 = -x mod x^2 + 1
    assert frobenius_apply(table, F9.gen) == table.power
    for a in range(3):
        for b in range(3):
            el = F9([a, b])
            assert frobenius_apply(table, frobenius_apply(table, el)) == el
            assert frobenius_apply(table, el) == el ** 3


def test_constants_fixed_by_frobenius():
    table = frobenius_precompute(F9)
    assert frobenius_apply(table, F9(2)) == F9(2)


def test_non_field_inverse_carries_factor():
    # x^2 - 1 = (x - 1)(x + 1) over F_5
    R = ExtensionRing(F5, [4, 0, 1])
    with pytest.raises(NotInvertible) as info:
        (R.gen - 1).inverse()
    factor = info.value.factor
    assert factor is not None and factor.degree == 1


def test_is_field_flag():
    assert F9.is_field
    assert not ExtensionRing(F5, [4, 0, 1]).is_field


def test_tower_arithmetic_matches_flat_field():
    # F_{7^2} as a tower over F_7 versus F_{7^4} = F_{49}[y]/(y^2 - x)
    K = ExtensionRing(F7, [4, 0, 1])  # x^2 + 4 = x^2 - 3, 3 is a non-residue mod 7
    L = ExtensionRing(K, [-K.gen, K.zero, K.one])
    assert L.order == 7 ** 4
    rng = random.Random(5)
    for _ in range(20):
        a = L.random_element(rng)
        if a.is_zero():
            continue
        assert a * a.inverse() == L.one
        assert a ** L.order == a


def elements(ring):
    return st.lists(st.integers(0, ring.p - 1), min_size=ring.degree, max_size=ring.degree).map(ring)


K73 = ExtensionRing(F7, [3, 0, 0, 1])  # 3 is not a cube mod 7


@settings(max_examples=60, deadline=None)
@given(elements(K73), elements(K73))
def test_frobenius_is_ring_homomorphism(a, b):
    table = frobenius_precompute(K73)
    fa, fb = frobenius_apply(table, a), frobenius_apply(table, b)
    assert frobenius_apply(table, a + b) == fa + fb
    assert frobenius_apply(table, a * b) == fa * fb


@settings(max_examples=60, deadline=None)
@given(elements(K73))
def test_frobenius_order_and_field_identity(a):
    table = frobenius_precompute(K73)
    img = a
    for _ in range(K73.degree):
        img = frobenius_apply(table, img)
    assert img == a
    assert power(a, K73.order) == a


@settings(max_examples=60, deadline=None)
@given(elements(K73))
def test_inverse_property(a):
    if a.is_zero():
        with pytest.raises(NotInvertible):
            a.inverse()
    else:
        assert a * invert(a) == K73.one


def test_value_based_equality_and_reduction():
    a = F9([4, 5])  # reduces to [1, 2]
    assert a == F9([1, 2])
    assert a.flat() == (1, 2)
    assert hash(a) == hash(F9([1, 2]))


def test_coercion_between_levels():
    K = ExtensionRing(F7, [4, 0, 1])
    L = ExtensionRing(K, [K.gen, K.zero, K.one])
    assert (L.gen + 3) - L.gen == L(3)
    assert L(K.gen) * 2 == L(K.gen * 2)


def test_monic_modulus_required():
    with pytest.raises(ValueError):
        ExtensionRing(F5, Poly(F5, [1, 0, 2]))
