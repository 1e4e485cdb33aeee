"""Short Weierstrass curves over F_p and their points over extension rings.

Points carry coordinates either as prime-field ints or as
:class:`~ellgauss.fields.RingElement` values; the group law uses whatever
ring the coordinates live in, so the same code adds points over F_p, over a
splitting field of a division polynomial, or over a non-field quotient ring
(where a failed inversion surfaces as :class:`NotInvertible`).

Division polynomials are kept univariate.  For even k the stored value is
psi_k / y, so ``f_2 = 2``; products of two even-index terms pick up a factor
``y^2 = x^3 + a x + b``.

>>> E = Curve(5, 1, 1)
>>> point_add(E, CurvePoint(0, 1), CurvePoint(0, 1))
CurvePoint(x=4, y=2)
>>> brute_count(E)
9
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

import numpy as np
from sympy import sqrt_mod

from .errors import (
    DenominatorNotInvertible,
    NotInvertible,
    OracleBudgetExceeded,
    SingularCurve,
)
from .fields import ExtensionRing, PrimeField, RingElement
from .polynomials import Poly, least_factor, qth_root

ORACLE_BUDGET = 10 ** 7


class Curve:
    """The curve y^2 = x^3 + a x + b over F_p, p > 3, non-singular."""

    def __init__(self, p, a, b):
        if p <= 3:
            raise ValueError("characteristic must exceed 3")
        self.field = PrimeField(p)
        self.p = self.field.p
        self.a = int(a) % self.p
        self.b = int(b) % self.p
        if (4 * self.a ** 3 + 27 * self.b ** 2) % self.p == 0:
            raise SingularCurve(f"y^2 = x^3 + {self.a}x + {self.b} is singular mod {self.p}")

    def __repr__(self):
        return f"Curve(p={self.p}, a={self.a}, b={self.b})"

    def __eq__(self, other):
        return isinstance(other, Curve) and (self.p, self.a, self.b) == (other.p, other.a, other.b)

    def __hash__(self):
        return hash((self.p, self.a, self.b))

    @property
    def j_invariant(self):
        p = self.p
        num = 1728 * 4 * self.a ** 3
        den = 4 * self.a ** 3 + 27 * self.b ** 2
        return num * pow(den, -1, p) % p

    @property
    def rhs_poly(self):
        """f(X) = X^3 + aX + b."""
        return Poly(self.field, [self.b, self.a, 0, 1])

    def rhs(self, x):
        if isinstance(x, int):
            return (x * x * x + self.a * x + self.b) % self.p
        return x * x * x + x * self.a + self.b

    def contains(self, P):
        if P.is_infinity:
            return True
        R = _ring_of(self, P.x)
        return R.eq(R.mul(P.y, P.y), self.rhs(P.x))

    def random_point(self, rng):
        """A uniformly chosen affine point over F_p."""
        p = self.p
        while True:
            x = rng.randrange(p)
            fx = self.rhs(x)
            if fx == 0:
                return CurvePoint(x, 0)
            roots = sqrt_mod(fx, p, all_roots=True)
            if roots:
                return CurvePoint(x, sorted(roots)[rng.randrange(2)])


@dataclass(frozen=True)
class CurvePoint:
    """Affine point, or the point at infinity when both coordinates are None."""

    x: Any = None
    y: Any = None

    @property
    def is_infinity(self):
        return self.x is None

    def __eq__(self, other):
        if not isinstance(other, CurvePoint):
            return NotImplemented
        if self.is_infinity or other.is_infinity:
            return self.is_infinity and other.is_infinity
        return self.x == other.x and self.y == other.y

    def __hash__(self):
        return hash((str(self.x), str(self.y)))


INFINITY = CurvePoint()


def _ring_of(curve, coord):
    return coord.parent if isinstance(coord, RingElement) else curve.field


def point_neg(curve, P):
    if P.is_infinity:
        return P
    R = _ring_of(curve, P.y)
    return CurvePoint(P.x, R.neg(P.y))


def point_add(curve, P, Q):
    """Chord-and-tangent addition."""
    if P.is_infinity:
        return Q
    if Q.is_infinity:
        return P
    R = _ring_of(curve, P.x)
    if not isinstance(P.x, RingElement) and isinstance(Q.x, RingElement):
        R = Q.x.parent
        P = CurvePoint(R(P.x), R(P.y))
    elif isinstance(P.x, RingElement) and not isinstance(Q.x, RingElement):
        Q = CurvePoint(R(Q.x), R(Q.y))
    if R.eq(P.x, Q.x):
        if R.is_zero(R.add(P.y, Q.y)):
            return INFINITY
        num = R.add(R.mul(R(3), R.mul(P.x, P.x)), R(curve.a))
        lam = R.mul(num, R.inv(R.mul(R(2), P.y)))
    else:
        lam = R.mul(R.sub(Q.y, P.y), R.inv(R.sub(Q.x, P.x)))
    x3 = R.sub(R.sub(R.mul(lam, lam), P.x), Q.x)
    y3 = R.sub(R.mul(lam, R.sub(P.x, x3)), P.y)
    return CurvePoint(x3, y3)


def scalar_mul(curve, k, P):
    """k*P by double-and-add."""
    if k < 0:
        return scalar_mul(curve, -k, point_neg(curve, P))
    result = INFINITY
    addend = P
    while k:
        if k & 1:
            result = point_add(curve, result, addend)
        k >>= 1
        if k:
            addend = point_add(curve, addend, addend)
    return result


# ---------------------------------------------------------- division values


def _extend_division_values(vals, kmax, F, a, b, half):
    """Grow the list of stripped division values f_0, f_1, ... up to kmax.

    ``vals`` must already hold f_0 .. f_4 and supports ring operators; ``F``
    is x^3 + a x + b in the same ring and ``half`` the inverse of 2.
    """
    F2 = None
    while len(vals) <= kmax:
        k = len(vals)
        m = k // 2
        if k % 2:
            t1 = vals[m + 2] * vals[m] ** 3
            t2 = vals[m - 1] * vals[m + 1] ** 3
            if F2 is None:
                F2 = F * F
            if m % 2 == 0:
                vals.append(F2 * t1 - t2)
            else:
                vals.append(t1 - F2 * t2)
        else:
            inner = vals[m + 2] * vals[m - 1] ** 2 - vals[m - 2] * vals[m + 1] ** 2
            vals.append(vals[m] * inner * half)
    return vals


def _base_values(x, a, b):
    zero = x * 0
    one = zero + 1
    x2 = x * x
    x3 = x2 * x
    f3 = 3 * x2 * x2 + 6 * a * x2 + 12 * b * x - a * a
    f4 = 4 * (x3 * x3 + 5 * a * x2 * x2 + 20 * b * x3 - 5 * a * a * x2
              - 4 * a * b * x - 8 * b * b - a ** 3)
    return [zero, one, one * 2, f3, f4]


def division_values(curve, x, kmax):
    """Stripped division values f_0 .. f_kmax evaluated at x."""
    vals = _base_values(x, curve.a, curve.b)
    F = curve.rhs(x)
    half = pow(2, -1, curve.p)
    return _extend_division_values(vals, kmax, F, curve.a, curve.b, half)[: kmax + 1]


class DivPolyCache:
    """Grow-only cache of stripped division polynomials as Polys in X."""

    def __init__(self, curve):
        self.curve = curve
        X = Poly.x(curve.field)
        self._F = curve.rhs_poly
        self._half = pow(2, -1, curve.p)
        self.polys = _base_values(X, curve.a, curve.b)

    def get(self, k):
        _extend_division_values(self.polys, k, self._F, self.curve.a, self.curve.b, self._half)
        return self.polys[k]


def division_poly(cache, k):
    """psi_k for odd k, psi_k / y for even k."""
    return cache.get(k)


def mult_map_values(curve, x, k, vals=None):
    """(G_k(x), H_k(x)) so that k*(x, y) = (G_k(x), y * H_k(x)).

    Denominators are inverted in x's ring; a failure raises
    DenominatorNotInvertible with the offending factor.
    """
    if k < 0:
        G, H = mult_map_values(curve, x, -k, vals)
        return G, -H
    if k == 1:
        return x, x * 0 + 1
    if vals is None or len(vals) <= 2 * k:
        vals = division_values(curve, x, 2 * k)
    F = curve.rhs(x)
    fk2 = vals[k] * vals[k]
    try:
        if k % 2:
            inv = fk2.inverse()
            G = x - F * vals[k - 1] * vals[k + 1] * inv
            psi4 = fk2 * fk2
        else:
            inv = (F * fk2).inverse()
            G = x - vals[k - 1] * vals[k + 1] * inv
            psi4 = F * F * fk2 * fk2
        H = vals[2 * k] * (2 * psi4).inverse()
    except NotInvertible as exc:
        raise DenominatorNotInvertible(
            f"multiplication-by-{k} denominator not invertible", factor=exc.factor
        ) from exc
    return G, H


def mult_maps(cache, k, modulus):
    """G_k and H_k reduced modulo ``modulus`` as Polys."""
    Q = ExtensionRing(modulus.ring, modulus.monic(), is_field=False)
    G, H = mult_map_values(cache.curve, Q.gen, k)
    return G.lift(), H.lift()


# --------------------------------------------------------------- torsion


def torsion_point(curve, ell, factor=None, cache=None):
    """A point of exact order ell over the field cut out by a factor of psi_ell.

    Returns (P, h) where h is the irreducible factor used; x(P) is the class
    of X in F_p[X]/(h), and y(P) is adjoined by a quadratic extension when
    f(x(P)) is not a square there.
    """
    cache = cache or DivPolyCache(curve)
    if factor is None:
        factor = least_factor(division_poly(cache, ell))
    F = ExtensionRing(curve.field, factor, is_field=True)
    x0 = F.gen
    fx = curve.rhs(x0)
    if fx.is_zero() or fx ** ((F.order - 1) // 2) == 1:
        P = CurvePoint(x0, qth_root(fx, 2))
    else:
        F2 = ExtensionRing(F, [-fx, 0, 1], is_field=True, name="y")
        P = CurvePoint(F2(x0), F2.gen)
    if P.is_infinity or not scalar_mul(curve, ell, P).is_infinity:
        raise AssertionError("torsion point construction failed")
    return P, factor


# ---------------------------------------------------------------- oracle


def brute_count(curve):
    """#E(F_p) by summing Legendre symbols over all abscissae."""
    p = curve.p
    if p > ORACLE_BUDGET:
        raise OracleBudgetExceeded(f"p = {p} exceeds the exhaustive-count budget")
    xs = np.arange(p, dtype=np.int64)
    fx = (xs * xs % p * xs + curve.a * xs + curve.b) % p
    is_square = np.zeros(p, dtype=bool)
    is_square[xs * xs % p] = True
    zeros = int(np.count_nonzero(fx == 0))
    squares = int(np.count_nonzero(is_square[fx])) - zeros
    return 1 + zeros + 2 * squares


def hasse_bound(p):
    """Largest |t| allowed by the Hasse bound."""
    return math.isqrt(4 * p)
