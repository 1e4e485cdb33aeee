"""Exact arithmetic in prime fields and polynomial quotient rings.

A :class:`PrimeField` hands out plain Python ints in ``[0, p)``.  An
:class:`ExtensionRing` is ``base[x]/(m(x))`` for a monic ``m`` over a prime
field or over another extension ring, and hands out :class:`RingElement`
objects that support the usual operators.  Quotient rings that are not fields
are allowed; inversion then fails with :class:`NotInvertible` carrying the
common factor with the modulus.

Both ring kinds expose the same small method protocol (``add``, ``mul``,
``inv``, ``is_zero``, ``flat``, ...) so generic algorithms can run over either.

Over a prime base the coefficients of an element are a numpy vector and a
product is one convolution plus one matrix product for the reduction.  A
:class:`FrobeniusTable` stores the images of the power basis under
``a -> a^p`` so that the p-th power map costs a matrix-vector product rather
than an exponentiation.

>>> F3 = PrimeField(3)
>>> R = ExtensionRing(F3, [1, 0, 1])     # F_3[x]/(x^2 + 1)
>>> x = R.gen
>>> invert(x)
RingElement([0, 2])
>>> power(x, 9) == x
True
"""

from __future__ import annotations

import numpy as np
from sympy import isprime

from . import _polyops as P
from .counters import COUNTS
from .errors import NotInvertible


class PrimeField:
    """The field of integers modulo a prime ``p``; elements are ints."""

    is_prime_field = True
    is_field = True
    degree = 1
    abs_degree = 1
    base = None
    zero = 0
    one = 1

    def __init__(self, p):
        p = int(p)
        if p < 2 or not isprime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.order = p
        self.np_dtype = np.int64 if p < (1 << 26) else object

    def __call__(self, value):
        if isinstance(value, (RingElement,)):
            raise TypeError("cannot coerce a ring element into a prime field")
        return int(value) % self.p

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return f"GF({self.p})"

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        COUNTS["fp_mul"] += 1
        return a * b % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise NotInvertible("zero has no inverse")
        return pow(a, -1, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        if e < 0:
            a, e = self.inv(a), -e
        return pow(a, e, self.p)

    def is_zero(self, a):
        return a % self.p == 0

    def eq(self, a, b):
        return (a - b) % self.p == 0

    def flat(self, a):
        return (a,)

    def from_flat(self, seq):
        return int(seq[0]) % self.p

    def random_element(self, rng):
        return rng.randrange(self.p)

    def frobenius(self, a):
        return a

    def frobenius_table(self):
        return FrobeniusTable(self)


class ExtensionRing:
    """The quotient ring ``base[x]/(modulus)`` for a monic modulus.

    ``is_field`` may be passed when the caller knows whether the modulus is
    irreducible; otherwise it is decided on first access by a
    distinct-degree factorization.
    """

    is_prime_field = False

    def __init__(self, base, modulus, *, is_field=None, name="x"):
        from .polynomials import Poly

        if isinstance(modulus, Poly):
            if modulus.ring is not base and modulus.ring != base:
                raise ValueError("modulus lives over a different ring")
            coeffs = list(modulus.coeffs)
        else:
            coeffs = [base(c) for c in modulus]
        coeffs = P.trim(base, coeffs)
        if len(coeffs) < 2:
            raise ValueError("modulus must have positive degree")
        if not base.eq(coeffs[-1], base.one):
            raise ValueError("modulus must be monic")
        self.base = base
        self.modulus = tuple(coeffs)
        self.degree = len(coeffs) - 1
        self.p = base.p
        self.characteristic = base.p
        self.abs_degree = self.degree * base.abs_degree
        self.name = name
        self._field = is_field
        self._prime = base.is_prime_field
        self._red = None
        self._table = None
        if self._prime:
            self.np_dtype = base.np_dtype
        self.zero = self._make(self._zero_coeffs())
        self.one = self.from_base(base.one)
        if self.degree == 1:
            self.gen = self.from_base(base.neg(coeffs[0]))
        else:
            c = self._zero_coeffs()
            c[1] = base.one
            self.gen = self._make(c)

    # ----- construction helpers -----

    def _zero_coeffs(self):
        if self._prime:
            return np.zeros(self.degree, dtype=self.np_dtype)
        return [self.base.zero] * self.degree

    def _make(self, coeffs):
        if self._prime:
            return RingElement(self, coeffs)
        return RingElement(self, tuple(coeffs))

    def from_base(self, c):
        z = self._zero_coeffs()
        z[0] = c
        return self._make(z)

    def from_coeffs(self, coeffs):
        """Element with the given coefficient list, reduced modulo the modulus."""
        base = self.base
        coeffs = [base(c) for c in coeffs]
        if len(coeffs) > self.degree:
            coeffs = P.rem(base, P.trim(base, coeffs), list(self.modulus))
        z = self._zero_coeffs()
        for i, c in enumerate(coeffs):
            z[i] = c
        return self._make(z)

    def __call__(self, value):
        from .polynomials import Poly

        if isinstance(value, RingElement):
            if value.parent is self:
                return value
            return self.from_base(self.base(value))
        if isinstance(value, Poly):
            if value.ring is not self.base and value.ring != self.base:
                raise TypeError("polynomial over a different ring")
            return self.from_coeffs(value.coeffs)
        if isinstance(value, (list, tuple, np.ndarray)):
            return self.from_coeffs(list(value))
        return self.from_base(self.base(value))

    # ----- ring protocol -----

    @property
    def is_field(self):
        if self._field is None:
            from .polynomials import is_irreducible

            self._field = is_irreducible(self.modulus_poly)
        return self._field

    @property
    def order(self):
        return self.base.order ** self.degree

    @property
    def modulus_poly(self):
        from .polynomials import Poly

        return Poly(self.base, self.modulus)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        return a.inverse()

    def div(self, a, b):
        return a * b.inverse()

    def pow(self, a, e):
        return a ** e

    def is_zero(self, a):
        return a.is_zero()

    def eq(self, a, b):
        return a == b

    def flat(self, a):
        return a.flat()

    def from_flat(self, seq):
        k = self.base.abs_degree
        return self._make_from_list(
            [self.base.from_flat(seq[i * k:(i + 1) * k]) for i in range(self.degree)]
        )

    def _make_from_list(self, coeffs):
        z = self._zero_coeffs()
        for i, c in enumerate(coeffs):
            z[i] = c
        return self._make(z)

    def random_element(self, rng):
        return self._make_from_list(
            [self.base.random_element(rng) for _ in range(self.degree)]
        )

    def frobenius_table(self):
        if self._table is None:
            self._table = FrobeniusTable(self)
        return self._table

    def frobenius(self, a):
        return self.frobenius_table().apply(a)

    def __repr__(self):
        return f"ExtensionRing({self.base!r}, degree={self.degree})"

    # ----- prime-base fast path -----

    def _reduction_matrix(self):
        """Rows are x^(d+i) mod m for i = 0 .. d-2."""
        if self._red is None:
            d, p = self.degree, self.p
            top = np.array([-c % p for c in self.modulus[:-1]], dtype=self.np_dtype)
            rows = [top]
            for _ in range(d - 2):
                prev = rows[-1]
                nxt = np.concatenate(([0], prev[:-1])).astype(self.np_dtype)
                nxt = (nxt + prev[-1] * top) % p
                rows.append(nxt)
            self._red = np.array(rows, dtype=self.np_dtype)
        return self._red

    def _mul_prime(self, a, b):
        d, p = self.degree, self.p
        c = np.convolve(a, b) % p
        COUNTS["fp_mul"] += d * d
        if d == 1:
            return c
        COUNTS["fp_mul"] += d * (d - 1)
        return (c[:d] + c[d:] @ self._reduction_matrix()) % p


class RingElement:
    """An element of an :class:`ExtensionRing`.

    ``coeffs`` is a numpy vector over a prime base and a tuple otherwise; in
    both cases it has exactly ``parent.degree`` entries, constant term first.
    """

    __slots__ = ("parent", "coeffs")

    def __init__(self, parent, coeffs):
        self.parent = parent
        self.coeffs = coeffs

    def _coerce(self, other):
        if isinstance(other, RingElement) and other.parent is self.parent:
            return other
        try:
            return self.parent(other)
        except TypeError:
            return None

    def _pair(self, other):
        """(self, other) moved into a common ring, or None."""
        if isinstance(other, RingElement):
            if other.parent is self.parent:
                return self, other
            try:
                return self, self.parent(other)
            except TypeError:
                pass
            try:
                return other.parent(self), other
            except TypeError:
                return None
        conv = self._coerce(other)
        return None if conv is None else (self, conv)

    def __add__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        x, y = pair
        R = x.parent
        if R._prime:
            return RingElement(R, (x.coeffs + y.coeffs) % R.p)
        return RingElement(R, tuple(u + v for u, v in zip(x.coeffs, y.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        R = self.parent
        if R._prime:
            return RingElement(R, -self.coeffs % R.p)
        return RingElement(R, tuple(-x for x in self.coeffs))

    def __sub__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        x, y = pair
        R = x.parent
        if R._prime:
            return RingElement(R, (x.coeffs - y.coeffs) % R.p)
        return RingElement(R, tuple(u - v for u, v in zip(x.coeffs, y.coeffs)))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        R = self.parent
        if isinstance(other, (int, np.integer)):
            if R._prime:
                return RingElement(R, self.coeffs * (int(other) % R.p) % R.p)
            return RingElement(R, tuple(x * other for x in self.coeffs))
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        x, y = pair
        R = x.parent
        if R._prime:
            return RingElement(R, R._mul_prime(x.coeffs, y.coeffs))
        base = R.base
        if y.parent is R and y.is_constant() and not x.is_constant():
            x, y = y, x
        if x.is_constant():
            c = x.coeffs[0]
            return RingElement(R, tuple(c * v for v in y.coeffs))
        c = P.mul(base, P.trim(base, x.coeffs), P.trim(base, y.coeffs))
        if len(c) > R.degree:
            c = P.rem(base, c, list(R.modulus))
        return R._make_from_list(c)

    __rmul__ = __mul__

    def inverse(self):
        R = self.parent
        base = R.base
        inv = P.inv_mod(base, self.coeff_list(), list(R.modulus))
        return R._make_from_list(inv)

    def __truediv__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        return pair[0] * pair[1].inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, e):
        e = int(e)
        if e < 0:
            return self.inverse() ** (-e)
        result = self.parent.one
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def is_zero(self):
        if self.parent._prime:
            return not self.coeffs.any()
        return all(c.is_zero() if isinstance(c, RingElement) else c == 0 for c in self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        x, y = pair
        if x.parent._prime:
            return bool(np.array_equal(x.coeffs, y.coeffs))
        return all(u == v for u, v in zip(x.coeffs, y.coeffs))

    def __hash__(self):
        return hash(self.flat())

    def flat(self):
        """Flattened tuple of prime-field coefficients (for ordering and hashing)."""
        R = self.parent
        if R._prime:
            return tuple(int(c) for c in self.coeffs)
        out = []
        for c in self.coeffs:
            out.extend(R.base.flat(c))
        return tuple(out)

    def coeff_list(self):
        """Coefficients over the base ring without trailing zeros."""
        R = self.parent
        if R._prime:
            return P.trim(R.base, [int(c) for c in self.coeffs])
        return P.trim(R.base, list(self.coeffs))

    def lift(self):
        from .polynomials import Poly

        return Poly(self.parent.base, self.coeff_list())

    def is_constant(self):
        R = self.parent
        return all(R.base.is_zero(c) for c in list(self.coeffs)[1:])

    def constant(self):
        """Constant coefficient as a raw base-ring element."""
        c = self.coeffs[0]
        return int(c) if self.parent._prime else c

    def frobenius(self):
        return self.parent.frobenius(self)

    def __repr__(self):
        return f"RingElement({list(self.flat())})"


class FrobeniusTable:
    """Precomputed p-th power map on a ring over F_p.

    ``power`` is the image of the generator ``x`` and ``powers[j]`` that of
    ``x^j``.  For a tower the base ring's table is used on the coefficients.
    """

    def __init__(self, ring):
        self.parent = ring
        if ring.is_prime_field:
            self.power = None
            self.powers = []
            return
        base_table = ring.base.frobenius_table()
        self.base_table = base_table
        self.power = ring.gen ** ring.p
        self.powers = [ring.one]
        for _ in range(1, ring.degree):
            self.powers.append(self.powers[-1] * self.power)
        if ring._prime:
            self.matrix = np.array([w.coeffs for w in self.powers], dtype=ring.np_dtype)

    def apply(self, a):
        ring = self.parent
        if ring.is_prime_field:
            return a
        if ring._prime:
            d = ring.degree
            COUNTS["fp_mul"] += d * d
            COUNTS["frob_fp_mul"] += d * d
            return RingElement(ring, (a.coeffs @ self.matrix) % ring.p)
        bt = self.base_table
        out = ring.zero
        for c, w in zip(a.coeffs, self.powers):
            if not ring.base.is_zero(c):
                out = out + w * ring(bt.apply(c))
        return out


def frobenius_precompute(ring):
    """Table realizing ``a -> a^p`` on ``ring`` (cached on the ring)."""
    return ring.frobenius_table()


def frobenius_apply(table, a):
    return table.apply(a)


def invert(a, ring=None):
    """Multiplicative inverse; ``ring`` is needed for bare prime-field ints."""
    if isinstance(a, RingElement):
        return a.inverse()
    if ring is None:
        raise TypeError("prime-field ints need the ring argument")
    return ring.inv(a)


def power(a, e, ring=None):
    if isinstance(a, RingElement):
        return a ** e
    if ring is None:
        raise TypeError("prime-field ints need the ring argument")
    return ring.pow(a, e)
