"""Univariate polynomials over the rings of :mod:`ellgauss.fields`.

:class:`Poly` is an immutable polynomial with operator overloading.  The
module functions cover what point counting needs on top of plain arithmetic:
modular composition and powering, gcds, distinct- and equal-degree
factorization over finite fields, cyclotomic factors, q-th roots in finite
fields, and the discrete-Fourier-shaped linear solve that recovers
isomorphism coefficients from resolvent ratios.

>>> from ellgauss.fields import PrimeField
>>> F7 = PrimeField(7)
>>> X = Poly.x(F7)
>>> modcomp(X**2, X + 2, X**3)
Poly(GF(7), [4, 4, 1])
"""

from __future__ import annotations

import random

from sympy import factorint
from sympy import cyclotomic_poly as _sympy_cyclotomic

from . import _polyops as P
from .counters import COUNTS
from .errors import BadOrder, NoRoot, NotSquarefree, SingularSystem
from .fields import ExtensionRing, PrimeField, RingElement


class Poly:
    """Polynomial with coefficients in ``ring``, constant term first."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring, coeffs=()):
        self.ring = ring
        self.coeffs = tuple(P.trim(ring, [ring(c) for c in coeffs]))

    @classmethod
    def _raw(cls, ring, coeffs):
        obj = cls.__new__(cls)
        obj.ring = ring
        obj.coeffs = tuple(coeffs)
        return obj

    @classmethod
    def x(cls, ring):
        return cls._raw(ring, [ring.zero, ring.one])

    @classmethod
    def const(cls, ring, c):
        return cls(ring, [c])

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else self.ring.zero

    def is_zero(self):
        return not self.coeffs

    def is_monic(self):
        return bool(self.coeffs) and self.ring.eq(self.coeffs[-1], self.ring.one)

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.ring.zero

    def _lift_other(self, other):
        if isinstance(other, Poly):
            if other.ring is not self.ring and other.ring != self.ring:
                return None
            return other
        try:
            return Poly(self.ring, [other])
        except TypeError:
            return None

    def __add__(self, other):
        other = self._lift_other(other)
        if other is None:
            return NotImplemented
        return Poly._raw(self.ring, P.add(self.ring, self.coeffs, other.coeffs))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._lift_other(other)
        if other is None:
            return NotImplemented
        return Poly._raw(self.ring, P.sub(self.ring, self.coeffs, other.coeffs))

    def __rsub__(self, other):
        other = self._lift_other(other)
        if other is None:
            return NotImplemented
        return other - self

    def __neg__(self):
        return Poly._raw(self.ring, P.neg(self.ring, self.coeffs))

    def __mul__(self, other):
        other = self._lift_other(other)
        if other is None:
            return NotImplemented
        return Poly._raw(self.ring, P.mul(self.ring, self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __pow__(self, e):
        result = Poly.const(self.ring, self.ring.one)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __divmod__(self, other):
        other = self._lift_other(other)
        q, r = P.divmod_(self.ring, self.coeffs, other.coeffs)
        return Poly._raw(self.ring, q), Poly._raw(self.ring, r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __eq__(self, other):
        other = self._lift_other(other)
        if other is None:
            return NotImplemented
        if len(self.coeffs) != len(other.coeffs):
            return False
        return all(self.ring.eq(a, b) for a, b in zip(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash(self.flat())

    def __call__(self, x):
        """Horner evaluation at x (a ring element, or an element over the ring)."""
        if not self.coeffs:
            return x * 0 if not isinstance(x, int) else self.ring.zero
        if isinstance(x, int) and self.ring.is_prime_field:
            p = self.ring.p
            acc = 0
            for c in reversed(self.coeffs):
                acc = (acc * x + c) % p
            return acc
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * x + c
        if not isinstance(acc, RingElement) and isinstance(x, RingElement):
            acc = x.parent(acc)
        return acc

    def monic(self):
        return Poly._raw(self.ring, P.monic(self.ring, self.coeffs))

    def derivative(self):
        return Poly._raw(self.ring, P.derivative(self.ring, self.coeffs))

    def map_coeffs(self, ring, fn=None):
        """Same polynomial with coefficients sent into ``ring``."""
        fn = fn or ring
        return Poly(ring, [fn(c) for c in self.coeffs])

    def flat(self):
        out = []
        for c in self.coeffs:
            out.extend(self.ring.flat(c))
        return tuple(out)

    def __repr__(self):
        return f"Poly({self.ring!r}, {list(self.flat()) if self.ring.is_prime_field else list(self.coeffs)})"


def poly_sort_key(f):
    """Deterministic order on monic polynomials: degree, then least root.

    The lower coefficients are negated before comparing, so among linear
    factors the one with the least root comes first.
    """
    R = f.ring
    neg = []
    for c in f.coeffs[:-1]:
        neg.extend(R.flat(R.neg(c)))
    return (f.degree, tuple(neg))


# ----------------------------------------------------------------- primitives


def quotient_ring(f, is_field=False):
    """The ring ring[X]/(f) for monic f."""
    return ExtensionRing(f.ring, f.monic(), is_field=is_field)


def modcomp(g, h, f):
    """g(h) mod f by Horner's rule in the quotient ring."""
    Q = quotient_ring(f)
    COUNTS["compositions"] += 1
    return g(Q(h % f)).lift()


def powmod(h, e, f):
    """h^e mod f by square-and-multiply."""
    Q = quotient_ring(f)
    return (Q(h % f) ** e).lift()


def gcd(u, v):
    """Monic gcd over a field; gcd(f, 0) is monic(f)."""
    return Poly._raw(u.ring, P.gcd(u.ring, u.coeffs, v.coeffs))


def xgcd(u, v):
    g, s, t = P.xgcd(u.ring, u.coeffs, v.coeffs)
    R = u.ring
    return Poly._raw(R, g), Poly._raw(R, s), Poly._raw(R, t)


def is_squarefree(f):
    return gcd(f, f.derivative()).degree == 0


def _frobenius_power_count(R):
    """How many p-th power maps make up the field's own Frobenius."""
    return R.abs_degree


def _qpower(table, a, times):
    for _ in range(times):
        a = table.apply(a)
    return a


def ddf(f, stop_at_first=False):
    """Distinct-degree factorization of a monic squarefree f.

    Returns a list of (d, g) where g is the product of all irreducible
    factors of degree d.  With ``stop_at_first`` only the lowest degree
    found is reported.
    """
    R = f.ring
    f = f.monic()
    if f.degree <= 0:
        return []
    if not is_squarefree(f):
        raise NotSquarefree("polynomial has a repeated factor")
    k = _frobenius_power_count(R)
    X = Poly.x(R)
    Q = quotient_ring(f)
    table = Q.frobenius_table()
    h = Q.gen
    remaining = f
    out = []
    d = 0
    while remaining.degree >= 2 * (d + 1):
        d += 1
        h = _qpower(table, h, k)
        g = gcd(remaining, h.lift() - X)
        if g.degree > 0:
            out.append((d, g))
            if stop_at_first:
                return out
            remaining = remaining // g
    if remaining.degree > 0:
        out.append((remaining.degree, remaining))
    return out


def factor_degree_pattern(f):
    """Sorted list of (degree, count) of the irreducible factors of f."""
    return [(d, g.degree // d) for d, g in ddf(f)]


def is_irreducible(f):
    if f.degree <= 0:
        return False
    if f.degree == 1:
        return True
    try:
        parts = ddf(f, stop_at_first=True)
    except NotSquarefree:
        return False
    return parts[0][0] == f.degree


def edf(g, d, rng=None):
    """Split g, a product of distinct degree-d irreducibles, into factors.

    Cantor-Zassenhaus with the trace map; odd characteristic only.
    """
    R = g.ring
    g = g.monic()
    if g.degree == d:
        return [g]
    rng = rng or random.Random(0x5EED)
    k = _frobenius_power_count(R)
    order = R.order
    found = [g]
    result = []
    while found:
        h = found.pop()
        if h.degree == d:
            result.append(h)
            continue
        Q = quotient_ring(h)
        table = Q.frobenius_table()
        while True:
            a = Q.from_coeffs([R.random_element(rng) for _ in range(h.degree)])
            t = a
            cur = a
            for _ in range(d - 1):
                cur = _qpower(table, cur, k)
                t = t + cur
            w = t ** ((order - 1) // 2)
            s = gcd(h, (w - 1).lift())
            if 0 < s.degree < h.degree:
                found.extend([s, h // s])
                break
    return sorted(result, key=poly_sort_key)


def factor(f, rng=None):
    """Monic irreducible factors of a squarefree f, in canonical order."""
    out = []
    for d, g in ddf(f):
        out.extend(edf(g, d, rng))
    return sorted(out, key=poly_sort_key)


def least_factor(f, rng=None):
    """Canonically least irreducible factor among those of least degree."""
    d, g = ddf(f, stop_at_first=True)[0]
    return edf(g, d, rng)[0]


def roots(f):
    """Roots in the coefficient field of a squarefree f, in canonical order."""
    if f.degree < 1:
        return []
    R = f.ring
    return [R.neg(h.coeffs[0]) for h in factor(f) if h.degree == 1]


# ------------------------------------------------------------ roots of unity


def cyclotomic_poly(n, ring):
    """The n-th cyclotomic polynomial with coefficients in ``ring``."""
    from sympy import Poly as SPoly, symbols

    z = symbols("z")
    coeffs = SPoly(_sympy_cyclotomic(n, z), z).all_coeffs()[::-1]
    return Poly(ring, [int(c) for c in coeffs])


def cyclotomic_minpoly(n, ring):
    """Minimal polynomial of the canonical primitive n-th root of unity."""
    if n % ring.p == 0:
        raise BadOrder(f"characteristic {ring.p} divides {n}")
    return least_factor(cyclotomic_poly(n, ring))


def _field_order(R):
    return R.order


def _elem_pow(R, a, e):
    return R.pow(a, e)


def _sylow_log(R, h, g0, prime, s, dlog_table):
    """Discrete log of h to base g0 in the cyclic group of order prime^s."""
    L = 0
    g0_inv = R.inv(g0)
    for i in range(s):
        probe = R.mul(R.pow(g0_inv, L), h)
        probe = R.pow(probe, prime ** (s - 1 - i))
        digit = dlog_table.get(R.flat(probe))
        if digit is None:
            raise NoRoot("element outside the expected subgroup")
        L += digit * prime ** i
    return L


def _non_residue(R, prime, order, rng):
    while True:
        g = R.random_element(rng)
        if R.is_zero(g):
            continue
        if not R.eq(R.pow(g, (order - 1) // prime), R.one):
            return g


def qth_root(a, q, field=None, all_roots=False):
    """A q-th root of a in a finite field, for q a prime power.

    The canonical root is the one whose flattened coefficient sequence is
    lexicographically least.  ``all_roots`` returns every root instead.
    """
    R = field if field is not None else a.parent
    if not isinstance(a, RingElement):
        a = R(a)
    if R.is_zero(a):
        return [a] if all_roots else a
    fq = factorint(q)
    if len(fq) != 1:
        raise ValueError("q must be a prime power")
    (prime, e), = fq.items()
    order = _field_order(R)
    m = order - 1
    s = 0
    t = m
    while t % prime == 0:
        t //= prime
        s += 1
    # Components of the group order prime to q can be inverted directly.
    qq = prime ** min(e, s)
    if not R.eq(R.pow(a, m // qq), R.one):
        raise NoRoot("element is not a q-th power")
    COUNTS["root_extractions"] += 1
    delta = pow(q, -1, t)
    x0 = R.pow(a, delta)
    if s == 0:
        roots_ = [x0]
    else:
        rng = random.Random(0xA11 + q)
        g = _non_residue(R, prime, order, rng)
        g0 = R.pow(g, t)
        gamma = R.pow(g0, prime ** (s - 1))
        table = {}
        cur = R.one
        for d in range(prime):
            table[R.flat(cur)] = d
            cur = R.mul(cur, gamma)
        err = R.div(R.pow(x0, q), a)  # lies in the Sylow subgroup
        L = _sylow_log(R, R.inv(err), g0, prime, s, table)
        # x0^q * g0^L = a; need q | L, where the q-part is capped by s
        if e > s:
            # a has a q-th root only when the Sylow part vanishes
            if L != 0:
                raise NoRoot("element is not a q-th power")
            y = R.one
        else:
            if L % q:
                raise NoRoot("element is not a q-th power")
            y = R.pow(g0, L // q)
        x = R.mul(x0, y)
        omega = R.pow(g0, prime ** (s - min(e, s)))  # generates the q-th roots of 1
        roots_ = []
        cur = x
        for _ in range(prime ** min(e, s)):
            roots_.append(cur)
            cur = R.mul(cur, omega)
    for r in roots_:
        if not R.eq(R.pow(r, q), a):
            raise NoRoot("root verification failed")
    roots_ = sorted(roots_, key=R.flat)
    return roots_ if all_roots else roots_[0]


def element_order_is(R, rho, n):
    """True when rho has multiplicative order exactly n."""
    if not R.eq(R.pow(rho, n), R.one):
        return False
    return all(not R.eq(R.pow(rho, n // f), R.one) for f in factorint(n))


def resolvent_system_solve(rho_n, beta, ring=None):
    """Solve sum_i b_i rho^(-j i) = beta_j for j = 1..n by inverse DFT."""
    R = ring if ring is not None else rho_n.parent
    n = len(beta)
    if n % R.p == 0:
        raise SingularSystem("n is divisible by the characteristic")
    if not element_order_is(R, rho_n, n):
        raise SingularSystem("rho does not have exact order n")
    n_inv = R(pow(n, -1, R.p))
    powers = [R.one]
    for _ in range(1, n):
        powers.append(R.mul(powers[-1], rho_n))
    b = []
    for i in range(1, n + 1):
        acc = R.zero
        for j in range(1, n + 1):
            acc = R.add(acc, R.mul(powers[(i * j) % n], beta[j - 1]))
        b.append(R.mul(n_inv, acc))
    for j in range(1, n + 1):
        acc = R.zero
        for i in range(1, n + 1):
            acc = R.add(acc, R.mul(b[i - 1], powers[(-i * j) % n]))
        if not R.eq(acc, beta[j - 1]):
            raise SingularSystem("residual check failed")
    return b


def resolvent_matrix(rho_n, n, ring=None):
    """The matrix (rho^(-j i)) for i, j = 1..n."""
    R = ring if ring is not None else rho_n.parent
    inv = R.inv(rho_n)
    return [[R.pow(inv, i * j) for i in range(1, n + 1)] for j in range(1, n + 1)]


__all__ = [
    "Poly",
    "PrimeField",
    "modcomp",
    "powmod",
    "gcd",
    "xgcd",
    "ddf",
    "edf",
    "factor",
    "factor_degree_pattern",
    "is_irreducible",
    "is_squarefree",
    "least_factor",
    "cyclotomic_poly",
    "cyclotomic_minpoly",
    "qth_root",
    "resolvent_system_solve",
    "resolvent_matrix",
    "poly_sort_key",
    "roots",
]
