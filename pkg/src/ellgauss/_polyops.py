"""Low-level polynomial arithmetic on plain coefficient lists.

Polynomials are lists of raw ring elements, constant term first, with no
trailing zeros.  ``R`` is any ring object from :mod:`ellgauss.fields`.  The
prime-field case works on Python ints and takes shortcuts; everything else
goes through the ring's methods.
"""

import numpy as np

from .counters import COUNTS
from .errors import NotInvertible

# Above this length products over F_p go through numpy convolution.
_CONV_THRESHOLD = 24


def trim(R, a):
    a = list(a)
    while a and R.is_zero(a[-1]):
        a.pop()
    return a


def add(R, a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = R.add(out[i], c)
    return trim(R, out)


def sub(R, a, b):
    out = list(a) + [R.zero] * max(0, len(b) - len(a))
    for i, c in enumerate(b):
        out[i] = R.sub(out[i], c)
    return trim(R, out)


def neg(R, a):
    return [R.neg(c) for c in a]


def scale(R, c, a):
    if R.is_zero(c):
        return []
    return trim(R, [R.mul(c, x) for x in a])


def conv_mod(a, b, p):
    """Product of two int coefficient lists modulo p."""
    n = min(len(a), len(b))
    if p < (1 << 26) and n < 2048:
        dtype = np.int64
    else:
        dtype = object
    c = np.convolve(np.asarray(a, dtype=dtype), np.asarray(b, dtype=dtype)) % p
    return [int(v) for v in c]


def mul(R, a, b):
    if not a or not b:
        return []
    if R.is_prime_field:
        p = R.p
        COUNTS["fp_mul"] += len(a) * len(b)
        if min(len(a), len(b)) > _CONV_THRESHOLD:
            return trim(R, conv_mod(a, b, p))
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return trim(R, [v % p for v in out])
    out = [R.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if R.is_zero(x):
            continue
        for j, y in enumerate(b):
            out[i + j] = R.add(out[i + j], R.mul(x, y))
    return trim(R, out)


def divmod_(R, a, b):
    """Quotient and remainder; the leading coefficient of b must be a unit."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    lb = len(b)
    if len(a) < lb:
        return [], list(a)
    inv_lc = R.inv(b[-1])
    r = list(a)
    q = [R.zero] * (len(a) - lb + 1)
    if R.is_prime_field:
        p = R.p
        for k in range(len(a) - lb, -1, -1):
            c = r[k + lb - 1] * inv_lc % p
            q[k] = c
            if c:
                for j in range(lb):
                    r[k + j] = (r[k + j] - c * b[j]) % p
        COUNTS["fp_mul"] += len(q) * lb
        return trim(R, q), trim(R, r[: lb - 1])
    for k in range(len(a) - lb, -1, -1):
        c = R.mul(r[k + lb - 1], inv_lc)
        q[k] = c
        if not R.is_zero(c):
            for j in range(lb):
                r[k + j] = R.sub(r[k + j], R.mul(c, b[j]))
    return trim(R, q), trim(R, r[: lb - 1])


def rem(R, a, b):
    return divmod_(R, a, b)[1]


def monic(R, a):
    if not a:
        return []
    inv = R.inv(a[-1])
    return [R.mul(inv, c) for c in a[:-1]] + [R.one]


def xgcd(R, a, b):
    """Return (g, s, t) with s*a + t*b = g and g monic (or zero)."""
    r0, r1 = trim(R, a), trim(R, b)
    s0, s1 = [R.one], []
    t0, t1 = [], [R.one]
    while r1:
        q, r = divmod_(R, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(R, s0, mul(R, q, s1))
        t0, t1 = t1, sub(R, t0, mul(R, q, t1))
    if not r0:
        return [], s0, t0
    inv = R.inv(r0[-1])
    return (
        [R.mul(inv, c) for c in r0],
        [R.mul(inv, c) for c in s0],
        [R.mul(inv, c) for c in t0],
    )


def gcd(R, a, b):
    r0, r1 = trim(R, a), trim(R, b)
    while r1:
        r0, r1 = r1, rem(R, r0, r1)
    return monic(R, r0)


def inv_mod(R, a, m):
    """Inverse of a modulo m, raising NotInvertible with the common factor."""
    g, s, _ = xgcd(R, a, m)
    if len(g) != 1:
        factor = None
        if len(g) > 1:
            from .polynomials import Poly

            factor = Poly(R, g)
        raise NotInvertible("no inverse modulo the ring modulus", factor=factor)
    return rem(R, s, m)


def derivative(R, a):
    return trim(R, [R.mul(R(i), a[i]) for i in range(1, len(a))])
