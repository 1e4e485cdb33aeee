"""Polynomially cyclic algebras and their Lagrange resolvents.

A monic squarefree f of degree n over a finite field A is *cyclic* with
cyclicity polynomial C when C permutes the roots of f in a single n-cycle.
Then ``B = A[X]/(f)`` carries the automorphism ``nu: g(X) -> g(C(X))`` of
order n, and B behaves like a cyclic Galois extension of A even when f is
reducible.

The module provides the automorphism and its powers, partial traces over the
subgroups of ``<nu>``, characters of ``<nu>`` with values in a scalar
extension ``A[rho]``, the resolvents ``sum_i chi(nu)^i nu^i(a)``, and the
polynomials relating the fixed subalgebras of coprime subgroups.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from sympy import factorint

from . import linalg
from .errors import BasisDegenerate, CoefficientNotInvariant
from .fields import ExtensionRing
from .polynomials import Poly, factor, gcd, modcomp


def _compose_power(f, C, k):
    """C composed with itself k times, reduced mod f (C^(0) = X)."""
    Q = ExtensionRing(f.ring, f.monic(), is_field=False)
    result = Q.gen
    step = Q(C % f)
    while k:
        if k & 1:
            result = result.lift()(step)
        k >>= 1
        if k:
            step = step.lift()(step)
    return result.lift()


def verify_cyclic(f, C):
    """True iff C permutes the roots of f in one cycle of length deg f."""
    n = f.degree
    if n < 1:
        return False
    X = Poly.x(f.ring)
    if not modcomp(f, C, f).is_zero():
        return False
    if _compose_power(f, C, n) != X % f:
        return False
    for prime in factorint(n):
        m = n // prime
        if gcd(_compose_power(f, C, m) - X, f).degree != 0:
            return False
    return True


class CyclicAlgebra:
    """``base[X]/(f)`` with the automorphism induced by a cyclicity polynomial."""

    def __init__(self, f, C, check=True):
        self.f = f.monic()
        self.base = f.ring
        self.n = self.f.degree
        if check and not verify_cyclic(self.f, C):
            raise ValueError("C is not a cyclicity polynomial of f")
        self.ring = ExtensionRing(self.base, self.f, is_field=True if self.n == 1 else None, name="T")
        self.C = C % self.f
        self.theta = self.ring.gen
        self._nu = {0: self.theta, 1: self.ring(self.C)}
        self._extensions = {}

    def __repr__(self):
        return f"CyclicAlgebra(n={self.n}, base={self.base!r})"

    def nu_image(self, k):
        """nu^k(theta), i.e. C^(k)(X) mod f, by doubling and caching."""
        k %= self.n
        if k in self._nu:
            return self._nu[k]
        bits = []
        j = k
        while j:
            bits.append(j & 1)
            j >>= 1
        acc = 0
        for i, bit in enumerate(reversed(bits)):
            nxt = 2 * acc
            if nxt and nxt not in self._nu:
                img = self._nu[acc]
                self._nu[nxt] = img.lift()(img)
            acc = nxt
            if bit:
                nxt = acc + 1
                if nxt not in self._nu:
                    self._nu[nxt] = self._nu[acc].lift()(self._nu[1])
                acc = nxt
        return self._nu[k]

    def apply_nu(self, a, k=1):
        return apply_nu(self, a, k)

    def extend(self, S):
        """The same cyclic algebra with scalars extended to ``S`` (cached).

        Returns (algebra over S, embedding of self.ring into it).
        """
        key = id(S)
        if key not in self._extensions:
            f_S = self.f.map_coeffs(S)
            C_S = self.C.map_coeffs(S)
            ext = CyclicAlgebra(f_S, C_S, check=False)
            ring = ext.ring

            def embed(a, ring=ring):
                return ring([S(c) for c in a.coeff_list()])

            self._extensions[key] = (ext, embed, S)
        ext, embed, _ = self._extensions[key]
        return ext, embed


def apply_nu(alg, a, k=1):
    """nu^k(a) = a(C^(k)(X)) mod f."""
    k %= alg.n
    if k == 0:
        return a
    return a.lift()(alg.nu_image(k))


def partial_trace(alg, a, q):
    """sum_{j=1}^{n/q} nu^(j q)(a), by doubling over the powers of nu^q."""
    n = alg.n
    if n % q:
        raise ValueError("q must divide n")
    m = n // q
    # invariant: S = sum_{j=0}^{count-1} nu^(j q)(a); the j = m term equals j = 0
    S, count = a, 1
    for bit in bin(m)[3:]:
        S = S + apply_nu(alg, S, count * q)
        count *= 2
        if bit == "1":
            S = a + apply_nu(alg, S, q)
            count += 1
    return S


@dataclass(frozen=True)
class Character:
    """Character of <nu> sending nu to ``image``, an element of order ``order``."""

    order: int
    image: Any

    @property
    def ring(self):
        return self.image.parent

    def __call__(self, k):
        return self.image ** (k % self.order)

    def power(self, e):
        return Character(self.order // _gcd(self.order, e), self.image ** e)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def lagrange_resolvent(alg, chi, a):
    """sum_{i=1}^n chi(nu)^i nu^i(a) in the algebra with scalars A[rho]."""
    ext, embed = alg.extend(chi.ring)
    q = chi.order
    if q == 1:
        return embed(partial_trace(alg, a, 1))
    source = partial_trace(alg, a, q) if q < alg.n else a
    rho = chi.image
    acc = ext.ring.zero
    w = chi.ring.one
    for i in range(1, q + 1):
        w = w * rho
        acc = acc + embed(apply_nu(alg, source, i)) * ext.ring(w)
    return acc


def is_scalar(x):
    """True when an element of an extended algebra has only a constant coordinate."""
    return x.is_constant()


def fixed_subalgebra_dimension(alg, q):
    """Dimension over A of the elements fixed by nu^q."""
    A = alg.base
    n = alg.n
    basis = [alg.theta ** i for i in range(n)]
    cols = []
    for v in basis:
        w = apply_nu(alg, v, q) - v
        cols.append(_coords(w, n, A))
    matrix = [[cols[j][i] for j in range(n)] for i in range(n)]
    return n - linalg.rank(A, matrix)


def _coords(x, n, A):
    out = [int(c) for c in x.coeffs] if A.is_prime_field else list(x.coeffs)
    return out + [A.zero] * (n - len(out))


def subalgebra_minpolys(alg, q1, q2):
    """M1 with roots nu^(q1 i)(theta^(q1 q2)) and M2 with roots nu^i(theta^(q2)).

    Both are Polys over the algebra's ring; their coefficients are checked to
    be fixed by nu^(q1).
    """
    if alg.n % (q1 * q2) or _gcd(q1, q2) != 1:
        raise ValueError("need coprime q1, q2 with q1*q2 dividing n")
    R = alg.ring
    t12 = partial_trace(alg, alg.theta, q1 * q2)
    t2 = partial_trace(alg, alg.theta, q2)
    M1 = Poly(R, [R.one])
    M2 = Poly(R, [R.one])
    for i in range(1, q2 + 1):
        M1 = M1 * Poly(R, [-apply_nu(alg, t12, q1 * i), R.one])
        M2 = M2 * Poly(R, [-apply_nu(alg, t2, i), R.one])
    for M in (M1, M2):
        for c in M.coeffs:
            if apply_nu(alg, c, q1) != c:
                raise CoefficientNotInvariant("coefficient not fixed by nu^q1")
    return M1, M2


def connecting_poly(alg, q1, q2):
    """W of degree < q2 with W(theta^(q2)) = theta^(q1 q2).

    The coefficients are sought in A[theta^(q1)], the subalgebra fixed by
    nu^(q1).  Returns (W, w) where w[k][m] in A gives the coefficient of X^k
    as sum_m w[k][m] (theta^(q1))^m.
    """
    A = alg.base
    n = alg.n
    R = alg.ring
    t1 = partial_trace(alg, alg.theta, q1)
    t2 = partial_trace(alg, alg.theta, q2)
    t12 = partial_trace(alg, alg.theta, q1 * q2)
    p1 = [R.one]
    for _ in range(1, q1):
        p1.append(p1[-1] * t1)
    p2 = [R.one]
    for _ in range(1, q2):
        p2.append(p2[-1] * t2)
    columns = []
    index = []
    for k in range(q2):
        for m in range(q1):
            columns.append(_coords(p1[m] * p2[k], n, A))
            index.append((k, m))
    matrix = [[col[i] for col in columns] for i in range(n)]
    rhs = _coords(t12, n, A)
    try:
        sol = linalg.solve(A, matrix, rhs)
    except Exception as exc:
        raise BasisDegenerate("products of partial traces do not reach theta^(q1 q2)") from exc
    w = [[A.zero] * q1 for _ in range(q2)]
    for (k, m), v in zip(index, sol):
        w[k][m] = v
    coeffs = []
    for k in range(q2):
        c = R.zero
        for m in range(q1):
            c = c + p1[m] * R(w[k][m])
        coeffs.append(c)
    W = Poly(R, coeffs)
    if W(t2) != t12:
        raise BasisDegenerate("connecting polynomial check failed")
    return W, w


def random_cyclic_algebra(K, m, k, rng):
    """A cyclic algebra over the field K whose f has k distinct factors of degree m.

    Picks distinct monic irreducibles g_0..g_{k-1} of degree m, roots beta_j
    of g_j in L = K[Y]/(g_0), and builds C by Chinese remaindering so that
    C(beta_j) = beta_{j+1} and C(beta_{k-1}) = beta_0^|K|.  The orbit of
    beta_0 then has length m*k.
    """
    from .polynomials import is_irreducible

    gs = []
    seen = set()
    while len(gs) < k:
        g = Poly(K, [K.random_element(rng) for _ in range(m)] + [K.one])
        if g.flat() in seen or not is_irreducible(g):
            continue
        seen.add(g.flat())
        gs.append(g)
    if m == 1:
        L = ExtensionRing(K, [K.zero, K.one], is_field=True)
    else:
        L = ExtensionRing(K, gs[0], is_field=True)
    betas = []
    for g in gs:
        gl = g.map_coeffs(L)
        lin = [h for h in factor(gl) if h.degree == 1]
        betas.append(-lin[0].coeffs[0])
    targets = betas[1:] + [betas[0] ** K.order]
    residues = []
    for g, beta, target in zip(gs, betas, targets):
        # express target as a polynomial of degree < m in beta over K
        powers = [L.one]
        for _ in range(1, m):
            powers.append(powers[-1] * beta)
        matrix = [[_coords(pw, m, K)[i] for pw in powers] for i in range(m)]
        sol = linalg.solve_unique(K, matrix, _coords(target, m, K))
        residues.append(Poly(K, sol))
    f = Poly(K, [K.one])
    for g in gs:
        f = f * g
    C = crt_polys(residues, gs)
    return CyclicAlgebra(f, C)


def crt_polys(residues, moduli):
    """The polynomial congruent to residues[i] mod moduli[i] (pairwise coprime)."""
    from .polynomials import xgcd

    result = residues[0] % moduli[0]
    modulus = moduli[0]
    for r, m in zip(residues[1:], moduli[1:]):
        g, s, t = xgcd(modulus, m)
        # s*modulus + t*m = 1
        result = (result * t * m + r * s * modulus) % (modulus * m)
        modulus = modulus * m
    return result
