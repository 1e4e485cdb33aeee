"""Ray polynomials of ell-torsion points.

For a point P of odd prime order ell the ray polynomial is

    E_P(X) = prod_{a=1}^{(ell-1)/2} (X - x(aP)),

which depends only on the line spanned by P.  Its coefficients generate a
field F_{p^r}; multiplication by a primitive root c modulo ell permutes its
roots cyclically, so ``B = F_{p^r}[T]/(E_P)`` is a cyclic algebra with
cyclicity polynomial G_c, the x-coordinate map of multiplication by c.

:func:`build_ray` also decides whether Frobenius has an eigenvector in E[ell]
(an *Elkies* prime); if so the ray is taken on an eigenline and r = 1.

Classical modular polynomials can be loaded from a text file (a bundled copy
covers ell = 3, 5, 7, 11, 13) to cross-check r against the factor degrees of
Phi_ell(X, j(E)).
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field
from importlib import resources
from typing import Any, Optional

from sympy import divisors, primitive_root

from . import linalg
from .curve import DivPolyCache, division_poly, division_values
from .cyclic import CyclicAlgebra
from .errors import DegenerateRay, MismatchError, NotSquarefree, ParseError
from .fields import ExtensionRing
from .polynomials import Poly, factor_degree_pattern, gcd, is_squarefree, least_factor

log = logging.getLogger(__name__)


@dataclass
class RayData:
    ell: int
    curve: Any
    kind: str  # "elkies" or "atkin"
    eigenvalue: Optional[int]
    r: int
    c: int
    E_P: Poly
    G_c: Poly
    A: Any
    B: CyclicAlgebra
    point_field: Any
    point_factor: Poly
    x_degree: int
    gamma: Any = None
    notes: list = field(default_factory=list)

    @property
    def n(self):
        return (self.ell - 1) // 2


def least_primitive_root(ell):
    return int(primitive_root(ell))


def eigen_search(curve, ell, cache=None):
    """Look for lambda in 1..(ell-1)/2 with phi(P) = +-lambda P on some P in E[ell].

    Works modulo psi_ell.  Returns (lambda, gcd) or None.
    """
    cache = cache or DivPolyCache(curve)
    psi = division_poly(cache, ell).monic()
    Q = ExtensionRing(curve.field, psi, is_field=False)
    xp = Q.gen ** curve.p
    n = (ell - 1) // 2
    vals = division_values(curve, Q.gen, n + 1)
    for lam in range(1, n + 1):
        if lam == 1:
            G = Q.gen
        else:
            G = _x_map(curve, Q.gen, lam, vals)
        g = gcd(psi, (xp - G).lift())
        if g.degree > 0:
            return lam, g
    return None


def _x_map(curve, x, k, vals):
    F = curve.rhs(x)
    fk2 = vals[k] * vals[k]
    if k % 2:
        return x - F * vals[k - 1] * vals[k + 1] * fk2.inverse()
    return x - vals[k - 1] * vals[k + 1] * (F * fk2).inverse()


def _x_multiples(curve, x0, n):
    """x(aP) for a = 1..n given x(P) = x0."""
    vals = division_values(curve, x0, n + 1)
    return [x0] + [_x_map(curve, x0, a, vals) for a in range(2, n + 1)]


def _fixed_degree(F, coeffs, d):
    """Least m | d with every coefficient fixed by the p^m-power map."""
    for m in divisors(d):
        ok = True
        for c in coeffs:
            img = c
            for _ in range(m):
                img = F.frobenius(img)
            if img != c:
                ok = False
                break
        if ok:
            return m
    return d


def _minpoly_over_fp(F, gamma, r):
    """prod_{i<r} (Y - gamma^(p^i)) as a Poly over F_p (gamma of degree r)."""
    Fp = F.base
    prod = Poly(F, [F.one])
    conj = gamma
    for _ in range(r):
        prod = prod * Poly(F, [-conj, F.one])
        conj = F.frobenius(conj)
    coeffs = []
    for c in prod.coeffs:
        if not c.is_constant():
            return None
        coeffs.append(c.constant())
    return Poly(Fp, coeffs)


def _coords_fp(x, d):
    out = [int(v) for v in x.coeffs]
    return out + [0] * (d - len(out))


def _descend(F, coeffs, r):
    """Find A = F_{p^r} and express the coefficients (elements of F) in it.

    Returns (A, list of A-elements, gamma) where gamma in F is the image of
    A's generator.
    """
    Fp = F.base
    if r == 1:
        A = ExtensionRing(Fp, [0, 1], is_field=True, name="a")
        return A, [A(int(c.constant())) for c in coeffs], F.one
    candidates = list(coeffs)
    candidates += [c1 + k * c2 for k in range(1, 4) for c1 in coeffs for c2 in coeffs]
    gamma = mp = None
    for cand in candidates:
        mp = _minpoly_over_fp(F, cand, r)
        if mp is not None and is_squarefree(mp) and _fixed_degree(F, [cand], r) == r:
            gamma = cand
            break
    if gamma is None:
        raise DegenerateRay("no generator of the coefficient field found")
    A = ExtensionRing(Fp, mp, is_field=True, name="a")
    d = F.degree
    powers = [F.one]
    for _ in range(1, r):
        powers.append(powers[-1] * gamma)
    matrix = [[_coords_fp(w, d)[i] for w in powers] for i in range(d)]
    out = []
    for c in coeffs:
        sol = linalg.solve_unique(Fp, matrix, _coords_fp(c, d))
        out.append(A(sol))
    return A, out, gamma


def build_ray(curve, ell, cache=None, point_factor=None):
    """RayData for ell >= 5, ell != p.

    With no ``point_factor`` the torsion point is taken on a Frobenius
    eigenline when one exists, else from the least irreducible factor of
    psi_ell.
    """
    if ell < 5 or ell == curve.p:
        raise ValueError("ray construction needs ell >= 5 and ell != p")
    cache = cache or DivPolyCache(curve)
    n = (ell - 1) // 2
    psi = division_poly(cache, ell).monic()
    if not is_squarefree(psi):
        raise DegenerateRay("division polynomial is not squarefree")
    eigen = eigen_search(curve, ell, cache)
    if point_factor is None:
        point_factor = least_factor(eigen[1] if eigen else psi)
    kind = "elkies" if eigen else "atkin"
    F = ExtensionRing(curve.field, point_factor, is_field=True)
    d = F.degree
    xs = _x_multiples(curve, F.gen, n)
    X = Poly.x(F)
    E_F = Poly(F, [F.one])
    for xa in xs:
        E_F = E_F * (X - xa)
    if not is_squarefree(E_F):
        raise DegenerateRay("ray polynomial has repeated roots")
    r = _fixed_degree(F, E_F.coeffs, d)
    A, coeffs_A, gamma = _descend(F, list(E_F.coeffs), r)
    E_P = Poly(A, coeffs_A)
    c = least_primitive_root(ell)
    Bq = ExtensionRing(A, E_P, is_field=False)
    G_c = _x_map(curve, Bq.gen, c, division_values(curve, Bq.gen, c + 1)).lift() if c > 1 else Poly.x(A)
    B = CyclicAlgebra(E_P, G_c, check=True)
    return RayData(
        ell=ell,
        curve=curve,
        kind=kind,
        eigenvalue=eigen[0] if eigen else None,
        r=r,
        c=c,
        E_P=E_P,
        G_c=G_c,
        A=A,
        B=B,
        point_field=F,
        point_factor=point_factor,
        x_degree=d,
        gamma=gamma,
    )


# --------------------------------------------------------- modular polynomials


class ModularPolyTable(dict):
    """Mapping ell -> {(i, j): c} for Phi_ell = sum c X^i J^j."""

    def eval_at_j(self, ell, j, field_):
        """Phi_ell(X, j) as a Poly over ``field_``."""
        p = field_.p
        coeffs = [0] * (ell + 2)
        for (i, k), c in self[ell].items():
            coeffs[i] = (coeffs[i] + c * pow(j, k, p)) % p
        return Poly(field_, coeffs)


def default_modpoly_path():
    env = os.environ.get("SCHOOF_MODPOLY_PATH")
    if env:
        return env
    return str(resources.files("ellgauss") / "data" / "modpoly.txt")


def load_modular_polys(path=None):
    """Parse the ``ell N`` / ``i j c`` text format into a ModularPolyTable."""
    path = path or default_modpoly_path()
    table = ModularPolyTable()
    current = None
    header_line = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if parts[0] == "ell":
                if len(parts) != 2 or not parts[1].isdigit():
                    raise ParseError("malformed header", lineno)
                current = int(parts[1])
                table[current] = {}
                header_line[current] = lineno
                continue
            if current is None:
                raise ParseError("monomial before any 'ell' header", lineno)
            if len(parts) != 3:
                raise ParseError("expected 'i j c'", lineno)
            try:
                i, k, c = (int(v) for v in parts)
            except ValueError:
                raise ParseError("non-integer field", lineno) from None
            if i < 0 or k < 0:
                raise ParseError("negative exponent", lineno)
            table[current][(i, k)] = table[current].get((i, k), 0) + c
    for ell, mono in table.items():
        degx = max((i for i, _ in mono), default=-1)
        if degx != ell + 1 or any(mono.get((k, i)) != c for (i, k), c in mono.items()):
            raise ParseError(f"Phi_{ell} is not symmetric of degree {ell + 1}", header_line[ell])
    return table


def modular_factor_degrees(table, curve, ell):
    """Factor-degree pattern of Phi_ell(X, j(E)) over F_p, or None if unusable."""
    if ell not in table:
        return None
    j = curve.j_invariant
    if j in (0, 1728 % curve.p):
        log.info("skipping modular cross-check for j = %d", j)
        return None
    phi = table.eval_at_j(ell, j, curve.field)
    try:
        return factor_degree_pattern(phi)
    except NotSquarefree:
        log.info("Phi_%d(X, j) not squarefree mod %d; cross-check skipped", ell, curve.p)
        return None


def determine_r(curve, ell, table=None, ray=None):
    """Degree of the field of definition of the ray polynomial.

    When modular-polynomial data is supplied, r is checked against the
    factorization of Phi_ell(X, j): an Elkies ray needs a linear factor, an
    Atkin ray needs all factors of degree r.
    """
    ray = ray or build_ray(curve, ell)
    r = ray.r
    if table is not None:
        pattern = modular_factor_degrees(table, curve, ell)
        if pattern is not None:
            degrees = {d for d, _ in pattern}
            if ray.kind == "elkies":
                ok = r == 1 and 1 in degrees
            else:
                ok = degrees == {r}
            if not ok:
                raise MismatchError(f"r = {r} disagrees with Phi_{ell} pattern {pattern}")
    return r
