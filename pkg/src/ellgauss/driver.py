"""Point counting: per-prime traces and their Chinese-remainder assembly.

For each small odd prime ell != p the trace t of Frobenius is determined
modulo ell by one of four routes:

* ``baseline``: the classical Schoof computation modulo the full division
  polynomial (always used for ell = 3);
* ``elkies``: an eigenvalue search on an eigenline ray (exact residue);
* ``gauss``: the Gauss-sum isomorphism route on an Atkin ray (a +-pair);
* ``atkin_classical``: the candidate set from the order of the eigenvalue
  ratio in F_(ell^2).

The residues are combined over the Hasse interval; remaining sign ambiguity
is settled by checking which group order kills random points.
"""

from __future__ import annotations

import logging
import random
import time
from dataclasses import dataclass, field
from math import gcd as igcd, isqrt
from typing import Any, Optional

from sympy import legendre_symbol, nextprime, primefactors, sqrt_mod

from .atkin_gauss import build_cyclotomic, check_isomorphic_shape, determine_trace, solve_iso
from .counters import counting
from .curve import (
    INFINITY,
    Curve,
    DivPolyCache,
    brute_count,
    division_poly,
    division_values,
    hasse_bound,
    mult_map_values,
    scalar_mul,
)
from .errors import (
    Ambiguous,
    BasisDegenerate,
    DegenerateFrobenius,
    DegenerateRay,
    EllGaussError,
    MethodInapplicable,
    NoCandidate,
    NoEigenvalue,
    NormalBasisFailure,
    NotInvertible,
    OracleBudgetExceeded,
    OracleMismatch,
    PrecondViolated,
    ResolventNotInvertible,
    SupersingularCurve,
)
from .fields import ExtensionRing, PrimeField
from .polynomials import factor_degree_pattern, gcd

log = logging.getLogger(__name__)

METHODS = ("auto", "gauss", "classical", "baseline")
ORACLE_LIMIT = 10**6

# failures of the Gauss route that send a prime down the fallback ladder
GAUSS_FAILURES = (
    NormalBasisFailure,
    ResolventNotInvertible,
    BasisDegenerate,
    DegenerateFrobenius,
    DegenerateRay,
    PrecondViolated,
    NotInvertible,
)


@dataclass
class TraceResidue:
    ell: int
    kind: str  # "exact", "pm_pair" or "candidate_set"
    values: tuple
    method: str  # "gauss", "elkies", "atkin_classical" or "baseline"
    classification: str = "special"  # or "elkies", "atkin", "unclassified"
    r: Optional[int] = None
    pattern: Optional[list] = None
    root_choices: Optional[dict] = None
    notes: list = field(default_factory=list)

    def __post_init__(self):
        self.values = tuple(sorted({v % self.ell for v in self.values}))
        if not self.values:
            raise ValueError("a trace residue needs at least one value")

    def contains(self, t):
        return t % self.ell in self.values

    def as_json(self):
        out = {
            "ell": self.ell,
            "kind": self.kind,
            "values": list(self.values),
            "method": self.method,
            "classification": self.classification,
        }
        if self.r is not None:
            out["r"] = self.r
        if self.pattern is not None:
            out["pattern"] = [list(x) for x in self.pattern]
        if self.root_choices is not None:
            out["root_choices"] = {str(k): list(v) for k, v in self.root_choices.items()}
        if self.notes:
            out["notes"] = list(self.notes)
        return out


@dataclass
class CountConfig:
    method: str = "auto"
    ells: Optional[list] = None
    seed: int = 0
    verify_oracle: bool = False
    n_points: int = 5
    iso_method: str = "direct"
    modpoly: Any = None  # a ModularPolyTable for the r cross-check

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")


@dataclass
class CountResult:
    curve: Curve
    t: int
    residues: list
    timing: dict
    counters: dict
    oracle_checked: bool = False

    @property
    def count(self):
        return self.curve.p + 1 - self.t

    def as_json(self):
        return {
            "p": self.curve.p,
            "a": self.curve.a,
            "b": self.curve.b,
            "count": self.count,
            "t": self.t,
            "residues": [r.as_json() for r in self.residues],
            "oracle_checked": self.oracle_checked,
            "timing": self.timing,
            "counters": self.counters,
        }


# ------------------------------------------------------------ classification


def classify(curve, ell, ray=None):
    """'elkies', 'atkin' or 'special' (ell = 3 or a degenerate ray)."""
    if ell == curve.p:
        raise ValueError("ell must differ from p")
    if ell == 3:
        return "special"
    if ray is None:
        from .ray import build_ray

        try:
            ray = build_ray(curve, ell)
        except DegenerateRay:
            return "special"
    return ray.kind


def expected_kind(t, p, ell):
    """Classification implied by the discriminant t^2 - 4p (after the fact)."""
    s = legendre_symbol((t * t - 4 * p) % ell, ell) if (t * t - 4 * p) % ell else 0
    return "atkin" if s == -1 else "elkies"


# ------------------------------------------------------------ per-prime routes


def elkies_trace(curve, ell, ray):
    """Exact t mod ell from the eigenvalue of Frobenius on the ray."""
    if ray.kind != "elkies" or ray.r != 1:
        raise PrecondViolated("Elkies route needs an eigenline ray")
    p = curve.p
    B = ray.B
    theta = B.theta
    phi = theta ** p
    n = ray.n
    f = curve.rhs(theta)
    fy = f ** ((p - 1) // 2)
    vals = division_values(curve, theta, 2 * n + 2)
    for lam in range(1, n + 1):
        G, H = mult_map_values(curve, theta, lam, vals)
        if G != phi:
            continue
        if H == fy:
            eig = lam
        elif H == -fy:
            eig = ell - lam
        else:
            raise NoEigenvalue("y-coordinates disagree on the eigenline")
        t = (eig + p * pow(eig, -1, ell)) % ell
        return TraceResidue(ell, "exact", (t,), "elkies", "elkies", r=1,
                            notes=[f"eigenvalue {eig}"])
    raise NoEigenvalue(f"no eigenvalue found for ell = {ell}")


def _fl2(ell):
    """F_(ell^2) as F_ell[s]/(s^2 - d) with d the least non-residue."""
    d = 2
    while legendre_symbol(d, ell) != -1:
        d += 1
    Fl = PrimeField(ell)
    return ExtensionRing(Fl, [(-d) % ell, 0, 1], is_field=True, name="s")


def atkin_classical(curve, ell, ray):
    """Candidates t with t^2 = p (g + 2 + 1/g) for g of exact order r in F_(ell^2)."""
    if ray.kind != "atkin":
        raise PrecondViolated("classical Atkin candidates need an Atkin ray")
    r = ray.r
    p = curve.p
    K = _fl2(ell)
    order = ell * ell - 1
    if order % r:
        raise PrecondViolated(f"r = {r} does not divide ell^2 - 1")
    # a generator of the cyclic group of order r
    rng = random.Random(ell * 1000 + r)
    while True:
        g = K.random_element(rng)
        if g.is_zero():
            continue
        h = g ** (order // r)
        if all(h ** (r // q) != K.one for q in primefactors(r)):
            break
    values = set()
    for e in range(1, r + 1):
        if igcd(e, r) != 1:
            continue
        gam = h ** e
        s = (gam + gam.inverse() + 2) * p
        if not s.is_constant():
            continue
        s0 = int(s.constant())
        roots = sqrt_mod(s0, ell, all_roots=True) if s0 else [0]
        values.update(int(v) for v in roots)
    if not values:
        raise NoCandidate("no classical Atkin candidates")
    return TraceResidue(ell, "candidate_set", tuple(values), "atkin_classical", "atkin", r=r)


def _baseline_on(curve, ell, modulus):
    """Schoof's relation modulo a factor of psi_ell; returns t or None if degenerate."""
    p = curve.p
    R = ExtensionRing(curve.field, modulus, is_field=False, name="x")
    x = R.gen
    f = curve.rhs(x)
    xp = x ** p
    xp2 = xp ** p
    fy1 = f ** ((p - 1) // 2)
    fy2 = fy1 * fy1 ** p  # f^((p^2-1)/2)
    k = p % ell
    kk = min(k, ell - k)
    Gk, Hk = mult_map_values(curve, x, kk)
    if kk != k:
        Hk = -Hk
    Af = xp2 - Gk
    if Af.is_zero():
        if fy2 == -Hk:
            return 0
        if fy2 == Hk:
            # phi^2 = p on E[ell]: phi is a scalar w with w^2 = p and t = 2w
            for w in range(1, ell):
                if w * w % ell != p % ell:
                    continue
                G, H = mult_map_values(curve, x, min(w, ell - w))
                if w > ell - w:
                    H = -H
                if G == xp and H == fy1:
                    return 2 * w % ell
            raise NoEigenvalue("scalar Frobenius without matching eigenvalue")
        raise DegenerateFrobenius("mixed y-coordinates for phi^2 = +-p")
    try:
        Ainv = Af.inverse()
    except NotInvertible:
        return None
    L = (fy2 - Hk) * Ainv
    X3 = f * L * L - xp2 - Gk
    Y3 = L * (xp2 - X3) - fy2  # y-part, divided by y
    n = (ell - 1) // 2
    vals = division_values(curve, xp, 2 * n + 2)
    for t in range(1, n + 1):
        G, H = mult_map_values(curve, xp, t, vals)
        if G != X3:
            continue
        Ht = fy1 * H
        if Ht == Y3:
            return t
        if Ht == -Y3:
            return ell - t
        raise NoCandidate("y-coordinate matches neither sign")
    raise NoCandidate(f"no trace found modulo {ell}")


def baseline_schoof(curve, ell, cache=None):
    """Exact t mod ell from the characteristic equation modulo psi_ell."""
    cache = cache or DivPolyCache(curve)
    psi = division_poly(cache, ell).monic()
    t = _baseline_on(curve, ell, psi)
    if t is None:
        # split off the points where phi^2(P) = +-pP and work on the rest
        p = curve.p
        R = ExtensionRing(curve.field, psi, is_field=False)
        x = R.gen
        Gk, _ = mult_map_values(curve, x, min(p % ell, ell - p % ell))
        g = gcd(psi, ((x ** p) ** p - Gk).lift())
        rest = psi // g
        t = _baseline_on(curve, ell, rest if rest.degree > 0 else g.monic())
        if t is None:
            raise DegenerateFrobenius("baseline relation degenerate on every factor")
    return TraceResidue(ell, "exact", (t,), "baseline", "special" if ell == 3 else "unclassified")


# ------------------------------------------------------------------ assembly


def _twist(curve):
    p = curve.p
    d = 2
    while legendre_symbol(d, p) != -1:
        d += 1
    return Curve(p, curve.a * d * d % p, curve.b * d * d * d % p)


def _kills(curve, order, points):
    return all(scalar_mul(curve, order, P) == INFINITY for P in points)


def crt_assemble(residues, curve, rng=None, n_points=5, max_points=40):
    """The unique t in the Hasse interval consistent with all residues."""
    if not residues:
        raise Ambiguous("no residues to assemble")
    p = curve.p
    rng = rng or random.Random(0)
    H = hasse_bound(p)
    survivors = [t for t in range(-H, H + 1) if all(r.contains(t) for r in residues)]
    if not survivors:
        raise Ambiguous("no trace in the Hasse interval fits the residues")
    points = []
    while len(survivors) > 1 and len(points) < max_points:
        batch = [curve.random_point(rng) for _ in range(n_points if not points else 5)]
        points += batch
        survivors = [t for t in survivors if _kills(curve, p + 1 - t, batch)]
    if len(survivors) > 1:
        tw = _twist(curve)
        tw_points = [tw.random_point(rng) for _ in range(max_points)]
        survivors = [t for t in survivors if _kills(tw, p + 1 + t, tw_points)]
    if len(survivors) != 1:
        raise Ambiguous(f"random points leave candidates {survivors}")
    return survivors[0]


# --------------------------------------------------------------- scheduling


def prime_schedule(p):
    """Ascending odd primes != p until their product exceeds 4 sqrt(p)."""
    bound = 4 * isqrt(p) + 4
    out = []
    prod = 1
    ell = 2
    while prod <= bound:
        ell = int(nextprime(ell))
        if ell == p:
            continue
        out.append(ell)
        prod *= ell
    return out


def trace_mod(curve, ell, method="auto", iso_method="direct", modpoly=None, cache=None,
              strict=True):
    """TraceResidue for one prime, following the method and fallback rules.

    With ``method="gauss"`` an Elkies prime is an error when ``strict``;
    otherwise it takes the Elkies route (forcing only concerns Atkin primes).
    """
    from .ray import build_ray, determine_r

    if ell == curve.p or ell < 3 or ell % 2 == 0:
        raise PrecondViolated("ell must be an odd prime different from p")
    cache = cache or DivPolyCache(curve)
    if ell == 3 or method == "baseline":
        res = baseline_schoof(curve, ell, cache)
        if ell == 3:
            res.notes.append("ell = 3 always uses the baseline relation")
        return res
    try:
        ray = build_ray(curve, ell, cache)
    except DegenerateRay as exc:
        if method == "gauss":
            raise
        res = baseline_schoof(curve, ell, cache)
        res.notes.append(f"ray degenerate ({exc}); baseline used")
        return res
    if modpoly is not None:
        determine_r(curve, ell, modpoly, ray)
    pattern = factor_degree_pattern(ray.E_P)
    if ray.kind == "elkies":
        if method == "gauss" and strict:
            raise MethodInapplicable(f"ell = {ell} is an Elkies prime; method inapplicable")
        res = elkies_trace(curve, ell, ray)
        res.pattern = pattern
        return res
    if method in ("auto", "gauss"):
        try:
            C = build_cyclotomic(ray.A, ell, ray.c)
            if not check_isomorphic_shape(ray.B, C):
                raise NormalBasisFailure("ray and cyclotomic algebras differ in shape")
            iso = solve_iso(ray.B, C, iso_method)
            values = determine_trace(curve, ell, iso)
            kind = "exact" if values == {0} else "pm_pair"
            return TraceResidue(ell, kind, tuple(values), "gauss", "atkin", r=ray.r,
                                pattern=pattern, root_choices=iso.root_choices)
        except GAUSS_FAILURES as exc:
            if method == "gauss":
                raise
            log.info("Gauss route failed at ell = %d (%s); classical fallback", ell, exc)
            res = atkin_classical(curve, ell, ray)
            res.pattern = pattern
            res.notes.append(f"gauss route failed: {type(exc).__name__}")
            return res
    res = atkin_classical(curve, ell, ray)
    res.pattern = pattern
    return res


def count_points(curve, config=None):
    """#E(F_p) by Schoof-type residues and CRT assembly."""
    config = config or CountConfig()
    p = curve.p
    ells = config.ells or prime_schedule(p)
    cache = DivPolyCache(curve)
    residues = []
    timing = {}
    with counting() as ops:
        start = time.perf_counter()
        for ell in ells:
            if ell == p:
                continue
            t0 = time.perf_counter()
            residues.append(trace_mod(curve, ell, config.method, config.iso_method, config.modpoly, cache, strict=False))
            timing[f"ell_{ell}"] = round(time.perf_counter() - t0, 4)
        rng = random.Random(config.seed)
        t = crt_assemble(residues, curve, rng, config.n_points)
        timing["total"] = round(time.perf_counter() - start, 4)
    for res in residues:
        if res.classification in ("elkies", "atkin") and expected_kind(t, p, res.ell) != res.classification:
            res.notes.append("discriminant classification disagrees")
    if t == 0:
        raise SupersingularCurve(f"trace 0: y^2 = x^3 + {curve.a}x + {curve.b} over F_{p} is supersingular")
    result = CountResult(curve, t, residues, timing, dict(ops))
    if config.verify_oracle:
        try:
            expected = brute_count(curve)
        except OracleBudgetExceeded:
            expected = None
        if expected is not None:
            if expected != result.count:
                raise OracleMismatch(f"pipeline {result.count} vs exhaustive {expected}")
            result.oracle_checked = True
    return result


def random_curve(rng, pmin=5, pmax=2000, allow_supersingular=False):
    """A pseudorandom non-singular curve; supersingular ones are skipped via the oracle."""
    from sympy import primerange

    primes = list(primerange(max(pmin, 5), pmax + 1))
    while True:
        p = rng.choice(primes)
        a, b = rng.randrange(p), rng.randrange(p)
        if (4 * a**3 + 27 * b**2) % p == 0:
            continue
        curve = Curve(p, a, b)
        if not allow_supersingular and brute_count(curve) == p + 1:
            continue
        return curve


__all__ = [
    "TraceResidue",
    "CountConfig",
    "CountResult",
    "classify",
    "expected_kind",
    "elkies_trace",
    "atkin_classical",
    "baseline_schoof",
    "crt_assemble",
    "prime_schedule",
    "trace_mod",
    "count_points",
    "random_curve",
    "EllGaussError",
]
