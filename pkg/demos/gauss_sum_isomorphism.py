"""
The Gauss-sum isomorphism at an Atkin prime
===========================================

Builds the ray algebra B of an Atkin prime, the cyclotomic algebra C of the
same shape, and the explicit isomorphism between them.  Frobenius is then
applied inside C, where it only permutes exponents, and the trace relation
picks out t up to sign.
"""

# %%
from ellgauss import Curve, brute_count
from ellgauss.atkin_gauss import (
    build_cyclotomic,
    check_isomorphic_shape,
    frobenius_costs,
    solve_iso_direct,
    solve_iso_inductive,
    trace_relation_residues,
    verify_iso,
)
from ellgauss.polynomials import factor_degree_pattern
from ellgauss.ray import build_ray

curve = Curve(1993, 813, 1308)
ell = 7
ray = build_ray(curve, ell)
print("kind:", ray.kind, " r =", ray.r, " n =", ray.n, " [A : F_p] =", ray.A.degree)

# %%
# The cyclotomic algebra has the same factor-degree pattern as E_P.
C = build_cyclotomic(ray.A, ell, ray.c)
print("E_P pattern:", factor_degree_pattern(ray.E_P))
print("K pattern:  ", factor_degree_pattern(C.K))
print("same shape:", check_isomorphic_shape(ray.B, C))

# %%
# Two ways to solve for the isomorphism: one system of size n, or the
# prime-power pieces glued together.  They differ by a power of sigma.
direct = solve_iso_direct(ray.B, C)
inductive = solve_iso_inductive(ray.B, C)
print("direct verifies:", verify_iso(direct), " inductive verifies:", verify_iso(inductive))
shift = next(k for k in range(ray.n) if direct.compose_sigma(k).b == inductive.b)
print("inductive = sigma^%d o direct" % shift)

# %%
# The trace relation, evaluated through the isomorphism, leaves {t, -t} mod ell.
t = curve.p + 1 - brute_count(curve)
print("residues:", sorted(trace_relation_residues(curve, ell, direct)))
print("t mod ell:", t % ell, " -t mod ell:", -t % ell)

# %%
# Frobenius in C against raising theta to the p-th power in B.
print(frobenius_costs(direct))
