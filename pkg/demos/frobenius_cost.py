"""
Cost of Frobenius in the cyclotomic algebra
===========================================

For a fixed p, measures base-field multiplications for phi(alpha(theta))
computed in C, normalized by r^2, at Atkin primes of growing size, and fits
the growth rate on a log-log scale.
"""

# %%
import random

import numpy as np
from sympy import legendre_symbol

from ellgauss import Curve, brute_count
from ellgauss.atkin_gauss import build_cyclotomic, frobenius_costs, solve_iso
from ellgauss.ray import build_ray

p = 1009
rng = random.Random(1)
rows = []
for ell in (5, 7, 11, 13):
    while True:
        curve = Curve(p, rng.randrange(1, p), rng.randrange(1, p))
        t = p + 1 - brute_count(curve)
        disc = (t * t - 4 * p) % ell
        if disc and legendre_symbol(disc, ell) == -1:
            break
    ray = build_ray(curve, ell)
    iso = solve_iso(ray.B, build_cyclotomic(ray.A, ell, ray.c))
    costs = frobenius_costs(iso)
    rows.append((ell, ray.r, costs["route_i_frobenius"], costs["route_ii_powmod"]))
    print(f"ell={ell:2d} r={ray.r:2d} C-Frobenius={costs['route_i_frobenius']:6d} "
          f"B-powmod={costs['route_ii_powmod']:8d}")

# %%
ells = np.array([r[0] for r in rows], dtype=float)
norm = np.array([r[2] / r[1] ** 2 for r in rows], dtype=float)
slope = np.polyfit(np.log(ells), np.log(norm), 1)[0]
print(f"log-log slope of cost / r^2 against ell: {slope:.2f}")
