"""Elliptic curve point counting over prime fields.

Schoof's algorithm with the Elkies eigenvalue search and, at Atkin primes,
an explicit isomorphism between the ray algebra of an ell-torsion line and a
cyclotomic algebra, found from elliptic Gauss sums.
"""

from .curve import Curve, brute_count
from .driver import CountConfig, CountResult, TraceResidue, count_points, trace_mod
from .errors import EllGaussError

__version__ = "0.1.0"

__all__ = [
    "Curve",
    "brute_count",
    "CountConfig",
    "CountResult",
    "TraceResidue",
    "count_points",
    "trace_mod",
    "EllGaussError",
]
