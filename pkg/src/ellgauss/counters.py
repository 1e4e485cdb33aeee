"""Operation counters.

Arithmetic routines bump named counters here so that benchmarks can report
how many base-field multiplications a computation used.  Counting is global
and cheap; use :func:`counting` to measure a block in isolation.
"""

from collections import Counter
from contextlib import contextmanager

COUNTS = Counter()


def bump(name, amount=1):
    COUNTS[name] += amount


def snapshot():
    return dict(COUNTS)


@contextmanager
def counting():
    """Yield a Counter that receives the increments made inside the block."""
    before = Counter(COUNTS)
    delta = Counter()
    try:
        yield delta
    finally:
        for key, value in COUNTS.items():
            diff = value - before.get(key, 0)
            if diff:
                delta[key] = diff
