import random
import re

import pytest

from ellgauss.curve import Curve, brute_count
from ellgauss.ray import build_ray

# (p, a, b, ell) instances known to be Atkin primes, mixing r and n shapes
ATKIN_CASES = [
    (5, 1, 1, 7),
    (107, 47, 77, 5),
    (107, 66, 49, 5),
    (211, 49, 183, 7),
    (1993, 813, 1308, 7),
    (211, 151, 139, 11),
    (107, 66, 49, 11),
    (401, 349, 14, 11),
    (211, 151, 139, 13),
    (1009, 404, 745, 13),
]

_RAYS = {}


def atkin_ray(case):
    if case not in _RAYS:
        p, a, b, ell = case
        curve = Curve(p, a, b)
        _RAYS[case] = (curve, build_ray(curve, ell))
    return _RAYS[case]


def oracle_trace(curve):
    return curve.p + 1 - brute_count(curve)


@pytest.fixture(params=ATKIN_CASES, ids=lambda c: "p{}_a{}_b{}_l{}".format(*c))
def atkin_case(request):
    curve, ray = atkin_ray(request.param)
    assert ray.kind == "atkin"
    return curve, ray


@pytest.fixture
def rng():
    return random.Random(20240611)


# one line per acceptance criterion, printed after the run
ACCEPTANCE = {}


def record_acceptance(number, ok, detail):
    ACCEPTANCE[number] = (ok, detail)


def pytest_terminal_summary(terminalreporter):
    outcomes = {}
    for key in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(key, []):
            m = re.search(r"test_acceptance\.py::test_criterion_(\d+)_", getattr(rep, "nodeid", ""))
            if m and (rep.when == "call" or key != "passed"):
                outcomes[int(m.group(1))] = key == "passed" and outcomes.get(int(m.group(1)), True)
    if not outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(outcomes):
        ok, detail = ACCEPTANCE.get(number, (False, "no result recorded"))
        verdict = "PASS" if ok and outcomes[number] else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {verdict}  {detail}")
