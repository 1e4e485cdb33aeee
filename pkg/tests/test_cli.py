import io
import json
import subprocess
import sys

import pytest

from ellgauss import cli, driver
from ellgauss.curve import Curve
from ellgauss.ray import build_ray


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.main(list(argv), out, err)
    records = [json.loads(line) for line in out.getvalue().splitlines() if line.strip()]
    return code, records, err.getvalue()


def strip_timing(records):
    def clean(x):
        if isinstance(x, dict):
            return {k: clean(v) for k, v in x.items() if k not in ("wall_time", "timing")}
        if isinstance(x, list):
            return [clean(v) for v in x]
        return x

    return [clean(r) for r in records]


def test_count_example():
    code, records, err = run("count", "--p", "5", "--a", "1", "--b", "1")
    assert code == 0
    out = records[0]["outputs"]
    assert out["count"] == 9 and out["t"] == -3
    assert records[0]["command"] == "count"
    assert set(records[0]) == {"command", "inputs", "outputs", "counters", "wall_time"}
    assert "#E = 9" in err


def test_count_json_suppresses_summary():
    code, _, err = run("count", "--p", "5", "--a", "1", "--b", "1", "--json")
    assert code == 0 and err == ""


def test_count_with_options():
    code, records, _ = run("count", "--p", "1993", "--a", "813", "--b", "1308", "--method", "gauss",
                           "--iso", "inductive", "--verify-oracle", "--ell-set", "3,5,7,11")
    assert code == 0
    out = records[0]["outputs"]
    assert out["oracle_checked"] and [r["ell"] for r in out["residues"]] == [3, 5, 7, 11]


def test_singular_curve_exit_1():
    code, records, _ = run("count", "--p", "5", "--a", "0", "--b", "0")
    assert code == 1
    assert records[0]["error"] == "SingularCurve"


def test_supersingular_exit_1():
    code, records, _ = run("count", "--p", "11", "--a", "1", "--b", "0")
    assert code == 1 and records[0]["error"] == "SupersingularCurve"


def test_trace_mod_gauss_example():
    code, records, _ = run("trace-mod", "--p", "5", "--a", "1", "--b", "1", "--ell", "7", "--method", "gauss")
    assert code == 0
    out = records[0]["outputs"]
    assert out["kind"] == "pm_pair" and out["values"] == [3, 4]


def test_trace_mod_gauss_on_elkies_prime():
    for a in range(1, 40):
        curve = Curve(101, a, 1)
        if build_ray(curve, 5).kind == "elkies":
            code, records, _ = run("trace-mod", "--p", "101", "--a", str(a), "--b", "1", "--ell", "5",
                                   "--method", "gauss")
            assert code == 1
            assert records[0]["error"] == "MethodInapplicable"
            assert "method inapplicable" in records[0]["message"]
            return
    pytest.fail("no Elkies prime found")


@pytest.mark.parametrize(
    "argv",
    [
        ["count", "--p", "5", "--a", "1"],
        ["count", "--p", "x", "--a", "1", "--b", "1"],
        ["frobnicate"],
        ["count", "--p", "5", "--a", "1", "--b", "1", "--method", "magic"],
        [],
    ],
)
def test_usage_errors_exit_3(argv):
    code, records, _ = run(*argv)
    assert code == 3
    assert records[0]["error"] == "UsageError"


def test_verify_sweep():
    code, records, err = run("verify", "--pmax", "300", "--curves", "5", "--seed", "1")
    assert code == 0
    summary = records[-1]["outputs"]
    assert summary == {**summary, "passed": 5, "failed": 0, "total": 5}
    assert sum(summary["method_coverage"].values()) > 0
    assert all(r["ok"] for r in records[:-1])
    assert "5/5 pass" in err


def test_verify_seed_determinism():
    a = run("verify", "--pmax", "300", "--curves", "3", "--seed", "4")[1]
    b = run("verify", "--pmax", "300", "--curves", "3", "--seed", "4")[1]
    assert strip_timing(a) == strip_timing(b)


def test_verify_zero_curves_warns():
    code, records, err = run("verify", "--curves", "0")
    assert code == 0
    assert "vacuous" in err
    assert records[-1]["outputs"]["total"] == 0


def test_verify_corrupted_build_exit_2(monkeypatch):
    monkeypatch.setattr(driver, "crt_assemble", lambda residues, curve, *a, **k: 1)
    code, records, _ = run("verify", "--pmax", "300", "--curves", "2", "--seed", "1")
    assert code == 2
    assert records[-1]["outputs"]["failed"] == 2


def test_count_oracle_mismatch_exit_2(monkeypatch):
    monkeypatch.setattr(driver, "crt_assemble", lambda residues, curve, *a, **k: 1)
    code, records, _ = run("count", "--p", "101", "--a", "2", "--b", "3", "--verify-oracle")
    assert code == 2 and records[0]["error"] == "OracleMismatch"


def test_bench_routes_agree():
    code, records, _ = run("bench", "--p", "1009", "--a", "404", "--b", "745", "--ell-set", "5,13", "--json")
    assert code == 0
    for rec in records:
        out = rec["outputs"]
        if "skipped" in out:
            continue
        assert out["equal"]
        assert out["route_i_frobenius"] < out["route_ii_powmod"]


def test_json_round_trip():
    _, records, _ = run("count", "--p", "211", "--a", "49", "--b", "183")
    for rec in records:
        assert json.loads(json.dumps(rec, sort_keys=True)) == rec


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "ellgauss", "count", "--p", "5", "--a", "1", "--b", "1", "--json"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["outputs"]["count"] == 9
