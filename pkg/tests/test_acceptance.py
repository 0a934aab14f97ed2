"""Acceptance suite: runs ``optseq verify`` twice and grades criteria 1-10.

Each criterion prints one ``PASS``/``FAIL`` line (``pytest -s`` shows them).
Tolerances below are fixed; the report is re-checked against them rather
than trusting its own ``passed`` flags alone.
"""

import json
import subprocess
import sys

import pytest

LP_REL_TOL = 1e-6          # 1: all three estimates equal ||a||_p
ORACLE_REL_TOL = 0.02      # 3: search vs grid oracle
EXACT_TOL = 1e-9           # 6, 7, 8: exact constants and ratios
EQUAL_CASE_TOL = 1e-6      # 7: pairing equality at a = b for lp(2)
SEED = "20240917"

NAMES = {
    1: "lp exactness (rel 1e-6)",
    2: "embedding chain (abs 1e-9)",
    3: "oracle equivalence (rel 2%)",
    4: "index recovery (+-0.02 / 0.03 / 1e-6)",
    5: "classification table, no inconclusive verdicts",
    6: "criterion constants exactly 1 (+-1e-9)",
    7: "Holder pairing <= 1 + 1e-9, equality within 1e-6",
    8: "tensor ratios 1 +- 1e-9 on lp, bounded trends",
    9: "seqcore oracles",
    10: "determinism (byte-identical reports)",
}


def _verify(path):
    proc = subprocess.run([sys.executable, "-m", "optseq", "verify", "--seed", SEED,
                           "--out", str(path)], capture_output=True, text=True)
    return proc.returncode, path.read_bytes()


@pytest.fixture(scope="module")
def runs(tmp_path_factory):
    d = tmp_path_factory.mktemp("verify")
    first = _verify(d / "a.json")
    second = _verify(d / "b.json")
    return first, second


@pytest.fixture(scope="module")
def results(runs):
    doc = json.loads(runs[0][1])
    return {r["id"]: r for r in doc["results"]}


def _extra(cid, r):
    """Independent re-check of the pinned tolerances where the report has numbers."""
    d = r["detail"]
    if cid == 1:
        return d["worst_rel_err"] <= LP_REL_TOL
    if cid == 3:
        return d["worst_rel_err"] <= ORACLE_REL_TOL
    if cid == 4:
        return all(abs(row["mu"] - row["target"]) <= row["tol"]
                   and abs(row["nu"] - row["target"]) <= row["tol"] for row in d["rows"])
    if cid == 5:
        return all(not row["inconclusive_criteria"] for row in d["table"])
    if cid == 6:
        return all(row["max_err"] <= EXACT_TOL for row in d["rows"])
    if cid == 7:
        ok = all(row["max_ratio"] <= 1 + EXACT_TOL for row in d["rows"])
        lp2 = [row for row in d["rows"] if row["space"] == "lp:p=2"]
        return ok and len(lp2) == 1 and abs(lp2[0]["equal_case_ratio"] - 1) <= EQUAL_CASE_TOL
    if cid == 8:
        return d["lp_worst_err"] <= EXACT_TOL
    return True


@pytest.mark.parametrize("cid", range(1, 11))
def test_criterion(cid, runs, results):
    if cid == 10:
        ok = runs[0][1] == runs[1][1]
        detail = f"{len(runs[0][1])} bytes"
    else:
        r = results[cid]
        ok = r["passed"] and _extra(cid, r)
        detail = f"{r['checks']} checks, {r['failure_count']} failures"
        if r["failures"]:
            detail += f"; first: {r['failures'][0]}"
    print(f"{'PASS' if ok else 'FAIL'} {cid:2d} {NAMES[cid]} [{detail}]")
    assert ok


def test_verify_exit_code(runs):
    assert runs[0][0] == 0
