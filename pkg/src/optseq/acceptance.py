"""The acceptance suite behind ``optseq verify``.

Each check returns a :class:`CheckResult`. Everything is seeded and no
timings are recorded, so the JSON report is byte-identical across runs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .criteria import (DIVERGES, HOLDS, INCONCLUSIVE, classify_optimal_spaces,
                       holder_pairing_check, lorentz_assump_constant,
                       lorentz_did_ratio, orlicz_submultiplicative_constant,
                       orlicz_supermultiplicative_constant, tensor_inequality_check)
from .config import RunConfig
from .fundidx import fundamental_indices, lorentz_indices, orlicz_indices
from .optimal import (LOWER_BOUND_OF_SUP, UPPER_BOUND_OF_INF, SearchConfig,
                      brute_force_oracle, lower_norm_estimate, phi_n_estimate,
                      upper_norm_estimate)
from .seqcore import rearrange, tensor, tensor_blocks, top_k_products
from .spaces import (OrliczGenerator, WeightGenerator, l1_norm, lorentz, lp,
                     lpq, norm, orlicz, sup_norm)

W = WeightGenerator
O = OrliczGenerator

# light budgets; the property being checked does not depend on search depth
EXACT_SEARCH = SearchConfig(L_max=3, restarts=2, max_evals=60, enum_cap=16,
                            refine_top=1, partition_n_max=8)
CHAIN_SEARCH = SearchConfig(L_max=2, restarts=1, max_evals=30, enum_cap=8,
                            refine_top=1, partition_n_max=6)
ORACLE_SEARCH = SearchConfig(L_max=2, restarts=4, max_evals=300, enum_cap=64,
                             refine_top=8)


@dataclass
class CheckResult:
    id: int
    name: str
    passed: bool
    checks: int = 0
    failures: list = field(default_factory=list)
    detail: dict = field(default_factory=dict)

    def fail(self, message: str) -> None:
        self.failures.append(message)

    def close(self) -> CheckResult:
        self.passed = not self.failures
        return self

    def to_json(self) -> dict:
        return {"id": self.id, "name": self.name, "passed": self.passed,
                "checks": self.checks, "failures": self.failures[:20],
                "failure_count": len(self.failures), "detail": self.detail}


def chain_spaces() -> list:
    """One representative of every implemented family and variant."""
    return [
        lp(1), lp(2), lp(np.inf),
        lpq(2, 1), lpq(2, 3), lpq(3, np.inf),
        lorentz(2, W.power(0.5)), lorentz(1, W.invlog()), lorentz(2, W.constant()),
        orlicz(O.power(3)), orlicz(O.powerlog(2, 1)), orlicz(O.powerlog(2, -1)),
    ]


def _rel(x: float, y: float) -> float:
    return abs(x - y) / max(abs(y), 1e-300)


# 1 -------------------------------------------------------------------------


def check_lp_exactness(cfg: RunConfig, vectors: int = 50) -> CheckResult:
    res = CheckResult(1, "lp exactness of upper, Phi_n and lower estimates", False)
    rng = np.random.default_rng(cfg.seed)
    worst = 0.0
    for p in (1.0, 1.5, 2.0, 3.0):
        space = lp(p)
        for _ in range(vectors):
            a = rng.random(int(rng.integers(1, 17)))
            exact = norm(space, a)
            up = upper_norm_estimate(space, a, EXACT_SEARCH)
            ph = phi_n_estimate(space, a, EXACT_SEARCH)
            lo = lower_norm_estimate(space, a, EXACT_SEARCH, phi=ph)
            for name, est in (("upper", up), ("phi", ph), ("lower", lo)):
                err = _rel(est.value, exact)
                worst = max(worst, err)
                res.checks += 1
                if err > 1e-6:
                    res.fail(f"p={p} n={a.size} {name}: rel err {err:.3g}")
    res.detail = {"worst_rel_err": worst, "tolerance": 1e-6}
    return res.close()


# 2 -------------------------------------------------------------------------


def check_embedding_chain(cfg: RunConfig, vectors: int = 200) -> CheckResult:
    res = CheckResult(2, "embedding chain at estimate level", False)
    rng = np.random.default_rng(cfg.seed + 2)
    for space in chain_spaces():
        for _ in range(vectors):
            a = rng.random(int(rng.integers(1, 7))) * rng.choice([1.0, 0.01, 100.0])
            up = upper_norm_estimate(space, a, CHAIN_SEARCH)
            ph = phi_n_estimate(space, a, CHAIN_SEARCH)
            lo = lower_norm_estimate(space, a, CHAIN_SEARCH, phi=ph)
            u = up.require(LOWER_BOUND_OF_SUP)
            f = ph.require(UPPER_BOUND_OF_INF)
            low = lo.require(UPPER_BOUND_OF_INF)
            s, l1 = sup_norm(a), l1_norm(a)
            res.checks += 1
            ok = (s - 1e-9 * s <= low <= f * (1 + 1e-12)
                  and f <= min(u, l1) * (1 + 1e-9) + 1e-12
                  and u <= l1 * (1 + 1e-9))
            if not ok:
                res.fail(f"{space.describe()} n={a.size}: sup={s:.6g} lower={low:.6g} "
                         f"phi={f:.6g} upper={u:.6g} l1={l1:.6g}")
    res.detail = {"spaces": [s.describe() for s in chain_spaces()],
                  "vectors_per_space": vectors}
    return res.close()


# 3 -------------------------------------------------------------------------


def check_oracle(cfg: RunConfig) -> CheckResult:
    res = CheckResult(3, "search estimates against the grid oracle", False)
    rng = np.random.default_rng(cfg.seed + 3)
    worst = 0.0
    for space in chain_spaces():
        cases = [np.ones(1), np.array([1.0, 0.0]), np.ones(2), np.ones(3)]
        cases += [rng.random(int(rng.integers(2, 4))) for _ in range(2)]
        for a in cases:
            omax, omin = brute_force_oracle(space, a, L_max=2, resolution=50)
            up = upper_norm_estimate(space, a, ORACLE_SEARCH).value
            ph = phi_n_estimate(space, a, ORACLE_SEARCH).value
            for name, est, ref in (("upper", up, omax), ("phi", ph, omin)):
                err = _rel(est, ref)
                worst = max(worst, err)
                res.checks += 1
                if err > 0.02:
                    res.fail(f"{space.describe()} a={a.tolist()} {name}: "
                             f"{est:.6g} vs oracle {ref:.6g}")
    res.detail = {"worst_rel_err": worst, "tolerance": 0.02}
    return res.close()


# 4 -------------------------------------------------------------------------


def check_indices(cfg: RunConfig) -> CheckResult:
    res = CheckResult(4, "fundamental index recovery", False)
    rows = []

    def expect(label, est_pair, target, tol):
        mu, nu = est_pair
        res.checks += 1
        rows.append({"case": label, "mu": mu.value, "nu": nu.value,
                     "target": target, "tol": tol, "method": mu.method})
        for name, e in (("mu", mu), ("nu", nu)):
            if abs(e.value - target) > tol:
                res.fail(f"{label} {name}={e.value:.6g}, expected {target:.6g} +- {tol}")

    for alpha in (0.5, 0.8):
        for q in (1.0, 2.0):
            space = lorentz(q, W.power(alpha))
            expect(space.describe(), fundamental_indices(space, cfg.n_cap, cfg.m_cap),
                   alpha / q, 0.02)
            expect(space.describe() + " (partial sums)",
                   lorentz_indices(q, W.power(alpha), cfg.n_cap, cfg.m_cap),
                   alpha / q, 0.02)
    for q in (1.0, 2.0):
        space = lorentz(q, W.invlog())
        fi = fundamental_indices(space, cfg.n_cap, cfg.m_cap)
        li = lorentz_indices(q, W.invlog(), cfg.n_cap, cfg.m_cap)
        expect(space.describe(), fi, 1.0 / q, 0.03)
        expect(space.describe() + " (partial sums)", li, 1.0 / q, 0.03)
        res.checks += 1
        if abs(fi[0].value - li[0].value) > 0.01 or abs(fi[1].value - li[1].value) > 0.01:
            res.fail(f"{space.describe()}: dilation and partial-sum indices differ")
    for p in (2.0, 3.0):
        for a in (-1.0, 0.0, 1.0):
            N = O.powerlog(p, a)
            expect(N.describe(), orlicz_indices(N, cfg.grid), 1.0 / p, 0.02)
    for p in (1.0, 1.5, 2.0, 3.0):
        expect(f"lp:p={p:g}", fundamental_indices(lp(p), cfg.n_cap, cfg.m_cap),
               1.0 / p, 1e-6)
    res.detail = {"rows": rows}
    return res.close()


# 5 -------------------------------------------------------------------------


def _lp_exponent(text: str):
    return float(text.split("=", 1)[1]) if text.startswith("lp:") else None


def check_classification(cfg: RunConfig) -> CheckResult:
    res = CheckResult(5, "classification table", False)
    ccfg = cfg.classify()
    table = []

    def run(space):
        rep = classify_optimal_spaces(space, ccfg)
        table.append({k: rep[k] for k in ("space", "X_U", "X_L", "status",
                                          "inconclusive_criteria")})
        res.checks += 1
        if rep["status"] == INCONCLUSIVE or rep["inconclusive_criteria"]:
            res.fail(f"{space.describe()}: inconclusive ({rep['notes']}, "
                     f"{rep['inconclusive_criteria']})")
        return rep

    def has_lp(ids, r, tol=0.05):
        return any(_lp_exponent(t) is not None
                   and (_lp_exponent(t) == r or abs(_lp_exponent(t) - r) <= tol)
                   for t in ids)

    def verdict_of(rep, prefix):
        return next(c for c in rep["criteria"] if c["id"].startswith(prefix))

    for p, q in ((2, 1), (3, 2), (2, 3), (3, np.inf), (1.5, 4)):
        rep = run(lpq(p, q))
        if not (has_lp(rep["X_U"], min(p, q), 0) and has_lp(rep["X_L"], max(p, q), 0)):
            res.fail(f"lpq({p},{q}): got {rep['X_U']} / {rep['X_L']}")

    for q in (1.0, 2.0):
        for alpha in (0.5, 0.8):
            rep = run(lorentz(q, W.power(alpha)))
            assump = verdict_of(rep, "lorentz_assump")
            did = verdict_of(rep, "lorentz_did")
            if not has_lp(rep["X_U"], q, 0):
                res.fail(f"power({alpha}) q={q}: X_U {rep['X_U']}")
            if not has_lp(rep["X_L"], q / alpha, 1e-9):
                res.fail(f"power({alpha}) q={q}: X_L {rep['X_L']}")
            if not (assump["verdict"] == HOLDS and assump["constant"] <= 1.05):
                res.fail(f"power({alpha}) q={q}: dilation condition {assump['verdict']}")
            if did["verdict"] != DIVERGES:
                res.fail(f"power({alpha}) q={q}: product condition {did['verdict']}")
        rep = run(lorentz(q, W.invlog()))
        if verdict_of(rep, "lorentz_did")["verdict"] != HOLDS:
            res.fail(f"invlog q={q}: product condition not bounded")
        if verdict_of(rep, "lorentz_assump")["verdict"] != DIVERGES:
            res.fail(f"invlog q={q}: dilation condition not diverging")
        if not has_lp(rep["X_U"], q, 0) or rep["X_L"] != [rep["space"]]:
            res.fail(f"invlog q={q}: got {rep['X_U']} / {rep['X_L']}")

    for p in (2.0, 3.0):
        for a in (1.0, 0.0, -1.0):
            rep = run(orlicz(O.powerlog(p, a)))
            me = rep["space"]
            if a >= 0 and not (me in rep["X_U"] and has_lp(rep["X_L"], p)):
                res.fail(f"{me}: expected X_U = l_N, X_L = l_p; got "
                         f"{rep['X_U']} / {rep['X_L']}")
            if a <= 0 and not (me in rep["X_L"] and has_lp(rep["X_U"], p)):
                res.fail(f"{me}: expected X_L = l_N, X_U = l_p; got "
                         f"{rep['X_U']} / {rep['X_L']}")
    rep = run(orlicz(O.powerlog(1.0, -1.0)))
    if not has_lp(rep["X_U"], 1.0):
        res.fail(f"powerlog(1,-1): expected X_U = l_1, got {rep['X_U']}")
    res.detail = {"table": table}
    return res.close()


# 6 -------------------------------------------------------------------------


def check_constants(cfg: RunConfig) -> CheckResult:
    res = CheckResult(6, "criterion constants with exact values", False)
    rule = cfg.rule()
    rows = []

    def exact(label, report, target=1.0, tol=1e-9):
        res.checks += 1
        err = max(abs(v - target) for v in report.trend)
        rows.append({"case": label, "constant": report.constant, "max_err": err})
        if err > tol:
            res.fail(f"{label}: trend {report.trend} not {target} +- {tol}")

    for p in (1.0, 2.0, 3.0):
        N = O.power(p)
        exact(f"sub {N.describe()}", orlicz_submultiplicative_constant(N, cfg.grid, rule=rule))
        exact(f"super {N.describe()}", orlicz_supermultiplicative_constant(N, cfg.grid, rule=rule))
    for alpha in (0.5, 0.8):
        for q in (1.0, 2.0):
            exact(f"assump power({alpha}) q={q}",
                  lorentz_assump_constant(q, W.power(alpha), alpha / q, cfg.assump_n,
                                          (10, 100, 1000, cfg.l_cap), rule))
    exact("did constant", lorentz_did_ratio(W.constant(), (100, 1000, 10_000), rule),
          tol=0.0)
    res.detail = {"rows": rows}
    return res.close()


# 7 -------------------------------------------------------------------------


def check_holder(cfg: RunConfig) -> CheckResult:
    res = CheckResult(7, "Holder pairing against identified optimal spaces", False)
    rows = []
    for space in (lp(2), lpq(3, 1), lpq(2, np.inf)):
        rep = holder_pairing_check(space, cfg.pairing_samples, cfg.seed)
        res.checks += 1
        rows.append({"space": space.describe(), "max_ratio": rep.constant,
                     "equal_case_ratio": rep.provenance["equal_case_ratio"]})
        if rep.constant > 1.0 + 1e-9:
            res.fail(f"{space.describe()}: max ratio {rep.constant!r}")
        if space.family == "lp" and abs(rep.provenance["equal_case_ratio"] - 1.0) > 1e-6:
            res.fail("lp(2): equality not attained at a = b")
    res.detail = {"rows": rows}
    return res.close()


# 8 -------------------------------------------------------------------------


def check_tensor(cfg: RunConfig) -> CheckResult:
    res = CheckResult(8, "tensor product inequalities", False)
    rng = np.random.default_rng(cfg.seed + 8)
    worst = 0.0
    for p in (1.0, 1.5, 2.0, 3.0, np.inf):
        space = lp(p)
        for _ in range(50):
            a = rng.random(int(rng.integers(1, 20)))
            b = rng.random(int(rng.integers(1, 20)))
            r = norm(space, tensor(a, b)) / (norm(space, a) * norm(space, b))
            worst = max(worst, abs(r - 1.0))
            res.checks += 1
    if worst > 1e-9:
        res.fail(f"lp tensor ratio off by {worst:.3g}")
    rule = cfg.rule()
    rows = []
    for N, direction in ((O.powerlog(2, 1), "upper"), (O.powerlog(2, -1), "lower")):
        rep = tensor_inequality_check(orlicz(N), cfg.tensor_samples, direction,
                                      seed=cfg.seed, rule=rule)
        res.checks += 1
        rows.append({"id": rep.id, "verdict": rep.verdict, "trend": list(rep.trend)})
        if rep.verdict != HOLDS:
            res.fail(f"{rep.id}: {rep.verdict} {rep.trend}")
    for alpha, q in ((0.5, 2.0), (0.8, 1.0)):
        rep = tensor_inequality_check(lorentz(q, W.power(alpha)), 1, "lower",
                                      seed=cfg.seed, rule=rule)
        ones = rep.provenance["ones_ratios"]
        res.checks += 1
        rows.append({"id": rep.id, "ones_ratios": ones})
        if max(abs(r - 1.0) for r in ones) > 1e-9:
            res.fail(f"{rep.id}: phi(m)^2/phi(m^2) = {ones}")
    res.detail = {"lp_worst_err": worst, "rows": rows}
    return res.close()


# 9 -------------------------------------------------------------------------


def brute_top_k(w: np.ndarray, k: int) -> np.ndarray:
    return np.sort(np.outer(w, w).ravel())[::-1][:k]


def check_seqcore(cfg: RunConfig) -> CheckResult:
    res = CheckResult(9, "rearrangement and product-stream oracles", False)
    rng = np.random.default_rng(cfg.seed + 9)
    for _ in range(20):
        w = np.sort(rng.random(200))[::-1]
        w = w / w[0]
        for k in (1, 7, 50):
            res.checks += 1
            got = top_k_products(W.explicit(w), k)
            if not np.array_equal(got, brute_top_k(w, k)):
                res.fail(f"top_k mismatch at k={k}")
    for _ in range(100):
        a = rng.normal(size=int(rng.integers(1, 12)))
        b = rng.normal(size=int(rng.integers(1, 12)))
        res.checks += 1
        x, y = rearrange(tensor_blocks(a, b)), rearrange(tensor(a, b))
        if not np.allclose(x[:y.size], y, rtol=0, atol=0) or np.any(x[y.size:] != 0):
            res.fail(f"tensor_blocks mismatch for lengths {a.size}, {b.size}")
    return res.close()


CHECKS = {
    1: check_lp_exactness,
    2: check_embedding_chain,
    3: check_oracle,
    4: check_indices,
    5: check_classification,
    6: check_constants,
    7: check_holder,
    8: check_tensor,
    9: check_seqcore,
}


def run_acceptance(cfg: RunConfig, only=None) -> list[CheckResult]:
    ids = sorted(CHECKS) if not only else sorted(set(only))
    return [CHECKS[i](cfg) for i in ids]
