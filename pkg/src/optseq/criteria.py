"""Finite checks of the criteria that identify optimal upper/lower spaces.

Every check produces a :class:`CriterionReport`: a trend of estimated
constants at increasing caps and a verdict.

Verdict rule (:class:`VerdictRule`), applied to a nondecreasing trend:

* ``holds_with_constant`` when the last relative change is at most
  ``agree_tol`` and the increments are dying out (the last one is at most
  ``decay_ratio`` times the one before, or numerically zero);
* ``diverges`` when the trend is strictly increasing and the increments
  do not decay (the last is at least ``decay_ratio`` times the previous);
* ``inconclusive`` otherwise.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import InvalidArgumentError, UnsupportedOperationError
from .fundidx import (DEFAULT_M_CAP, DEFAULT_N_CAP, DEFAULT_ORLICZ_GRID,
                      grobler_dodds, space_indices)
from .optimal import SearchConfig, optimal_fundamental
from .seqcore import tensor, top_k_products
from .spaces import (OrliczGenerator, SpaceDescriptor, WeightGenerator,
                     fmt_num, kothe_dual, lp, norm)

HOLDS = "holds_with_constant"
DIVERGES = "diverges"
INCONCLUSIVE = "inconclusive"

DEFAULT_EQUAL_NORM_NS = (2, 4, 8, 16)
DEFAULT_ORLICZ_FLOORS = (1e-2, 1e-4, 1e-6, 1e-8)
DEFAULT_DID_NS = (10**2, 10**3, 10**4, 10**5)
DEFAULT_ASSUMP_LS = (10, 10**2, 10**3, 10**4)
DEFAULT_ASSUMP_N = 256
DEFAULT_TENSOR_LENGTHS = (2, 4, 8, 16, 32)


@dataclass(frozen=True)
class VerdictRule:
    agree_tol: float = 0.05
    decay_ratio: float = 0.5
    zero_tol: float = 1e-9

    def __post_init__(self):
        for name in ("agree_tol", "decay_ratio", "zero_tol"):
            if not 0.0 < getattr(self, name) < 1.0:
                raise InvalidArgumentError(f"{name} must be in (0, 1)")


def verdict(trend, rule: VerdictRule = VerdictRule()) -> str:
    v = np.asarray(trend, dtype=float)
    if v.size < 3 or not np.all(np.isfinite(v)):
        return INCONCLUSIVE
    d = np.diff(v)
    scale = max(abs(v[-1]), 1e-300)
    flat = abs(d[-1]) <= rule.zero_tol * scale
    if (not flat and np.all(d > rule.zero_tol * np.abs(v[1:]))
            and d[-1] >= rule.decay_ratio * d[-2]):
        return DIVERGES
    if abs(d[-1]) <= rule.agree_tol * scale and (flat or d[-1] <= rule.decay_ratio * d[-2]):
        return HOLDS
    return INCONCLUSIVE


@dataclass(frozen=True)
class CriterionReport:
    """One criterion check.

    ``constant`` is the last trend value; ``diverging`` mirrors the
    verdict. ``provenance`` records caps, grids and seeds.
    """

    id: str
    constant: float
    diverging: bool
    trend: tuple
    caps: tuple
    verdict: str
    provenance: dict = field(default_factory=dict)

    @classmethod
    def build(cls, id: str, caps, trend, rule: VerdictRule, provenance=None,
              forced: str | None = None) -> CriterionReport:
        trend = tuple(float(x) for x in trend)
        v = forced or verdict(trend, rule)
        prov = dict(provenance or {})
        prov["rule"] = asdict(rule)
        return cls(id, trend[-1], v == DIVERGES, trend, tuple(caps), v, prov)

    @property
    def holds(self) -> bool:
        return self.verdict == HOLDS

    def to_json(self) -> dict:
        return {"id": self.id, "constant": self.constant,
                "diverging": self.diverging, "trend": list(self.trend),
                "caps": list(self.caps), "verdict": self.verdict,
                "provenance": self.provenance}


def _running_max(x) -> np.ndarray:
    return np.maximum.accumulate(np.asarray(x, dtype=float))


# equal-norm estimates ------------------------------------------------------


def equal_norm_upper_constant(space: SpaceDescriptor, p: float,
                              n_list=DEFAULT_EQUAL_NORM_NS,
                              search: SearchConfig = SearchConfig(),
                              rule: VerdictRule = VerdictRule()) -> CriterionReport:
    """Trend of ``max_{m<=n} phi_U(m) / m^{1/p}`` (a lower bound of ``C``)."""
    if not 1.0 < p < np.inf:
        raise InvalidArgumentError("need 1 < p < inf")
    rows = optimal_fundamental(space, n_list, search)
    trend = _running_max([u / n ** (1.0 / p) for n, u, _ in rows])
    return CriterionReport.build(
        f"equal_norm_upper[{space.describe()};p={fmt_num(p)}]", n_list, trend,
        rule, {"search": asdict(search)})


def equal_norm_lower_constant(space: SpaceDescriptor, p: float,
                              n_list=DEFAULT_EQUAL_NORM_NS,
                              search: SearchConfig = SearchConfig(),
                              rule: VerdictRule = VerdictRule()) -> CriterionReport:
    """Trend of ``max_{m<=n} m^{1/p} / Phi_m(1^m)`` (a lower bound of ``C``)."""
    if not 1.0 < p < np.inf:
        raise InvalidArgumentError("need 1 < p < inf")
    rows = optimal_fundamental(space, n_list, search)
    trend = _running_max([n ** (1.0 / p) / lo for n, _, lo in rows])
    return CriterionReport.build(
        f"equal_norm_lower[{space.describe()};p={fmt_num(p)}]", n_list, trend,
        rule, {"search": asdict(search)})


# Orlicz criteria -----------------------------------------------------------


def _orlicz_sup(ratio, floor: float, grid: int) -> float:
    s = np.logspace(np.log10(floor), 0.0, grid)
    S, T = np.meshgrid(s, s, indexing="ij")
    return float(np.max(ratio(S, T)))


def _orlicz_report(id: str, ratio, grid: int, floors, rule) -> CriterionReport:
    grid = int(grid)
    if grid < 100:
        raise InvalidArgumentError("grid must be >= 100")
    trend = _running_max([_orlicz_sup(ratio, f, grid) for f in floors])
    refined = _orlicz_sup(ratio, floors[-1], 2 * grid)
    delta = abs(refined - trend[-1]) / max(abs(refined), 1e-300)
    prov = {"grid": grid, "floors": list(floors), "refined_value": refined,
            "refinement_delta": delta}
    forced = None
    if verdict(trend, rule) == HOLDS and delta > rule.agree_tol:
        forced = INCONCLUSIVE
    return CriterionReport.build(id, [fmt_num(f) for f in floors], trend, rule,
                                 prov, forced)


def orlicz_submultiplicative_constant(N: OrliczGenerator, grid: int = DEFAULT_ORLICZ_GRID,
                                      floors=DEFAULT_ORLICZ_FLOORS,
                                      rule: VerdictRule = VerdictRule()) -> CriterionReport:
    """``sup N(st) / (N(s) N(t))`` over ``[floor, 1]^2``, by floor."""
    return _orlicz_report(f"orlicz_submultiplicative[{N.describe()}]",
                          lambda s, t: N(s * t) / (N(s) * N(t)), grid, floors, rule)


def orlicz_supermultiplicative_constant(N: OrliczGenerator, grid: int = DEFAULT_ORLICZ_GRID,
                                        floors=DEFAULT_ORLICZ_FLOORS,
                                        rule: VerdictRule = VerdictRule()) -> CriterionReport:
    """``sup N(s) N(t) / N(st)`` over ``[floor, 1]^2``, by floor."""
    return _orlicz_report(f"orlicz_supermultiplicative[{N.describe()}]",
                          lambda s, t: N(s) * N(t) / N(s * t), grid, floors, rule)


def orlicz_estimate_constant(N: OrliczGenerator, p: float, direction: str,
                             grid: int = DEFAULT_ORLICZ_GRID,
                             floors=DEFAULT_ORLICZ_FLOORS,
                             rule: VerdictRule = VerdictRule()) -> CriterionReport:
    """``sup N(st) / (N(s) t^p)`` (upper) or its reciprocal (lower)."""
    if not 1.0 <= p < np.inf:
        raise InvalidArgumentError("need 1 <= p < inf")
    if direction == "upper":
        ratio = lambda s, t: N(s * t) / (N(s) * t**p)  # noqa: E731
    elif direction == "lower":
        ratio = lambda s, t: N(s) * t**p / N(s * t)  # noqa: E731
    else:
        raise InvalidArgumentError("direction must be 'upper' or 'lower'")
    return _orlicz_report(
        f"orlicz_{direction}_estimate[{N.describe()};p={fmt_num(p)}]",
        ratio, grid, floors, rule)


# Lorentz criteria ----------------------------------------------------------


def lorentz_did_ratio(w: WeightGenerator, n_list=DEFAULT_DID_NS,
                      rule: VerdictRule = VerdictRule()) -> CriterionReport:
    """Trend of ``max_{m<=n} sum_{k<=m} d_k / S_m`` at each ``n``.

    ``d`` is the decreasing rearrangement of the products ``w_i w_j``.
    """
    ns = np.asarray(n_list, dtype=np.int64)
    top = int(ns.max())
    d = top_k_products(w, top)
    m = np.arange(1, top + 1)
    ratio = np.maximum.accumulate(np.cumsum(d) / w.partial_sums(m))
    return CriterionReport.build(f"lorentz_did[{w.describe()}]", ns.tolist(),
                                 ratio[ns - 1], rule, {"n_list": ns.tolist()})


def lorentz_assump_constant(q: float, w: WeightGenerator, mu: float | None = None,
                            n_cap: int = DEFAULT_ASSUMP_N, l_list=DEFAULT_ASSUMP_LS,
                            rule: VerdictRule = VerdictRule(),
                            n_idx: int = DEFAULT_N_CAP,
                            m_idx: int = DEFAULT_M_CAP) -> CriterionReport:
    """Trend of ``sup_{n<=n_cap, l<=L} S_n l^{q mu} / S_{ln}`` over ``L``.

    ``mu`` defaults to the estimated lower fundamental index.
    """
    from .spaces import lorentz
    q = float(q)
    source = "override"
    if mu is None:
        est, _ = space_indices(lorentz(q, w), n_idx, m_idx)
        mu, source = est.value, est.method
    n = np.arange(1, int(n_cap) + 1, dtype=np.int64)
    Sn = w.partial_sums(n)
    trend = []
    best = 0.0
    start = 1
    for L in l_list:
        ls = np.arange(start, int(L) + 1, dtype=np.int64)
        if ls.size:
            S_ln = w.partial_sums(np.outer(ls, n))
            r = Sn[None, :] * (ls.astype(float)[:, None] ** (q * mu)) / S_ln
            best = max(best, float(r.max()))
        trend.append(best)
        start = int(L) + 1
    return CriterionReport.build(
        f"lorentz_assump[q={fmt_num(q)};{w.describe()}]", list(l_list), trend,
        rule, {"mu": mu, "mu_source": source, "n_cap": int(n_cap)})


# tensor and pairing checks -------------------------------------------------


def tensor_inequality_check(space: SpaceDescriptor, samples: int = 20,
                            direction: str = "upper",
                            lengths=DEFAULT_TENSOR_LENGTHS, seed: int = 0,
                            rule: VerdictRule = VerdictRule()) -> CriterionReport:
    """Running max of ``||a x b|| / (||a|| ||b||)`` (upper) or its
    reciprocal (lower), by vector length.

    Each length contributes ``samples`` random nonnegative pairs and the
    pair ``a = b = 1^m``, whose ratio is ``phi(m^2) / phi(m)^2``.
    """
    if direction not in ("upper", "lower"):
        raise InvalidArgumentError("direction must be 'upper' or 'lower'")
    if int(samples) < 1:
        raise InvalidArgumentError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    sign = 1.0 if direction == "upper" else -1.0
    per_length = []
    ones_ratio = []
    for m in lengths:
        pairs = [(rng.random(m), rng.random(m)) for _ in range(int(samples))]
        pairs.append((np.ones(m), np.ones(m)))
        r = [np.exp(sign * (np.log(norm(space, tensor(a, b)))
                            - np.log(norm(space, a)) - np.log(norm(space, b))))
             for a, b in pairs]
        per_length.append(max(r))
        ones_ratio.append(r[-1])
    trend = _running_max(per_length)
    return CriterionReport.build(
        f"tensor_{direction}[{space.describe()}]", list(lengths), trend, rule,
        {"samples": int(samples), "seed": int(seed), "ones_ratios": ones_ratio})


def _identified_r(space: SpaceDescriptor) -> tuple[float, float]:
    """Exponents ``r`` with ``X_U = l_r`` and ``s`` with ``(X')_L = l_s``."""
    if space.family == "lp":
        r = space.p
    elif space.family == "lpq":
        r = min(space.p, space.q)
    else:
        raise UnsupportedOperationError(
            "pairing check needs closed-form optimal spaces (lp, lpq)")
    dual = kothe_dual(space)
    s = dual.p if dual.family == "lp" else max(dual.p, dual.q)
    return r, s


def holder_pairing_check(space: SpaceDescriptor, samples: int = 1000,
                         seed: int = 0, max_len: int = 16) -> CriterionReport:
    """Max of ``sum a_k b_k / (||a||_{X_U} ||b||_{(X')_L})`` over samples.

    The optimal spaces are the identified ``l_r`` spaces, so the bound 1
    is exact. Always includes ``a = b`` and ``a = b = e_1``.
    """
    r, s = _identified_r(space)
    XU, XdL = lp(r), lp(s)
    rng = np.random.default_rng(seed)
    best = 0.0
    worst_pair = None
    cases = [(np.ones(1), np.ones(1))]
    v = rng.random(max_len)
    cases.append((v, v.copy()))
    for _ in range(int(samples)):
        n = int(rng.integers(1, max_len + 1))
        cases.append((rng.random(n), rng.random(n)))
    ratios = []
    for a, b in cases:
        ratio = float(a @ b) / (norm(XU, a) * norm(XdL, b))
        ratios.append(ratio)
        if ratio > best:
            best, worst_pair = ratio, (a.tolist(), b.tolist())
    trend = (best, best, best)
    rule = VerdictRule()
    forced = HOLDS if best <= 1.0 + 1e-9 else DIVERGES
    return CriterionReport.build(
        f"holder_pairing[{space.describe()}]", [len(cases)], trend, rule,
        {"samples": int(samples), "seed": int(seed), "X_U": XU.describe(),
         "dual_L": XdL.describe(), "equal_case_ratio": ratios[1],
         "unit_case_ratio": ratios[0], "worst_pair": worst_pair}, forced)


# classification ------------------------------------------------------------


@dataclass
class ClassifyConfig:
    n_cap: int = DEFAULT_N_CAP
    m_cap: int = DEFAULT_M_CAP
    grid: int = DEFAULT_ORLICZ_GRID
    did_ns: tuple = DEFAULT_DID_NS
    assump_n: int = DEFAULT_ASSUMP_N
    assump_ls: tuple = DEFAULT_ASSUMP_LS
    floors: tuple = DEFAULT_ORLICZ_FLOORS
    rule: VerdictRule = field(default_factory=VerdictRule)


def _lp_text(r: float) -> str:
    return "lp:p=" + fmt_num(r)


def classify_optimal_spaces(space: SpaceDescriptor,
                            cfg: ClassifyConfig = ClassifyConfig()) -> dict:
    """Identify ``X_U`` and ``X_L`` with the criteria that justify them.

    ``lp`` and ``lpq`` are identified unconditionally. Lorentz: ``X_U =
    l_q``; ``X_L = l_{1/mu}`` when the dilation condition holds, ``X_L =
    lambda_q(w)`` when the product condition holds. Orlicz: ``X_U = l_N``
    when ``N`` is submultiplicative, ``X_U = l_{1/nu}`` when the upper
    estimate holds at ``p = 1/nu``; dually for ``X_L``. Incompatible
    conclusions make the report inconclusive.
    """
    f = space.family
    reports: list[CriterionReport] = []
    gd = grobler_dodds(space, cfg.n_cap, cfg.m_cap, cfg.grid)
    notes = []
    if f == "lp":
        XU = XL = [space.describe()]
    elif f == "lpq":
        XU = [_lp_text(min(space.p, space.q))]
        XL = [_lp_text(max(space.p, space.q))]
    elif f == "lorentz":
        q, w = space.q, space.weight
        mu_est, _ = space_indices(space, cfg.n_cap, cfg.m_cap)
        XU = [_lp_text(q)]
        XL = []
        assump = lorentz_assump_constant(q, w, mu_est.value, cfg.assump_n,
                                         cfg.assump_ls, cfg.rule)
        did = lorentz_did_ratio(w, cfg.did_ns, cfg.rule)
        reports += [assump, did]
        if assump.holds:
            XL.append(_lp_text(1.0 / mu_est.value))
        if did.holds:
            XL.append(space.describe())
        if len(XL) == 2 and not space.degenerate:
            notes.append("both Lorentz conditions hold for a nondegenerate weight")
    elif f == "orlicz":
        N = space.orlicz
        mu, nu = space_indices(space, cfg.n_cap, cfg.m_cap, cfg.grid)
        p_up, p_lo = 1.0 / nu.value, 1.0 / mu.value
        sub = orlicz_submultiplicative_constant(N, cfg.grid, cfg.floors, cfg.rule)
        sup = orlicz_supermultiplicative_constant(N, cfg.grid, cfg.floors, cfg.rule)
        up = orlicz_estimate_constant(N, p_up, "upper", cfg.grid, cfg.floors, cfg.rule)
        lo = orlicz_estimate_constant(N, p_lo, "lower", cfg.grid, cfg.floors, cfg.rule)
        reports += [sub, sup, up, lo]
        XU, XL = [], []
        if sub.holds:
            XU.append(space.describe())
        if up.holds:
            XU.append(_lp_text(p_up))
        if sup.holds:
            XL.append(space.describe())
        if lo.holds:
            XL.append(_lp_text(p_lo))
        for side, ids in (("X_U", XU), ("X_L", XL)):
            if len(ids) == 2 and not N.is_power:
                notes.append(f"{side}: l_N and l_p both identified for a non-power N")
    else:  # pragma: no cover - descriptor validation rules this out
        raise InvalidArgumentError(f"unknown family {f!r}")

    # consistency with the Grobler-Dodds indices
    for side, ids, target in (("X_U", XU, gd.delta), ("X_L", XL, gd.sigma)):
        for text in ids:
            if text.startswith("lp:") and space.family != "lp":
                r = float(text.split("=", 1)[1])
                if abs(r - target) > 0.05:
                    notes.append(f"{side} = {text} disagrees with index {target:.6g}")

    inconclusive = [r.id for r in reports if r.verdict == INCONCLUSIVE]
    status = "identified"
    if notes:
        status = INCONCLUSIVE
    elif not XU or not XL:
        status = "partial"
    return {
        "space": space.describe(),
        "X_U": XU,
        "X_L": XL,
        "status": status,
        "notes": notes,
        "inconclusive_criteria": inconclusive,
        "grobler_dodds": {"delta": gd.delta, "sigma": gd.sigma,
                          "delta_method": gd.delta_method,
                          "sigma_method": gd.sigma_method},
        "criteria": [r.to_json() for r in reports],
    }
