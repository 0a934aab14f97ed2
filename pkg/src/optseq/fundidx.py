"""Fundamental functions, dilation functions and fundamental indices.

For a symmetric sequence space ``E`` with fundamental function ``phi``::

    M0(n)   = sup_m phi(m) / phi(m n)
    Minf(n) = sup_m phi(m n) / phi(m)
    mu  = -lim (1/n) log2 M0(2^n)
    nu  =  lim (1/n) log2 Minf(2^n)

Limits are estimated by a least-squares slope on the last half of the
dyadic levels. The fit carries an extra ``log2(n)`` column, which absorbs
the logarithmic corrections produced by weights such as ``1/log k`` and
by power-log Orlicz functions; a pure power law has zero coefficient there.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError, ResourceLimitError
from .spaces import OrliczGenerator, SpaceDescriptor, WeightGenerator, norm
from .spaces.weights import PARTIAL_SUM_CAP

DEFAULT_N_CAP = 14
DEFAULT_M_CAP = 2**12
DEFAULT_ORLICZ_GRID = 200
ORLICZ_FLOOR = 1e-8
ORLICZ_LEVELS = 26

METHODS = ("closed_form", "slope_regression", "grid_extremum")


@dataclass(frozen=True)
class IndexEstimate:
    """One fundamental index with how it was obtained.

    ``residual`` is the least-squares residual norm for regressions and
    the grid-refinement delta for grid extrema.
    """

    value: float
    method: str
    caps: dict = field(default_factory=dict)
    residual: float = 0.0
    note: str = ""

    def __post_init__(self):
        if self.method not in METHODS:
            raise InvalidArgumentError(f"unknown method {self.method!r}")
        if not 0.0 <= self.value <= 1.0:
            raise InvalidArgumentError(f"index {self.value} outside [0, 1]")


# fundamental function --------------------------------------------------------


def _check_n(ns) -> np.ndarray:
    ns = np.asarray(ns)
    if ns.size and (np.any(ns < 1) or not np.all(ns == np.floor(ns))):
        raise InvalidArgumentError("n must be a positive integer")
    if ns.size and float(ns.max()) > PARTIAL_SUM_CAP:
        raise ResourceLimitError(
            f"index {int(ns.max())} exceeds cap {PARTIAL_SUM_CAP}")
    return ns.astype(np.int64)


def phi_values(space: SpaceDescriptor, ns) -> np.ndarray:
    """Vectorized fundamental function from the closed forms."""
    ns = _check_n(ns)
    f = space.family
    x = ns.astype(float)
    if f in ("lp", "lpq"):
        return np.ones_like(x) if np.isinf(space.p) else x ** (1.0 / space.p)
    if f == "lorentz":
        return space.weight.partial_sums(ns) ** (1.0 / space.q)
    return 1.0 / space.orlicz.inverse(1.0 / x)


def fundamental_function(space: SpaceDescriptor, n: int) -> float:
    """``phi(n) = ||e_1 + ... + e_n||`` via its closed form."""
    return float(phi_values(space, [n])[0])


def fundamental_function_direct(space: SpaceDescriptor, n: int) -> float:
    """``phi(n)`` by evaluating the norm of ``1^n``; the cross-check path."""
    _check_n([n])
    return norm(space, np.ones(int(n)))


# dilation functions --------------------------------------------------------


def dilation_functions(space: SpaceDescriptor, n: int,
                       m_cap: int = DEFAULT_M_CAP) -> tuple[float, float]:
    """``(M0(n), Minf(n))`` with the suprema truncated to ``m <= m_cap``.

    Truncation makes both values lower bounds of the true suprema.
    """
    n, m_cap = int(n), int(m_cap)
    if n < 1 or m_cap < 1:
        raise InvalidArgumentError("n and m_cap must be >= 1")
    if n * m_cap > PARTIAL_SUM_CAP:
        raise ResourceLimitError(f"m*n = {n * m_cap} exceeds cap {PARTIAL_SUM_CAP}")
    m = np.arange(1, m_cap + 1)
    ratio = phi_values(space, m) / phi_values(space, m * n)
    return float(ratio.max()), float((1.0 / ratio).max())


def _dilation_logs(phi, n_cap: int, m_cap: int) -> tuple[np.ndarray, np.ndarray]:
    # log2 M0(2^n) and log2 Minf(2^n) for n = 1..n_cap, with phi(m) shared
    if m_cap * 2**n_cap > PARTIAL_SUM_CAP:
        raise ResourceLimitError(
            f"m_cap * 2^n_cap exceeds cap {PARTIAL_SUM_CAP}")
    m = np.arange(1, m_cap + 1)
    base = np.log2(phi(m))
    lo = np.empty(n_cap)
    hi = np.empty(n_cap)
    for n in range(1, n_cap + 1):
        d = np.log2(phi(m * 2**n)) - base
        lo[n - 1] = d.min()
        hi[n - 1] = d.max()
    return lo, hi


def _slope(levels: np.ndarray, y: np.ndarray, window: int) -> tuple[float, float]:
    """Slope of ``y`` against ``levels`` over the last ``window`` points.

    Columns: level, constant, and ``log2(level)`` for log corrections.
    """
    x = levels[-window:].astype(float)
    A = np.column_stack([x, np.ones_like(x), np.log2(x)])
    coef, res, *_ = np.linalg.lstsq(A, y[-window:], rcond=None)
    resid = float(np.sqrt(res[0])) if res.size else 0.0
    return float(coef[0]), resid


def _window(n_cap: int) -> int:
    return max(int(np.ceil(n_cap / 2)), 4)


def _project(mu: float, nu: float, ceiling: float) -> tuple[float, float, str]:
    # enforce 0 <= mu <= nu <= ceiling; report what was changed
    note = []
    if mu > nu:
        mid = 0.5 * (mu + nu)
        note.append(f"raw mu {mu:.6g} > nu {nu:.6g}; both set to midpoint")
        mu = nu = mid
    lo_mu, lo_nu = mu, nu
    mu = min(max(mu, 0.0), ceiling)
    nu = min(max(nu, 0.0), ceiling)
    if (mu, nu) != (lo_mu, lo_nu):
        note.append(f"clipped to [0, {ceiling:.6g}]")
    return mu, nu, "; ".join(note)


def _ceiling(space: SpaceDescriptor) -> float:
    # phi(n)/n nonincreasing bounds every index by 1; the q-th power of a
    # Lorentz fundamental function is a partial sum of a nonincreasing
    # sequence, which bounds its indices by 1/q
    if space.family == "lorentz":
        return 1.0 / space.q
    if space.family in ("lp", "lpq"):
        return 0.0 if np.isinf(space.p) else 1.0 / space.p
    return 1.0


def _closed_form_pair(space: SpaceDescriptor, caps: dict):
    f = space.family
    if f in ("lp", "lpq"):
        v = 0.0 if np.isinf(space.p) else 1.0 / space.p
    elif f == "lorentz" and space.weight.kind in ("power", "constant"):
        alpha = 1.0 if space.weight.kind == "constant" else space.weight.alpha
        v = alpha / space.q
    elif f == "orlicz" and space.orlicz.kind == "power":
        v = 1.0 / space.orlicz.p
    else:
        return None
    est = IndexEstimate(v, "closed_form", dict(caps), 0.0, "exact power law")
    return est, est


def _regressed_pair(lo, hi, n_cap, ceiling, caps) -> tuple[IndexEstimate, IndexEstimate]:
    levels = np.arange(1, n_cap + 1)
    w = _window(n_cap)
    # lo = -log2 M0 grows like mu*n, hi = log2 Minf like nu*n
    mu, r_mu = _slope(levels, lo, w)
    nu, r_nu = _slope(levels, hi, w)
    mu, nu, note = _project(mu, nu, ceiling)
    return (IndexEstimate(mu, "slope_regression", dict(caps), r_mu, note),
            IndexEstimate(nu, "slope_regression", dict(caps), r_nu, note))


def fundamental_indices(space: SpaceDescriptor, n_cap: int = DEFAULT_N_CAP,
                        m_cap: int = DEFAULT_M_CAP,
                        closed_form: bool = False) -> tuple[IndexEstimate, IndexEstimate]:
    """``(mu, nu)`` from dyadic dilation functions.

    With ``closed_form=True`` exact power laws short-circuit the fit.
    """
    n_cap, m_cap = int(n_cap), int(m_cap)
    if n_cap < 4 or m_cap < 1:
        raise InvalidArgumentError("need n_cap >= 4 and m_cap >= 1")
    caps = {"n_cap": n_cap, "m_cap": m_cap}
    if closed_form:
        pair = _closed_form_pair(space, caps)
        if pair is not None:
            return pair
    lo, hi = _dilation_logs(lambda m: phi_values(space, m), n_cap, m_cap)
    return _regressed_pair(lo, hi, n_cap, _ceiling(space), caps)


def lorentz_indices(q: float, w: WeightGenerator, n_cap: int = DEFAULT_N_CAP,
                    j_cap: int = DEFAULT_M_CAP) -> tuple[IndexEstimate, IndexEstimate]:
    """Indices of a Lorentz space straight from partial-sum ratios.

    ``mu = -lim (1/n) log2 sup_j (S_j / S_{2^n j})^{1/q}``, and ``nu``
    likewise with the ratio inverted; same slope fit as
    :func:`fundamental_indices`.
    """
    q = float(q)
    n_cap, j_cap = int(n_cap), int(j_cap)
    if not 1.0 <= q < np.inf:
        raise InvalidArgumentError("need 1 <= q < inf")
    if n_cap < 4 or j_cap < 4:
        raise InvalidArgumentError("need n_cap >= 4 and j_cap >= 4")
    if w.length is not None:
        raise InvalidArgumentError("explicit weights are finite; indices undefined")
    caps = {"n_cap": n_cap, "j_cap": j_cap}
    lo, hi = _dilation_logs(lambda j: w.partial_sums(j), n_cap, j_cap)
    return _regressed_pair(lo / q, hi / q, n_cap, 1.0 / q, caps)


def orlicz_indices(N: OrliczGenerator, grid: int = DEFAULT_ORLICZ_GRID,
                   levels: int = ORLICZ_LEVELS) -> tuple[IndexEstimate, IndexEstimate]:
    """Indices of an Orlicz space from dilations of ``N`` near zero.

    For ``t_n = 2^{-n}`` and ``s`` on a log grid in ``[1e-8, 1]``::

        hi(n) = max_s log2(N(s) / N(s t_n))      (slope 1/mu)
        lo(n) = min_s log2(N(s) / N(s t_n))      (slope 1/nu)

    Slopes use the same log-corrected fit as the dilation functions. The
    residual field holds the change in the estimate when the ``s`` grid is
    doubled.
    """
    grid, levels = int(grid), int(levels)
    if grid < 100:
        raise InvalidArgumentError("grid must be >= 100")
    if levels < 4:
        raise InvalidArgumentError("levels must be >= 4")
    caps = {"grid": grid, "levels": levels}
    if N.kind == "power":
        v = 1.0 / N.p
        est = IndexEstimate(v, "closed_form", caps, 0.0, "power function")
        return est, est

    def raw(g):
        s = np.logspace(np.log10(ORLICZ_FLOOR), 0.0, g)
        Ns = N(s)
        ns = np.arange(1, levels + 1)
        hi = np.empty(levels)
        lo = np.empty(levels)
        for i, n in enumerate(ns):
            d = np.log2(Ns / N(s * 2.0**-n))
            hi[i], lo[i] = d.max(), d.min()
        w = _window(levels)
        s_hi, _ = _slope(ns, hi, w)
        s_lo, _ = _slope(ns, lo, w)
        return 1.0 / s_hi, 1.0 / s_lo

    mu, nu = raw(grid)
    mu2, nu2 = raw(2 * grid)
    mu, nu, note = _project(mu, nu, 1.0)
    mu2, nu2, _ = _project(mu2, nu2, 1.0)
    return (IndexEstimate(mu, "grid_extremum", caps, abs(mu2 - mu), note),
            IndexEstimate(nu, "grid_extremum", caps, abs(nu2 - nu), note))


def space_indices(space: SpaceDescriptor, n_cap: int = DEFAULT_N_CAP,
                  m_cap: int = DEFAULT_M_CAP,
                  grid: int = DEFAULT_ORLICZ_GRID) -> tuple[IndexEstimate, IndexEstimate]:
    """Preferred index estimate for each family.

    Closed forms for power laws, the partial-sum formulas for Lorentz
    spaces and the dilation-of-``N`` method for Orlicz spaces.
    """
    caps = {"n_cap": int(n_cap), "m_cap": int(m_cap)}
    pair = _closed_form_pair(space, caps)
    if pair is not None:
        return pair
    if space.family == "lorentz":
        return lorentz_indices(space.q, space.weight, n_cap, m_cap)
    if space.family == "orlicz":
        return orlicz_indices(space.orlicz, grid)
    return fundamental_indices(space, n_cap, m_cap)


# Grobler-Dodds indices -------------------------------------------------------


@dataclass(frozen=True)
class GroblerDodds:
    """``delta`` (best upper-estimate exponent) and ``sigma`` (best lower)."""

    delta: float
    sigma: float
    delta_method: str
    sigma_method: str
    note: str = ""


def _inv(x: float) -> float:
    return np.inf if x <= 0.0 else 1.0 / x


def grobler_dodds(space: SpaceDescriptor, n_cap: int = DEFAULT_N_CAP,
                  m_cap: int = DEFAULT_M_CAP,
                  grid: int = DEFAULT_ORLICZ_GRID) -> GroblerDodds:
    """Grobler-Dodds indices of the concrete families.

    ``lp(p)``: ``(p, p)``; ``lpq(p, q)``: ``(min, max)``; Lorentz
    ``(q, w)``: ``(q, 1/mu)``; Orlicz: ``(1/nu, 1/mu)``.
    """
    f = space.family
    if f == "lp":
        return GroblerDodds(space.p, space.p, "closed_form", "closed_form")
    if f == "lpq":
        return GroblerDodds(min(space.p, space.q), max(space.p, space.q),
                            "closed_form", "closed_form")
    mu, nu = space_indices(space, n_cap, m_cap, grid)
    if f == "lorentz":
        return GroblerDodds(space.q, _inv(mu.value), "closed_form",
                            "closed_form" if mu.method == "closed_form" else "estimated",
                            mu.note)
    method = "closed_form" if mu.method == "closed_form" else "estimated"
    return GroblerDodds(_inv(nu.value), _inv(mu.value), method, method,
                        mu.note)
