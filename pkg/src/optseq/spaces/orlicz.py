"""Orlicz functions on [0, 1], the Luxemburg gauge, and Young conjugates."""

from __future__ import annotations

import numpy as np

from ..errors import InternalError, InvalidArgumentError
from .weights import fmt_num

KINDS = ("power", "powerlog", "conjugate")

_VALIDATION_GRID = np.logspace(-12.0, 0.0, 10_000)
_SCAN_POINTS = 1000
_SCAN_FLOOR = 1e-12
_CONJ_TABLE = np.logspace(-12.0, 0.0, 2001)
_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


class OrliczGenerator:
    """An Orlicz function ``N`` normalized by ``N(1) = 1``, used on [0, 1].

    * ``power(p)``: ``N(t) = t^p``, ``p >= 1``.
    * ``powerlog(p, a)``: ``N(t) = t^p log^a(e/t)``; ``p > 1`` with any
      real ``a``, or ``p = 1`` with ``a <= 0``.
    * ``conjugate(base)``: the Young conjugate of ``base``, tabulated and
      rescaled so that its value at 1 is 1.

    Construction checks ``N(0) = 0``, ``N(1) = 1``, monotonicity on 10^4
    log-spaced points, and ``N(t) <= t`` (which the Luxemburg bracket needs).
    """

    def __init__(self, kind: str, p: float | None = None, a: float = 0.0,
                 base: OrliczGenerator | None = None):
        if kind not in KINDS:
            raise InvalidArgumentError(f"unknown Orlicz kind {kind!r}")
        self.kind = kind
        self.p = None if p is None else float(p)
        self.a = float(a)
        self.base = base
        self._log_t = None
        self._log_v = None
        if kind == "power":
            if self.p is None or not 1.0 <= self.p < np.inf:
                raise InvalidArgumentError("power(p) needs 1 <= p < inf")
        elif kind == "powerlog":
            if self.p is None or not np.isfinite(self.p) or not np.isfinite(self.a):
                raise InvalidArgumentError("powerlog needs finite p and a")
            if self.p < 1.0 or (self.p == 1.0 and self.a > 0.0):
                raise InvalidArgumentError(
                    "powerlog needs p > 1, or p = 1 with a <= 0")
        else:
            if base is None:
                raise InvalidArgumentError("conjugate needs a base generator")
            self._build_conjugate_table()
        self._validate()

    @classmethod
    def power(cls, p: float) -> OrliczGenerator:
        return cls("power", p=p)

    @classmethod
    def powerlog(cls, p: float, a: float) -> OrliczGenerator:
        return cls("powerlog", p=p, a=a)

    @classmethod
    def conjugate_of(cls, base: OrliczGenerator) -> OrliczGenerator:
        return cls("conjugate", base=base)

    def _validate(self) -> None:
        t = _VALIDATION_GRID
        v = self(t)
        if not np.all(np.isfinite(v)):
            raise InvalidArgumentError(f"{self.describe()}: non-finite values")
        if float(self(np.array([0.0]))[0]) != 0.0:
            raise InvalidArgumentError(f"{self.describe()}: N(0) != 0")
        if abs(float(self(np.array([1.0]))[0]) - 1.0) > 1e-12:
            raise InvalidArgumentError(f"{self.describe()}: N(1) != 1")
        if np.any(np.diff(v) < -1e-15 * np.maximum(v[1:], 1e-300)):
            raise InvalidArgumentError(
                f"{self.describe()}: not nondecreasing on (0, 1]")
        if np.any(v > t * (1.0 + 1e-12)):
            raise InvalidArgumentError(
                f"{self.describe()}: N(t) > t somewhere on (0, 1]")

    # identity -------------------------------------------------------------

    def _key(self):
        return (self.kind, self.p, self.a,
                None if self.base is None else self.base._key())

    def __eq__(self, other):
        return isinstance(other, OrliczGenerator) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"OrliczGenerator({self.describe()})"

    def describe(self) -> str:
        if self.kind == "power":
            return f"power(p={fmt_num(self.p)})"
        if self.kind == "powerlog":
            return f"powerlog(p={fmt_num(self.p)},a={fmt_num(self.a)})"
        return f"conjugate({self.base.describe()})"

    @property
    def is_power(self) -> bool:
        return self.kind == "power" or (self.kind == "powerlog" and self.a == 0.0)

    # evaluation -----------------------------------------------------------

    def __call__(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if self.kind == "power":
            return t**self.p
        if self.kind == "powerlog":
            with np.errstate(divide="ignore", invalid="ignore"):
                out = t**self.p * (1.0 - np.log(t)) ** self.a
            return np.where(t > 0, out, 0.0)
        out = np.zeros_like(t)
        pos = t > 0
        lt = np.log(t[pos])
        lt0, lt1 = self._log_t[0], self._log_t[1]
        slope = (self._log_v[1] - self._log_v[0]) / (lt1 - lt0)
        inside = np.interp(lt, self._log_t, self._log_v)
        below = self._log_v[0] + slope * (lt - lt0)
        out[pos] = np.exp(np.where(lt < lt0, below, inside))
        return out

    def inverse(self, y) -> np.ndarray:
        """``N^{-1}(y)`` for ``y`` in (0, 1] by bisection in ``log t``.

        Bracket: ``[y, 1]``, valid because ``N(y) <= y`` and ``N(1) = 1``.
        """
        y = np.asarray(y, dtype=float)
        if np.any(y <= 0) or np.any(y > 1.0):
            raise InvalidArgumentError("inverse needs 0 < y <= 1")
        lo = np.log(y)
        hi = np.zeros_like(lo)
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            below = self(np.exp(mid)) < y
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
            if np.all(hi - lo < 1e-15):
                break
        return np.exp(0.5 * (lo + hi))

    def _build_conjugate_table(self) -> None:
        vals = young_conjugate(self.base, _CONJ_TABLE)
        top = vals[-1]
        if not top > 0.0 or np.any(vals <= 0.0):
            raise InvalidArgumentError(
                f"conjugate of {self.base.describe()} vanishes on (0, 1]; "
                "it is not an Orlicz function there")
        self._log_t = np.log(_CONJ_TABLE)
        self._log_v = np.log(vals / top)
        self._log_v[-1] = 0.0


def young_conjugate(N: OrliczGenerator, t) -> np.ndarray:
    """``max over s in (0, 1] of (s t - N(s))`` for each ``t`` in (0, 1].

    A 1000-point log-spaced scan of ``s`` brackets the maximizer, then a
    golden-section search in ``log s`` narrows it to relative width 1e-10.
    Unimodality holds for convex ``N``.
    """
    scalar = np.ndim(t) == 0
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t <= 0) or np.any(t > 1.0):
        raise InvalidArgumentError("young_conjugate needs 0 < t <= 1")
    s = np.logspace(np.log10(_SCAN_FLOOR), 0.0, _SCAN_POINTS)
    vals = s[None, :] * t[:, None] - N(s)[None, :]
    i = np.argmax(vals, axis=1)
    best = vals[np.arange(t.size), i]
    ls = np.log(s)
    lo = ls[np.maximum(i - 1, 0)]
    hi = ls[np.minimum(i + 1, s.size - 1)]

    def g(x):
        return np.exp(x) * t - N(np.exp(x))

    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1, f2 = g(x1), g(x2)
    while np.any(hi - lo > 1e-10):
        left = f1 >= f2
        hi = np.where(left, x2, hi)
        lo = np.where(left, lo, x1)
        x2n = np.where(left, x1, lo + _GOLDEN * (hi - lo))
        x1n = np.where(left, hi - _GOLDEN * (hi - lo), x2)
        f1n = np.where(left, g(x1n), f2)
        f2n = np.where(left, f1, g(x2n))
        x1, x2, f1, f2 = x1n, x2n, f1n, f2n
    best = np.maximum(best, np.maximum(f1, f2))
    best = np.maximum(best, 0.0)
    return best[0] if scalar else best


def luxemburg_norm(N: OrliczGenerator, a) -> float:
    """``inf{u > 0 : sum N(|a_k| / u) <= 1}`` by bracketed root search."""
    x = np.abs(np.asarray(a, dtype=float)).reshape(1, -1)
    return float(luxemburg_rows(N, x)[0])


def luxemburg_rows(N: OrliczGenerator, X: np.ndarray,
                   rel_tol: float = 1e-12) -> np.ndarray:
    """Row-wise Luxemburg norms of a nonnegative 2-D array.

    Root bracketing on ``v = log u`` over ``[log max_k x_k, log sum_k x_k]``
    for ``g(v) = log sum_k N(x_k e^{-v})``, which is nonincreasing. The
    lower end is valid since ``N(1) = 1``, the upper end since
    ``N(t) <= t``. Each step probes a regula falsi point and its two
    neighbours at distance ``rel_tol / 4``, with a plain bisection every
    third step, so the bracket always shrinks. Stops once the relative
    bracket width is below ``rel_tol`` and returns the upper end, where the
    modular is at most 1.
    """
    X = np.asarray(X, dtype=float)
    top = X.max(axis=1)
    out = np.zeros(X.shape[0])
    live = top > 0
    if not np.any(live):
        return out
    Xl = X[live]
    lo = np.log(top[live])
    hi = np.log(Xl.sum(axis=1))

    def g(v):
        # v has shape (rows, probes)
        mod = N(Xl[:, None, :] * np.exp(-v)[:, :, None]).sum(axis=2)
        return np.log(mod)

    g_lo = g(lo[:, None])[:, 0]
    g_hi = g(hi[:, None])[:, 0]
    if np.any(g_hi > 1e-12):
        raise InternalError("modular exceeds 1 at the upper bracket")
    # a zero at the lower end (single atom) is already exact
    hi = np.where(g_lo <= 0.0, lo, hi)
    g_hi = np.where(g_lo <= 0.0, g_lo, g_hi)
    width = np.log1p(rel_tol)
    step = 0.25 * width
    offsets = np.array([-step, step])
    side = np.zeros(lo.shape, dtype=int)
    for it in range(400):
        if np.all(hi - lo <= width):
            break
        if it % 8 == 7:
            v = 0.5 * (lo + hi)
        else:
            denom = g_lo - g_hi
            safe = np.where(denom > 0, denom, 1.0)
            v = np.where(denom > 0, lo + g_lo * (hi - lo) / safe, 0.5 * (lo + hi))
        v = np.clip(v, lo + step, hi - step)
        probes = v[:, None] + offsets
        gv = g(probes)
        # the left probe can only move lo, the right one only hi, unless
        # both land on the same side of the root
        over = gv > 0.0
        new_lo = np.where(over[:, 1], probes[:, 1], np.where(over[:, 0], probes[:, 0], lo))
        new_glo = np.where(over[:, 1], gv[:, 1], np.where(over[:, 0], gv[:, 0], g_lo))
        new_hi = np.where(~over[:, 0], probes[:, 0], np.where(~over[:, 1], probes[:, 1], hi))
        new_ghi = np.where(~over[:, 0], gv[:, 0], np.where(~over[:, 1], gv[:, 1], g_hi))
        moved_lo = new_lo > lo
        moved_hi = new_hi < hi
        # Illinois: halve the stale end's value when one side repeats
        g_lo = np.where(~moved_lo & moved_hi & (side == 1), 0.5 * g_lo, new_glo)
        g_hi = np.where(~moved_hi & moved_lo & (side == -1), 0.5 * g_hi, new_ghi)
        side = np.where(moved_lo & ~moved_hi, -1, np.where(moved_hi & ~moved_lo, 1, 0))
        lo, hi = new_lo, new_hi
    out[live] = np.exp(hi)
    return out
