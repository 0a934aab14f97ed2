"""Lorentz weight sequences and their partial sums."""

from __future__ import annotations

import threading

import numpy as np
from scipy.special import expi

from ..errors import InvalidArgumentError, ResourceLimitError

# partial sums beyond this index would lose integer exactness in float64
PARTIAL_SUM_CAP = 2**50
# largest directly accumulated table for weights without a closed-form sum
_DENSE_MAX = 2**20

KINDS = ("power", "invlog", "constant", "explicit")


def fmt_num(x: float) -> str:
    """Shortest text that parses back to the same float."""
    x = float(x)
    if np.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x.is_integer() and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


class WeightGenerator:
    """A nonincreasing positive weight sequence ``w`` with ``w_1 = 1``.

    Kinds:

    * ``power``: ``w_k = k^alpha - (k-1)^alpha`` with ``0 < alpha < 1``;
      partial sums ``S_n = n^alpha`` in closed form.
    * ``invlog``: ``w_1 = w_2 = 1``, ``w_k = 1/log k`` for ``k >= 3``.
    * ``constant``: ``w_k = 1``. Degenerate: the Lorentz space is ``l_q``.
    * ``explicit``: a finite user list; indices past its end are an error.

    Use the class methods :meth:`power`, :meth:`invlog`, :meth:`constant`
    and :meth:`explicit` rather than the constructor.
    """

    def __init__(self, kind: str, alpha: float | None = None,
                 values: tuple[float, ...] | None = None):
        if kind not in KINDS:
            raise InvalidArgumentError(f"unknown weight kind {kind!r}")
        self.kind = kind
        self.alpha = None if alpha is None else float(alpha)
        self.values = None if values is None else tuple(float(v) for v in values)
        self._table = np.zeros(1)
        self._lock = threading.Lock()
        self._validate()

    @classmethod
    def power(cls, alpha: float) -> WeightGenerator:
        return cls("power", alpha=alpha)

    @classmethod
    def invlog(cls) -> WeightGenerator:
        return cls("invlog")

    @classmethod
    def constant(cls) -> WeightGenerator:
        return cls("constant")

    @classmethod
    def explicit(cls, values) -> WeightGenerator:
        return cls("explicit", values=tuple(values))

    def _validate(self) -> None:
        if self.kind == "power":
            if self.alpha is None or not 0.0 < self.alpha < 1.0:
                raise InvalidArgumentError("power weights need 0 < alpha < 1")
        elif self.kind == "explicit":
            v = np.asarray(self.values, dtype=float)
            if v.size == 0 or not np.all(np.isfinite(v)):
                raise InvalidArgumentError("explicit weights must be finite and nonempty")
            if v[0] != 1.0:
                raise InvalidArgumentError("explicit weights need w_1 = 1")
            if np.any(v <= 0) or np.any(np.diff(v) > 0):
                raise InvalidArgumentError(
                    "explicit weights must be positive and nonincreasing")

    # identity -------------------------------------------------------------

    def _key(self):
        return (self.kind, self.alpha, self.values)

    def __eq__(self, other):
        return isinstance(other, WeightGenerator) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"WeightGenerator({self.describe()})"

    def describe(self) -> str:
        if self.kind == "power":
            return f"power({fmt_num(self.alpha)})"
        if self.kind == "explicit":
            return "explicit(" + ";".join(fmt_num(v) for v in self.values) + ")"
        return self.kind

    @property
    def degenerate(self) -> bool:
        """True when ``w`` does not tend to zero (the constant sequence)."""
        return self.kind == "constant"

    @property
    def length(self) -> int | None:
        return len(self.values) if self.kind == "explicit" else None

    # values ---------------------------------------------------------------

    def weights(self, n: int) -> np.ndarray:
        """``w_1, ..., w_n`` as an array."""
        n = int(n)
        if n < 0:
            raise InvalidArgumentError("n must be nonnegative")
        if self.length is not None and n > self.length:
            raise ResourceLimitError(
                f"explicit weights have length {self.length}, {n} requested")
        k = np.arange(1, n + 1, dtype=float)
        if self.kind == "power":
            # k^a - (k-1)^a without cancellation
            with np.errstate(divide="ignore"):
                return k**self.alpha * -np.expm1(self.alpha * np.log1p(-1.0 / k))
        if self.kind == "constant":
            return np.ones(n)
        if self.kind == "invlog":
            w = np.ones(n)
            if n > 2:
                w[2:] = 1.0 / np.log(k[2:])
            return w
        return np.asarray(self.values[:n], dtype=float)

    def partial_sum(self, n: int) -> float:
        return float(self.partial_sums(np.array([n]))[0])

    def partial_sums(self, ns) -> np.ndarray:
        """``S_n = w_1 + ... + w_n`` at each integer in ``ns`` (``S_0 = 0``)."""
        ns = np.asarray(ns)
        if ns.size == 0:
            return np.zeros(ns.shape)
        if np.any(ns < 0):
            raise InvalidArgumentError("partial sums need n >= 0")
        top = int(ns.max())
        if top > PARTIAL_SUM_CAP:
            raise ResourceLimitError(
                f"partial sum index {top} exceeds cap {PARTIAL_SUM_CAP}")
        if self.kind == "power":
            return ns.astype(float) ** self.alpha
        if self.kind == "constant":
            return ns.astype(float)
        if self.kind == "explicit":
            if top > self.length:
                raise ResourceLimitError(
                    f"explicit weights have length {self.length}, "
                    f"partial sum at {top} requested")
            return self._dense(top)[ns.astype(np.int64)]
        return self._invlog_sums(ns.astype(np.int64))

    def _dense(self, top: int) -> np.ndarray:
        """Memoized table ``S_0 .. S_m`` with ``m >= top``.

        The table only ever grows, and a reader either sees the old complete
        table or the new complete one, so concurrent reads are safe.
        """
        table = self._table
        if table.size > top:
            return table
        with self._lock:
            table = self._table
            if table.size <= top:
                size = 1 << max(10, int(top).bit_length())
                if self.length is not None:
                    size = min(size, self.length)
                w = self.weights(size).astype(np.longdouble)
                table = np.concatenate([[0.0], np.cumsum(w).astype(float)])
                self._table = table
        return table

    def _invlog_sums(self, ns: np.ndarray) -> np.ndarray:
        top = int(ns.max())
        dense = self._dense(min(top, _DENSE_MAX))
        out = np.empty(ns.shape, dtype=float)
        small = ns < dense.size
        out[small] = dense[ns[small]]
        if not np.all(small):
            # Euler-Maclaurin tail from the end of the dense table
            k0 = dense.size - 1
            x = ns[~small].astype(float)

            def f(t):
                return 1.0 / np.log(t)

            def fp(t):
                return -1.0 / (t * np.log(t) ** 2)

            tail = (expi(np.log(x)) - expi(np.log(k0))
                    + (f(x) - f(k0)) / 2.0
                    + (fp(x) - fp(k0)) / 12.0)
            out[~small] = dense[k0] + tail
        return out
