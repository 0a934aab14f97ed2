"""Finite sequences: decreasing rearrangement, tensor products, and the
stream of largest pairwise products of a weight sequence."""

from __future__ import annotations

import heapq

import numpy as np

from .errors import InvalidArgumentError, ResourceLimitError

TENSOR_CAP = 10_000_000
TOP_K_CAP = 2_000_000


def as_seq(a, *, name: str = "a") -> np.ndarray:
    """Validate and convert to a 1-D float array (nonempty, finite)."""
    arr = np.asarray(a, dtype=float)
    if arr.ndim != 1:
        arr = arr.ravel()
    if arr.size == 0:
        raise InvalidArgumentError(f"{name} must be nonempty")
    if not np.all(np.isfinite(arr)):
        raise InvalidArgumentError(f"{name} contains non-finite entries")
    return arr


def rearrange(a) -> np.ndarray:
    """Return ``|a|`` sorted nonincreasing.

    Ties keep their original relative order (stable sort on the negated
    absolute values), so the output is deterministic bit for bit.
    """
    x = np.abs(as_seq(a))
    order = np.argsort(-x, kind="stable")
    return x[order]


def tensor(a, b, *, cap: int = TENSOR_CAP) -> np.ndarray:
    """Row-major tensor product ``(a_i b_j)`` of length ``len(a) * len(b)``."""
    a = as_seq(a, name="a")
    b = as_seq(b, name="b")
    if a.size * b.size > cap:
        raise ResourceLimitError(
            f"tensor size {a.size}*{b.size} exceeds cap {cap}")
    return np.outer(a, b).ravel()


def tensor_blocks(a, b, *, cap: int = TENSOR_CAP) -> np.ndarray:
    """Tensor product written as ``sum_i a_i * shift_i(b)``.

    Both inputs are zero-padded to a common length ``n``; the ``i``-th shift
    places ``b`` on positions ``(i-1)n+1 .. i n``.
    """
    a = as_seq(a, name="a")
    b = as_seq(b, name="b")
    n = max(a.size, b.size)
    if n * n > cap:
        raise ResourceLimitError(f"tensor size {n}*{n} exceeds cap {cap}")
    pa = np.zeros(n)
    pa[: a.size] = a
    pb = np.zeros(n)
    pb[: b.size] = b
    out = np.zeros(n * n)
    for i in range(n):
        shifted = np.zeros(n * n)
        shifted[i * n:(i + 1) * n] = pb
        out += pa[i] * shifted
    return out


def _weight_values(w, k: int) -> np.ndarray:
    # a weight generator exposes weights(n) and length (None = infinite)
    if hasattr(w, "weights"):
        length = getattr(w, "length", None)
        m = k if length is None else min(k, length)
        vals = np.asarray(w.weights(m), dtype=float)
    else:
        vals = as_seq(w, name="w")[:k]
    if vals.size == 0 or np.any(vals <= 0):
        raise InvalidArgumentError("weights must be positive")
    if np.any(np.diff(vals) > 0):
        raise InvalidArgumentError("weights must be nonincreasing")
    return vals


def top_k_products(w, k: int, *, cap: int = TOP_K_CAP) -> np.ndarray:
    """The ``k`` largest values of ``{w_i w_j : i, j >= 1}``, nonincreasing.

    Best-first expansion from ``(1, 1)`` over the product grid with
    successors ``(i+1, j)`` and ``(i, j+1)``; the grid is never
    materialized. Correct only because ``w`` is nonincreasing.

    ``w`` is either a weight generator or an explicit finite sequence; a
    finite sequence of length ``L`` defines an ``L x L`` grid.
    """
    k = int(k)
    if k < 1:
        raise InvalidArgumentError("k must be >= 1")
    if k > cap:
        raise ResourceLimitError(f"k={k} exceeds cap {cap}")
    vals = _weight_values(w, k).tolist()
    size = len(vals)
    if size * size < k:
        raise InvalidArgumentError(
            f"only {size * size} products available, k={k} requested")

    out: list[float] = []
    heap = [(-vals[0] * vals[0], 0, 0)]
    seen = {(0, 0)}
    push, pop = heapq.heappush, heapq.heappop
    while len(out) < k:
        negv, i, j = pop(heap)
        out.append(-negv)
        if i + 1 < size and (i + 1, j) not in seen:
            seen.add((i + 1, j))
            push(heap, (-vals[i + 1] * vals[j], i + 1, j))
        if j + 1 < size and (i, j + 1) not in seen:
            seen.add((i, j + 1))
            push(heap, (-vals[i] * vals[j + 1], i, j + 1))
    return np.asarray(out)

