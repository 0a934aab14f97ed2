"""Norm evaluation and Koethe duality for the concrete spaces."""

from __future__ import annotations

import numpy as np

from ..errors import InvalidArgumentError, UnsupportedOperationError
from ..seqcore import as_seq, rearrange
from .descriptor import SpaceDescriptor, lp, lpq, orlicz
from .orlicz import OrliczGenerator, luxemburg_rows


def _dual_exponent(p: float) -> float:
    if p == 1.0:
        return np.inf
    if np.isinf(p):
        return 1.0
    return p / (p - 1.0)


def _sorted_rows(X) -> np.ndarray:
    X = np.abs(np.asarray(X, dtype=float))
    if X.ndim == 1:
        X = X[None, :]
    return -np.sort(-X, axis=1)


def norm_rows(space: SpaceDescriptor, X) -> np.ndarray:
    """Norms of each row of a 2-D array (rows need not be sorted)."""
    X = _sorted_rows(X)
    n_rows, length = X.shape
    if length == 0:
        return np.zeros(n_rows)
    f = space.family
    if f == "orlicz":
        return luxemburg_rows(space.orlicz, X)

    top = X[:, 0]
    scale = np.where(top > 0, top, 1.0)
    Y = X / scale[:, None]
    k = np.arange(1, length + 1, dtype=float)
    if f == "lp":
        p = space.p
        if np.isinf(p):
            out = Y[:, 0]
        elif p == 1.0:
            out = Y.sum(axis=1)
        else:
            out = (Y**p).sum(axis=1) ** (1.0 / p)
    elif f == "lpq":
        p, q = space.p, space.q
        if np.isinf(q):
            out = (k ** (1.0 / p - 1.0) * np.cumsum(Y, axis=1)).max(axis=1)
        else:
            r = q / p
            with np.errstate(divide="ignore"):
                w = k**r * -np.expm1(r * np.log1p(-1.0 / k))
            out = ((Y**q) * w).sum(axis=1) ** (1.0 / q)
    else:
        q = space.q
        w = space.weight.weights(length)
        out = ((Y**q) * w).sum(axis=1) ** (1.0 / q)
    return np.where(top > 0, out * scale, 0.0)


def norm(space: SpaceDescriptor, a) -> float:
    """Norm of a finite sequence in ``space``.

    Every family factors through the decreasing rearrangement, so the
    result is rearrangement invariant and absolutely homogeneous.
    """
    if not isinstance(space, SpaceDescriptor):
        raise InvalidArgumentError("space must be a SpaceDescriptor")
    x = rearrange(a)
    return float(norm_rows(space, x[None, :])[0])


def kothe_dual(space: SpaceDescriptor) -> SpaceDescriptor:
    """Koethe dual for the families where a formula is known.

    ``lp(p) -> lp(p')``, ``lpq(p, q) -> lpq(p', q')``, and
    ``orlicz(N) -> orlicz(conjugate(N))`` (numerical conjugate rescaled to
    value 1 at 1). ``orlicz(power(1))`` is ``l_1``, whose dual is ``l_inf``.
    """
    f = space.family
    if f == "lp":
        return lp(_dual_exponent(space.p))
    if f == "lpq":
        return lpq(_dual_exponent(space.p), _dual_exponent(space.q))
    if f == "orlicz":
        N = space.orlicz
        if N.kind == "power" and N.p == 1.0:
            return lp(np.inf)
        return orlicz(OrliczGenerator.conjugate_of(N))
    raise UnsupportedOperationError(
        "no Koethe dual formula for general Lorentz spaces")


def sup_norm(a) -> float:
    return float(np.max(np.abs(as_seq(a))))


def l1_norm(a) -> float:
    return float(np.sum(np.abs(as_seq(a))))
