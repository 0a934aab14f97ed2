"""Finite-n estimates of the optimal upper and lower sequence norms.

For a symmetric space ``E`` and coefficients ``a`` of length ``n``::

    ||a||_U(n) = sup  ||sum a_i x_i||_E
    Phi_n(a)   = inf  ||sum a_i x_i||_E
    ||a||_L(n) = inf { sum_k Phi_n(a^k) : a = sum_k a^k }

where sup and inf run over ``n`` pairwise disjoint unit vectors ``x_i``.
Because the norm of ``E`` only sees decreasing rearrangements, each
``x_i`` may be taken to be a finite nonincreasing positive block on its
own index range. Blocks are capped at ``L_max`` entries, so every sup
computed here is a lower bound of the true sup and every inf an upper
bound of the true inf. :class:`BoundedEstimate` carries that direction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize
from scipy.special import expit, softmax

from .errors import InvalidArgumentError, ResourceLimitError
from .seqcore import as_seq, rearrange
from .spaces import SpaceDescriptor, norm, norm_rows

LOWER_BOUND_OF_SUP = "lower_bound_of_sup"
UPPER_BOUND_OF_INF = "upper_bound_of_inf"
DIRECTIONS = (LOWER_BOUND_OF_SUP, UPPER_BOUND_OF_INF)

# logit clamp: keeps consecutive block ratios in [1e-13, 1 - 1e-13]
_THETA_CLIP = 30.0
_MAX_ENTRIES = 200_000
_POOL_SIZE = 8


@dataclass(frozen=True)
class SearchConfig:
    """Caps and budgets for the block search.

    ``enum_cap`` bounds the number of block-length tuples: all
    ``L_max**n`` tuples are tried when that fits, otherwise a seeded
    sample. Only the ``refine_top`` best tuples after screening get the
    Nelder-Mead refinement, with ``restarts`` starts of ``max_evals``
    evaluations each.
    """

    L_max: int = 6
    restarts: int = 8
    max_evals: int = 500
    rel_tol: float = 1e-7
    enum_cap: int = 64
    refine_top: int = 4
    K_max: int = 2
    partition_n_max: int = 12
    seed: int = 0

    def __post_init__(self):
        for name in ("L_max", "restarts", "max_evals", "enum_cap",
                     "refine_top", "K_max", "partition_n_max"):
            if int(getattr(self, name)) < 1:
                raise InvalidArgumentError(f"{name} must be >= 1")
        if not 0.0 < self.rel_tol < 1.0:
            raise InvalidArgumentError("rel_tol must be in (0, 1)")
        if not 0 <= int(self.seed) < 2**64:
            raise InvalidArgumentError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class BlockConfiguration:
    """``n`` disjoint blocks in canonical form (positive, nonincreasing)."""

    blocks: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        if not self.blocks:
            raise InvalidArgumentError("need at least one block")
        for b in self.blocks:
            if len(b) == 0:
                raise InvalidArgumentError("empty block")
            arr = np.asarray(b)
            if np.any(arr <= 0) or np.any(np.diff(arr) > 1e-12 * arr[0]):
                raise InvalidArgumentError(
                    "blocks must be positive and nonincreasing")

    @classmethod
    def from_shapes(cls, space: SpaceDescriptor, shapes) -> BlockConfiguration:
        """Scale each shape to norm one in ``space``."""
        rows = [np.asarray(s, dtype=float) for s in shapes]
        mat = _pad(rows)
        scale = norm_rows(space, mat)
        return cls(tuple(tuple((r / c).tolist()) for r, c in zip(rows, scale)))

    @classmethod
    def unit_vectors(cls, n: int) -> BlockConfiguration:
        return cls(((1.0,),) * int(n))

    @property
    def lengths(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.blocks)

    def key(self):
        """Ordering used for deterministic tie-breaks."""
        return (self.lengths, self.blocks)

    def normalization_error(self, space: SpaceDescriptor) -> float:
        return float(np.max(np.abs(norm_rows(space, _pad(self.blocks)) - 1.0)))

    def to_json(self) -> list:
        return [list(b) for b in self.blocks]


@dataclass(frozen=True)
class Decomposition:
    """``a = sum_k parts[k]``, with the configuration used to bound each part."""

    parts: tuple[tuple[float, ...], ...]
    witnesses: tuple[BlockConfiguration, ...]
    costs: tuple[float, ...]

    def to_json(self) -> dict:
        return {"parts": [list(p) for p in self.parts],
                "costs": list(self.costs),
                "witnesses": [w.to_json() for w in self.witnesses]}


@dataclass(frozen=True)
class BoundedEstimate:
    """A one-sided numeric estimate.

    ``direction`` says which side of the true value this lies on; call
    :meth:`require` before using it as a bound.
    """

    value: float
    direction: str
    evaluations: int
    witness: object
    pool: tuple = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        if self.direction not in DIRECTIONS:
            raise InvalidArgumentError(f"unknown direction {self.direction!r}")

    def require(self, direction: str) -> float:
        if self.direction != direction:
            raise InvalidArgumentError(
                f"estimate is a {self.direction}, {direction} required")
        return self.value

    def to_json(self) -> dict:
        w = self.witness
        return {"value": self.value, "direction": self.direction,
                "evaluations": self.evaluations,
                "witness": w.to_json() if hasattr(w, "to_json") else w}


# evaluation ----------------------------------------------------------------


def _pad(rows) -> np.ndarray:
    width = max(len(r) for r in rows)
    out = np.zeros((len(rows), width))
    for i, r in enumerate(rows):
        out[i, :len(r)] = r
    return out


def eval_combination(space: SpaceDescriptor, a, cfg: BlockConfiguration) -> float:
    """``||sum a_i x_i||`` for the blocks of ``cfg`` on disjoint ranges."""
    a = as_seq(a)
    if a.size != len(cfg.blocks):
        raise InvalidArgumentError(
            f"{a.size} coefficients for {len(cfg.blocks)} blocks")
    vec = np.concatenate([ai * np.asarray(b) for ai, b in zip(a, cfg.blocks)])
    return norm(space, vec)


def _eval_batch(space: SpaceDescriptor, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Norms of ``sum_i A[c, i] * B[c, i, :]`` for each candidate ``c``.

    ``B`` holds normalized, zero-padded blocks; ``A`` has shape ``(C, n)``.
    """
    C = B.shape[0]
    return norm_rows(space, (A[:, :, None] * B).reshape(C, -1))


def _normalize(space: SpaceDescriptor, B: np.ndarray) -> np.ndarray:
    C, n, L = B.shape
    scale = norm_rows(space, B.reshape(C * n, L)).reshape(C, n, 1)
    return B / scale


def _shapes_from_theta(theta: np.ndarray, lengths, L: int) -> np.ndarray:
    """Unnormalized blocks ``(C, n, L)`` from logit ratio parameters.

    Entry ``k+1`` of a block is entry ``k`` times ``expit(theta)``.
    """
    theta = np.atleast_2d(theta)
    C = theta.shape[0]
    n = len(lengths)
    ratios = np.zeros((C, n, L))
    pos = 0
    for i, li in enumerate(lengths):
        ratios[:, i, 0] = 1.0
        if li > 1:
            t = np.clip(theta[:, pos:pos + li - 1], -_THETA_CLIP, _THETA_CLIP)
            ratios[:, i, 1:li] = expit(t)
            pos += li - 1
    return np.cumprod(ratios, axis=2)


def _config_from(B: np.ndarray, lengths) -> BlockConfiguration:
    return BlockConfiguration(tuple(tuple(B[i, :li].tolist())
                                    for i, li in enumerate(lengths)))


def _config_array(cfg: BlockConfiguration, L: int) -> np.ndarray:
    out = np.zeros((len(cfg.blocks), L))
    for i, b in enumerate(cfg.blocks):
        out[i, :len(b)] = b
    return out


# search --------------------------------------------------------------------


def _length_tuples(n: int, search: SearchConfig, rng) -> list[tuple[int, ...]]:
    L = search.L_max
    if L**n <= search.enum_cap:
        return list(itertools.product(range(1, L + 1), repeat=n))
    tuples = [(li,) * n for li in range(1, L + 1)]
    seen = set(tuples)
    budget = max(search.enum_cap, len(tuples))
    attempts = 0
    while len(tuples) < budget and attempts < 50 * budget:
        t = tuple(int(x) for x in rng.integers(1, L + 1, size=n))
        attempts += 1
        if t not in seen:
            seen.add(t)
            tuples.append(t)
    return tuples


class _Search:
    """Best-first bookkeeping for one extremal search."""

    def __init__(self, space, a, sense, L):
        self.space = space
        self.a = a
        self.sense = sense  # +1 maximize, -1 minimize
        self.L = L
        self.evaluations = 0
        self.found: dict = {}

    def score(self, value):
        return self.sense * value

    def record(self, values, B, lengths):
        for v, Bc in zip(values, B):
            cfg = _config_from(Bc, lengths)
            k = cfg.key()
            if k not in self.found or self.score(v) > self.score(self.found[k][0]):
                self.found[k] = (float(v), cfg)

    def batch(self, B_raw, lengths):
        B = _normalize(self.space, B_raw)
        A = np.broadcast_to(self.a, (B.shape[0], self.a.size))
        vals = _eval_batch(self.space, A, B)
        self.evaluations += B.shape[0]
        return vals, B

    def ranked(self):
        # best first; exact ties go to the lexicographically smallest witness
        items = sorted(self.found.values(),
                       key=lambda vc: (-self.score(vc[0]), vc[1].key()))
        return items


def _extremal(space: SpaceDescriptor, a, search: SearchConfig, sense: int,
              extra_candidates=()) -> BoundedEstimate:
    if not isinstance(space, SpaceDescriptor):
        raise InvalidArgumentError("space must be a SpaceDescriptor")
    a = rearrange(a)
    n = a.size
    L = search.L_max
    if n * L > _MAX_ENTRIES:
        raise ResourceLimitError(f"n * L_max = {n * L} exceeds {_MAX_ENTRIES}")
    rng = np.random.default_rng(search.seed)
    st = _Search(space, a, sense, max(L, max((max(c.lengths) for c in extra_candidates),
                                              default=1)))
    L = st.L

    for cfg in extra_candidates:
        if len(cfg.blocks) != n:
            raise InvalidArgumentError("extra candidate has the wrong block count")
        B = _config_array(cfg, L)[None]
        vals, Bn = st.batch(B, cfg.lengths)
        st.record(vals, Bn, cfg.lengths)

    # screening: flat blocks plus random shapes for every length tuple
    tuples = _length_tuples(n, search, rng)
    screened = []
    for lengths in tuples:
        dim = sum(lengths) - n
        thetas = [np.full(dim, _THETA_CLIP)]
        if dim:
            thetas += [rng.normal(0.0, 2.0, dim) for _ in range(search.restarts)]
        T = np.array(thetas)
        vals, B = st.batch(_shapes_from_theta(T, lengths, L), lengths)
        st.record(vals, B, lengths)
        best = int(np.argmax(sense * vals))
        screened.append((-sense * vals[best], lengths, T[best]))

    # Nelder-Mead on the most promising tuples that have free parameters
    screened.sort(key=lambda s: (s[0], s[1]))
    refined = [s for s in screened if sum(s[1]) > n][:search.refine_top]
    for _, lengths, theta0 in refined:
        dim = theta0.size

        def objective(theta, lengths=lengths):
            vals, B = st.batch(_shapes_from_theta(theta[None], lengths, L), lengths)
            st.record(vals, B, lengths)
            return -sense * float(vals[0])

        starts = [np.clip(theta0, -8.0, 8.0)]
        starts += [rng.normal(0.0, 2.0, dim) for _ in range(search.restarts - 1)]
        for x0 in starts:
            f0 = objective(x0)
            simplex = np.vstack([x0, x0 + np.eye(dim)])
            minimize(objective, x0, method="Nelder-Mead",
                     options={"maxfev": search.max_evals,
                              "initial_simplex": simplex,
                              "xatol": np.inf,
                              "fatol": search.rel_tol * max(abs(f0), 1e-300)})

    ranked = st.ranked()
    value, witness = ranked[0]
    direction = LOWER_BOUND_OF_SUP if sense > 0 else UPPER_BOUND_OF_INF
    pool = tuple(cfg for _, cfg in ranked[:_POOL_SIZE])
    return BoundedEstimate(value, direction, st.evaluations, witness, pool)


def upper_norm_estimate(space: SpaceDescriptor, a, search: SearchConfig = SearchConfig(),
                        extra_candidates=()) -> BoundedEstimate:
    """Lower bound of ``||a||_U(n)`` by searching block configurations.

    Length-1 blocks are always among the candidates, so the result is at
    least ``norm(space, a)``. ``extra_candidates`` (configurations for the
    rearranged ``a``) are evaluated as well.
    """
    return _extremal(space, a, search, +1, extra_candidates)


def phi_n_estimate(space: SpaceDescriptor, a, search: SearchConfig = SearchConfig(),
                   extra_candidates=()) -> BoundedEstimate:
    """Upper bound of ``Phi_n(a)``; at most ``norm(space, a)``."""
    return _extremal(space, a, search, -1, extra_candidates)


# lower space ---------------------------------------------------------------


def _pool_costs(space, parts: np.ndarray, pool_B: np.ndarray) -> np.ndarray:
    """``min_w eval(part, w)`` for each row of ``parts``; shape ``(P,)``."""
    P, n = parts.shape
    W = pool_B.shape[0]
    A = np.repeat(parts, W, axis=0)
    B = np.tile(pool_B, (P, 1, 1))
    return _eval_batch(space, A, B).reshape(P, W).min(axis=1)


def _pool_argmin(space, part: np.ndarray, pool_B: np.ndarray) -> int:
    W = pool_B.shape[0]
    A = np.broadcast_to(part, (W, part.size))
    return int(np.argmin(_eval_batch(space, A, pool_B)))


def _best_partition(cost: np.ndarray, full: int, K: int) -> tuple[float, list[int]]:
    """Cheapest split of the bitmask ``full`` into at most ``K`` groups."""
    if K == 1:
        return float(cost[full]), [full]
    if K == 2:
        low = full & -full
        best, groups = float(cost[full]), [full]
        sub = (full - 1) & full
        while sub:
            if sub & low:
                v = cost[sub] + cost[full ^ sub]
                if v < best:
                    best, groups = float(v), [sub, full ^ sub]
            sub = (sub - 1) & full
        return best, groups
    # general K: dynamic programming over submasks
    size = full + 1
    prev = cost.copy()
    choice = [None] * (K + 1)
    for k in range(2, K + 1):
        cur = prev.copy()
        pick = np.zeros(size, dtype=np.int64)
        for S in range(1, size):
            if S & ~full:
                continue
            low = S & -S
            sub = (S - 1) & S
            while sub:
                if sub & low:
                    v = cost[sub] + prev[S ^ sub]
                    if v < cur[S]:
                        cur[S], pick[S] = v, sub
                sub = (sub - 1) & S
        choice[k] = pick
        prev = cur
    groups = []
    S, k = full, K
    while k >= 2 and S:
        sub = int(choice[k][S])
        if sub == 0:
            k -= 1
            continue
        groups.append(sub)
        S ^= sub
        k -= 1
    if S:
        groups.append(S)
    return float(prev[full]), groups


def lower_norm_estimate(space: SpaceDescriptor, a, search: SearchConfig = SearchConfig(),
                        phi: BoundedEstimate | None = None) -> BoundedEstimate:
    """Upper bound of ``||a||_L(n)`` over nonnegative decompositions of ``|a|``.

    Candidates: the trivial decomposition, splits of the support into at
    most ``K_max`` groups (when the support has at most
    ``partition_n_max`` entries), and a Nelder-Mead refinement of soft
    splits. Each part is charged the least value of ``eval_combination``
    over a pool of good configurations for ``Phi_n(a)``; any single
    configuration bounds ``Phi_n`` of the part from above.
    """
    a = rearrange(a)
    n = a.size
    if phi is None:
        phi = phi_n_estimate(space, a, search)
    phi_value = phi.require(UPPER_BOUND_OF_INF)
    pool = list(phi.pool) or [phi.witness]
    unit = BlockConfiguration.unit_vectors(n)
    if unit not in pool:
        pool.append(unit)
    L = max(max(c.lengths) for c in pool)
    pool_B = np.stack([_config_array(c, L) for c in pool])
    evaluations = phi.evaluations

    best_value = phi_value
    best_parts = [a.copy()]
    support = np.flatnonzero(a)
    m = support.size
    K = search.K_max

    if K >= 2 and 2 <= m <= search.partition_n_max:
        masks = np.arange(1 << m)
        bits = (masks[:, None] >> np.arange(m)[None, :]) & 1
        parts = np.zeros((masks.size, n))
        parts[:, support] = bits * a[support]
        cost = np.zeros(masks.size)
        cost[1:] = _pool_costs(space, parts[1:], pool_B)
        evaluations += (masks.size - 1) * len(pool)
        value, groups = _best_partition(cost, (1 << m) - 1, K)
        if value < best_value:
            best_value = value
            best_parts = [parts[g] for g in groups]

    if K >= 2 and m >= 2:
        counter = [0]

        def objective(theta):
            w = softmax(theta.reshape(m, K), axis=1)
            P = np.zeros((K, n))
            P[:, support] = (w * a[support][:, None]).T
            counter[0] += K * len(pool)
            return float(_pool_costs(space, P, pool_B).sum())

        # start from the best split found so far
        x0 = np.zeros((m, K))
        for k, part in enumerate(best_parts[:K]):
            x0[part[support] > 0, k] = 5.0
        x0 = x0.ravel()
        dim = x0.size
        res = minimize(objective, x0, method="Nelder-Mead",
                       options={"maxfev": search.max_evals,
                                "initial_simplex": np.vstack([x0, x0 + np.eye(dim)]),
                                "xatol": np.inf,
                                "fatol": search.rel_tol * best_value})
        evaluations += counter[0]
        if res.fun < best_value:
            w = softmax(res.x.reshape(m, K), axis=1)
            P = np.zeros((K, n))
            P[:, support] = (w * a[support][:, None]).T
            best_value = float(res.fun)
            best_parts = [p for p in P if np.any(p > 0)]

    witnesses, costs = [], []
    for part in best_parts:
        i = _pool_argmin(space, part, pool_B)
        witnesses.append(pool[i])
        costs.append(eval_combination(space, part, pool[i]))
    witness = Decomposition(tuple(tuple(p.tolist()) for p in best_parts),
                            tuple(witnesses), tuple(costs))
    return BoundedEstimate(float(best_value), UPPER_BOUND_OF_INF, evaluations, witness)


# oracle and batch driver ---------------------------------------------------


def brute_force_oracle(space: SpaceDescriptor, a, L_max: int = 2,
                       resolution: int = 50) -> tuple[float, float]:
    """Exhaustive ``(max, min)`` of ``eval_combination`` over a grid.

    Blocks have length at most ``L_max`` and consecutive entry ratios on
    the grid ``{1/resolution, 2/resolution, ..., 1}``. Small cases only.
    """
    a = rearrange(a)
    n = a.size
    if n > 3 or not 1 <= L_max <= 2 or not 1 <= resolution <= 50:
        raise InvalidArgumentError(
            "oracle needs n <= 3, 1 <= L_max <= 2, resolution <= 50")
    ratios = np.arange(1, resolution + 1) / resolution
    # every block: (1,) or (1, r); normalize each shape once
    shapes = np.zeros((1 + (resolution if L_max == 2 else 0), L_max))
    shapes[:, 0] = 1.0
    if L_max == 2:
        shapes[1:, 1] = ratios
    shapes /= norm_rows(space, shapes)[:, None]
    idx = np.array(list(itertools.product(range(shapes.shape[0]), repeat=n)))
    B = shapes[idx]
    A = np.broadcast_to(a, (B.shape[0], n))
    vals = _eval_batch(space, A, B)
    return float(vals.max()), float(vals.min())


def optimal_fundamental(space: SpaceDescriptor, n_list,
                        search: SearchConfig = SearchConfig()) -> list[tuple[int, float, float]]:
    """``(n, sup-estimate of phi_U(n), inf-estimate of Phi_n(1^n))`` rows."""
    rows = []
    for n in n_list:
        ones = np.ones(int(n))
        up = upper_norm_estimate(space, ones, search)
        lo = phi_n_estimate(space, ones, search)
        rows.append((int(n), up.require(LOWER_BOUND_OF_SUP),
                     lo.require(UPPER_BOUND_OF_INF)))
    return rows
