import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from optseq.errors import InvalidArgumentError
from optseq.optimal import (LOWER_BOUND_OF_SUP, UPPER_BOUND_OF_INF, BlockConfiguration,
                            SearchConfig, _best_partition, brute_force_oracle,
                            eval_combination, lower_norm_estimate, phi_n_estimate,
                            upper_norm_estimate)
from optseq.spaces import OrliczGenerator, WeightGenerator, lorentz, lp, lpq, norm, orlicz

FAST = SearchConfig(L_max=3, restarts=2, max_evals=60, enum_cap=16, refine_top=2)

SPACES = [lp(2), lpq(3, 1), lpq(2, 4), lorentz(1, WeightGenerator.power(0.5)),
          orlicz(OrliczGenerator.powerlog(2, 1))]
IDS = [s.describe() for s in SPACES]


def test_block_configuration_validation():
    with pytest.raises(InvalidArgumentError):
        BlockConfiguration(((1.0, 2.0),))
    with pytest.raises(InvalidArgumentError):
        BlockConfiguration(((),))
    cfg = BlockConfiguration.from_shapes(lp(2), [[1, 1], [3]])
    assert cfg.lengths == (2, 1)
    assert cfg.normalization_error(lp(2)) < 1e-12


def test_eval_combination_unit_vectors():
    a = np.array([3.0, 1.0, 2.0])
    for space in SPACES:
        got = eval_combination(space, a, BlockConfiguration.unit_vectors(3))
        assert got == pytest.approx(norm(space, a), rel=1e-12)


def test_eval_combination_lp_is_isometric():
    cfg = BlockConfiguration.from_shapes(lp(2), [[1, 0.5], [1, 1, 1]])
    assert eval_combination(lp(2), [3, 4], cfg) == pytest.approx(5)


@pytest.mark.parametrize("space", SPACES, ids=IDS)
@settings(max_examples=8)
@given(a=st.lists(st.floats(0.05, 1.0), min_size=1, max_size=4))
def test_direction_sandwich(space, a):
    a = np.array(a)
    v = norm(space, a)
    up = upper_norm_estimate(space, a, FAST)
    phi = phi_n_estimate(space, a, FAST)
    low = lower_norm_estimate(space, a, FAST, phi=phi)
    assert up.direction == LOWER_BOUND_OF_SUP
    assert phi.direction == UPPER_BOUND_OF_INF
    assert low.direction == UPPER_BOUND_OF_INF
    tol = 1e-9 * v
    assert a.max() - tol <= low.value <= phi.value + tol
    assert phi.value <= v + tol <= up.value + 2 * tol
    assert up.value <= a.sum() + tol


@pytest.mark.parametrize("p", [1.0, 1.5, 3.0])
def test_lp_all_estimates_agree(p, rng):
    for _ in range(3):
        a = rng.random(int(rng.integers(1, 6)))
        v = norm(lp(p), a)
        for est in (upper_norm_estimate(lp(p), a, FAST), phi_n_estimate(lp(p), a, FAST),
                    lower_norm_estimate(lp(p), a, FAST)):
            assert est.value == pytest.approx(v, rel=1e-6)


def test_extra_candidates_only_improve():
    space = lpq(3, 1)
    a = np.array([1.0, 0.7, 0.2])
    base = upper_norm_estimate(space, a, FAST)
    extra = BlockConfiguration.from_shapes(space, [[1, 1, 1, 1]] * 3)
    more = upper_norm_estimate(space, a, FAST, extra_candidates=[extra])
    assert more.value >= base.value
    assert more.value >= eval_combination(space, a, extra) * (1 - 1e-12)
    lo = phi_n_estimate(space, a, FAST, extra_candidates=[extra])
    assert lo.value <= phi_n_estimate(space, a, FAST).value


def test_require_direction():
    est = phi_n_estimate(lp(2), [1.0, 1.0], FAST)
    assert est.require(UPPER_BOUND_OF_INF) == est.value
    with pytest.raises(InvalidArgumentError):
        est.require(LOWER_BOUND_OF_SUP)


def test_search_is_deterministic():
    space = lorentz(1, WeightGenerator.invlog())
    a = [1.0, 0.6, 0.3]
    assert upper_norm_estimate(space, a, FAST) == upper_norm_estimate(space, a, FAST)


def test_oracle_agreement():
    search = SearchConfig(L_max=2, restarts=4, max_evals=300, enum_cap=64, refine_top=4)
    space = lpq(3, 1)
    a = np.array([1.0, 0.5])
    hi, lo = brute_force_oracle(space, a)
    assert upper_norm_estimate(space, a, search).value == pytest.approx(hi, rel=0.02)
    assert phi_n_estimate(space, a, search).value == pytest.approx(lo, rel=0.02)


def test_oracle_limits():
    with pytest.raises(InvalidArgumentError):
        brute_force_oracle(lp(2), np.ones(4))


@given(costs=st.lists(st.floats(0.1, 10.0), min_size=15, max_size=15))
def test_best_partition_matches_brute_force(costs):
    # bitmask universe of 4 elements
    cost = np.array([np.inf] + costs)
    full = 15
    for K in (1, 2, 3):
        got, groups = _best_partition(cost, full, K)
        best = np.inf
        for labels in itertools.product(range(K), repeat=4):
            masks = [sum(1 << i for i in range(4) if labels[i] == g) for g in range(K)]
            masks = [m for m in masks if m]
            best = min(best, sum(cost[m] for m in masks))
        assert got == pytest.approx(best)
        assert sum(groups) == full
