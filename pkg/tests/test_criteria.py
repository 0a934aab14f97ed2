import numpy as np
import pytest

from optseq.criteria import (DIVERGES, HOLDS, INCONCLUSIVE, ClassifyConfig,
                             VerdictRule, classify_optimal_spaces,
                             equal_norm_upper_constant, holder_pairing_check,
                             lorentz_assump_constant, lorentz_did_ratio,
                             orlicz_estimate_constant,
                             orlicz_submultiplicative_constant,
                             orlicz_supermultiplicative_constant,
                             tensor_inequality_check, verdict)
from optseq.errors import InvalidArgumentError, UnsupportedOperationError
from optseq.optimal import SearchConfig
from optseq.spaces import OrliczGenerator, WeightGenerator, lorentz, lp, lpq, orlicz

W = WeightGenerator
O = OrliczGenerator
FAST = SearchConfig(L_max=3, restarts=2, max_evals=60, enum_cap=16, refine_top=2)


@pytest.mark.parametrize("trend, expected", [
    ([1.0, 1.0, 1.0, 1.0], HOLDS),
    ([1.0, 1.5, 1.6, 1.61], HOLDS),
    ([1.0, 2.0, 3.0, 4.0], DIVERGES),
    ([1.0, 2.0, 4.0, 8.0], DIVERGES),
    ([1.0, 1.1, 1.3, 1.6], DIVERGES),
    ([1.0, 1.0, 1.0, 1.2], INCONCLUSIVE),
    ([1.0, 2.0], INCONCLUSIVE),
    ([1.0, np.inf, 2.0], INCONCLUSIVE),
])
def test_verdict_rule(trend, expected):
    assert verdict(trend) == expected


def test_verdict_rule_validates():
    with pytest.raises(InvalidArgumentError):
        VerdictRule(agree_tol=0.0)


def test_orlicz_power_is_multiplicative():
    N = O.power(2.5)
    for rep in (orlicz_submultiplicative_constant(N), orlicz_supermultiplicative_constant(N)):
        assert rep.constant == pytest.approx(1.0, abs=1e-9)
        assert rep.verdict == HOLDS


def test_orlicz_powerlog_verdicts():
    N = O.powerlog(2, 1)
    assert orlicz_submultiplicative_constant(N).verdict == HOLDS
    assert orlicz_supermultiplicative_constant(N).verdict == DIVERGES
    assert orlicz_estimate_constant(N, 2.0, "lower").verdict == HOLDS
    assert orlicz_estimate_constant(N, 2.0, "upper").verdict == DIVERGES


def test_did_ratio():
    assert lorentz_did_ratio(W.constant()).constant == 1.0
    assert lorentz_did_ratio(W.invlog()).verdict == HOLDS
    assert lorentz_did_ratio(W.power(0.5)).verdict == DIVERGES


def test_assump_constant():
    rep = lorentz_assump_constant(2, W.power(0.5), mu=0.25)
    assert rep.constant == pytest.approx(1.0, abs=1e-9)
    assert rep.verdict == HOLDS
    assert lorentz_assump_constant(1, W.invlog()).verdict == DIVERGES


def test_equal_norm_upper():
    rep = equal_norm_upper_constant(lp(2), 2.0, search=FAST)
    assert rep.constant == pytest.approx(1.0, rel=1e-6)
    assert rep.verdict == HOLDS
    assert equal_norm_upper_constant(lp(2), 3.0, search=FAST).verdict == DIVERGES


@pytest.mark.parametrize("space", [lp(2), lpq(3, 1), lpq(2, np.inf)], ids=str)
def test_holder_pairing(space):
    rep = holder_pairing_check(space, samples=200, seed=3)
    assert rep.constant <= 1.0 + 1e-9
    assert rep.verdict == HOLDS
    if space == lp(2):
        assert rep.provenance["equal_case_ratio"] == pytest.approx(1.0, abs=1e-6)


def test_holder_pairing_needs_closed_form():
    with pytest.raises(UnsupportedOperationError):
        holder_pairing_check(lorentz(1, W.invlog()))


def test_tensor_lp_exact():
    rep = tensor_inequality_check(lp(1.5), samples=5, seed=1)
    assert np.allclose(rep.trend, 1.0, atol=1e-9)


def test_tensor_reports_are_seeded():
    space = orlicz(O.powerlog(2, 1))
    a = tensor_inequality_check(space, samples=4, seed=7)
    b = tensor_inequality_check(space, samples=4, seed=7)
    assert a == b


def test_classify_lpq():
    rep = classify_optimal_spaces(lpq(3, 1))
    assert rep["X_U"] == ["lp:p=1"]
    assert rep["X_L"] == ["lp:p=3"]
    assert rep["status"] == "identified"


def test_classify_lorentz_power():
    cfg = ClassifyConfig(did_ns=(100, 1000, 10000), assump_ls=(10, 100, 1000))
    rep = classify_optimal_spaces(lorentz(2, W.power(0.5)), cfg)
    assert rep["X_U"] == ["lp:p=2"]
    assert rep["X_L"] == ["lp:p=4"]
    assert not rep["inconclusive_criteria"]
