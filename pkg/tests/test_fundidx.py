import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from optseq.errors import InvalidArgumentError
from optseq.fundidx import (IndexEstimate, dilation_functions, fundamental_function,
                            fundamental_function_direct, fundamental_indices,
                            grobler_dodds, lorentz_indices, orlicz_indices,
                            phi_values, space_indices)
from optseq.spaces import OrliczGenerator, WeightGenerator, lorentz, lp, lpq, orlicz

W = WeightGenerator
O = OrliczGenerator

SPACES = [lp(1.5), lpq(3, 1), lpq(2, np.inf), lorentz(2, W.power(0.8)),
          lorentz(1, W.invlog()), orlicz(O.powerlog(2, 1)), orlicz(O.powerlog(3, -1))]
IDS = [s.describe() for s in SPACES]


@pytest.mark.parametrize("space", SPACES, ids=IDS)
def test_closed_form_matches_direct(space):
    for n in (1, 2, 7, 64):
        assert fundamental_function(space, n) == pytest.approx(
            fundamental_function_direct(space, n), rel=1e-9)


@pytest.mark.parametrize("space", SPACES, ids=IDS)
@given(n=st.integers(1, 10**6))
def test_phi_monotone_and_concave_ratio(space, n):
    a, b = phi_values(space, [n, n + 1])
    assert a <= b * (1 + 1e-12)
    # phi(n)/n is nonincreasing for symmetric norms
    assert b / (n + 1) <= a / n * (1 + 1e-9)


def test_phi_lp():
    assert np.allclose(phi_values(lp(2), [1, 4, 9]), [1, 2, 3])


def test_dilation_lp():
    m0, minf = dilation_functions(lp(2), 4, 1024)
    assert m0 == pytest.approx(0.5)
    assert minf == pytest.approx(2.0)


@pytest.mark.parametrize("p", [1.0, 1.5, 2.0, 4.0])
def test_lp_indices_closed_and_regressed(p):
    mu, nu = space_indices(lp(p))
    assert mu.method == "closed_form"
    assert (mu.value, nu.value) == pytest.approx((1 / p, 1 / p))
    mu, nu = fundamental_indices(lp(p))
    assert mu.method == "slope_regression"
    assert (mu.value, nu.value) == pytest.approx((1 / p, 1 / p), abs=1e-6)


@pytest.mark.parametrize("alpha", [0.5, 0.8])
@pytest.mark.parametrize("q", [1.0, 2.0])
def test_lorentz_power_indices(alpha, q):
    mu, nu = lorentz_indices(q, W.power(alpha))
    assert mu.value == pytest.approx(alpha / q, abs=0.02)
    assert nu.value == pytest.approx(alpha / q, abs=0.02)


def test_lorentz_invlog_indices():
    mu, nu = lorentz_indices(2.0, W.invlog())
    assert mu.value == pytest.approx(0.5, abs=0.03)
    assert mu.value <= nu.value + 1e-12


@pytest.mark.parametrize("p, a", [(2, 1), (3, -1), (2, 0)])
def test_orlicz_powerlog_indices(p, a):
    mu, nu = orlicz_indices(O.powerlog(p, a))
    assert mu.method == "grid_extremum"
    assert mu.value == pytest.approx(1 / p, abs=0.02)
    assert nu.value == pytest.approx(1 / p, abs=0.02)


def test_index_estimate_validates():
    with pytest.raises(InvalidArgumentError):
        IndexEstimate(1.5, "closed_form")
    with pytest.raises(InvalidArgumentError):
        IndexEstimate(0.5, "guess")


def test_grobler_dodds():
    gd = grobler_dodds(lpq(3, 1))
    assert (gd.delta, gd.sigma) == (1, 3)
    gd = grobler_dodds(lorentz(2, W.power(0.5)))
    assert gd.delta == 2
    assert gd.sigma == pytest.approx(4)
    gd = grobler_dodds(orlicz(O.power(3)))
    assert (gd.delta, gd.sigma) == pytest.approx((3, 3))
