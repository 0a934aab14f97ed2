import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from optseq.errors import InvalidArgumentError, UnsupportedOperationError
from optseq.spaces import (OrliczGenerator, SpaceParseError, WeightGenerator,
                           kothe_dual, l1_norm, lorentz, lp, lpq, luxemburg_rows,
                           norm, norm_rows, orlicz, parse_space, sup_norm,
                           young_conjugate)

SPACES = [
    lp(1), lp(1.5), lp(2), lp(np.inf),
    lpq(2, 1), lpq(3, 2), lpq(2, np.inf),
    lorentz(1, WeightGenerator.power(0.5)),
    lorentz(2, WeightGenerator.invlog()),
    lorentz(2, WeightGenerator.constant()),
    orlicz(OrliczGenerator.power(2)),
    orlicz(OrliczGenerator.powerlog(2, 1)),
    orlicz(OrliczGenerator.powerlog(3, -1)),
]
IDS = [s.describe() for s in SPACES]

vectors = st.lists(st.floats(1e-3, 10.0), min_size=1, max_size=10)


@pytest.mark.parametrize("space", SPACES, ids=IDS)
def test_describe_parse_round_trip(space):
    assert parse_space(space.describe()) == space


@pytest.mark.parametrize("text, token", [
    ("lq:p=2", "lq"),
    ("lp:p=@", "@"),
    ("lorentz:q=2,w=wiggle(1)", "wiggle"),
    ("orlicz:powerlog(p=2)", "powerlog"),
])
def test_parse_errors_name_the_token(text, token):
    with pytest.raises(SpaceParseError) as exc:
        parse_space(text)
    assert exc.value.token == token


def test_invalid_parameters():
    with pytest.raises(InvalidArgumentError):
        lp(0.5)
    with pytest.raises(InvalidArgumentError):
        lpq(1, 2)


def test_closed_forms():
    assert norm(lp(2), [3, 4]) == pytest.approx(5)
    assert norm(lp(np.inf), [3, -4]) == 4
    # l_{2,inf}: sup_n n^{-1/2} sum_{k<=n} a*_k
    assert norm(lpq(2, np.inf), [1, 1, 1, 1]) == pytest.approx(2.0)
    # lorentz with q=1: sum a*_k w_k
    w = WeightGenerator.power(0.5).weights(3)
    assert norm(lorentz(1, WeightGenerator.power(0.5)), [1, 3, 2]) == pytest.approx(
        3 * w[0] + 2 * w[1] + w[2])
    assert norm(orlicz(OrliczGenerator.power(3)), [1, 2]) == pytest.approx(9 ** (1 / 3))


def test_norm_rows_matches_norm(rng):
    X = rng.random((5, 7))
    for space in SPACES:
        got = norm_rows(space, X)
        assert np.allclose(got, [norm(space, x) for x in X], rtol=1e-12)


@pytest.mark.parametrize("space", SPACES, ids=IDS)
@given(a=vectors, seed=st.integers(0, 2**32 - 1), c=st.floats(0.01, 100))
def test_symmetry_homogeneity_chain(space, a, seed, c):
    a = np.array(a)
    v = norm(space, a)
    perm = np.random.default_rng(seed).permutation(a.size)
    assert norm(space, -a[perm]) == pytest.approx(v, rel=1e-9)
    assert norm(space, c * a) == pytest.approx(c * v, rel=1e-9)
    assert sup_norm(a) * (1 - 1e-9) <= v
    if space.family != "lpq" or space.q <= space.p:
        assert v <= l1_norm(a) * (1 + 1e-9)


@pytest.mark.parametrize("space", SPACES, ids=IDS)
@given(a=vectors, bump=st.floats(0.0, 5.0), i=st.integers(0, 9))
def test_lattice_monotone(space, a, bump, i):
    a = np.array(a)
    b = a.copy()
    b[i % a.size] += bump
    assert norm(space, a) <= norm(space, b) * (1 + 1e-9)


@pytest.mark.parametrize("N", [OrliczGenerator.power(2), OrliczGenerator.powerlog(2, 1),
                               OrliczGenerator.powerlog(3, -1)], ids=repr)
@given(a=st.lists(st.floats(1e-4, 10.0), min_size=2, max_size=10))
def test_luxemburg_modular_is_one(N, a):
    x = np.array(a).reshape(1, -1)
    u = luxemburg_rows(N, x)[0]
    assert np.sum(N(x / u)) == pytest.approx(1.0, abs=1e-9)


@given(s=st.floats(1e-3, 1.0), t=st.floats(1e-3, 1.0))
def test_young_inequality(s, t):
    N = OrliczGenerator.powerlog(2, 1)
    Nt = young_conjugate(N, np.array([t]))[0]
    assert s * t <= N(np.array([s]))[0] + Nt + 1e-12


def test_young_conjugate_of_power():
    # N(s)=s^2 has conjugate t^2/4 while the maximizer s=t/2 stays in (0,1]
    t = np.array([0.1, 0.5, 1.0])
    assert np.allclose(young_conjugate(OrliczGenerator.power(2), t), t**2 / 4, rtol=1e-8)


def test_kothe_dual():
    assert kothe_dual(lp(3)) == lp(1.5)
    assert kothe_dual(lpq(2, np.inf)) == lpq(2, 1)
    assert kothe_dual(orlicz(OrliczGenerator.power(1))) == lp(np.inf)
    with pytest.raises(UnsupportedOperationError):
        kothe_dual(lorentz(1, WeightGenerator.invlog()))
