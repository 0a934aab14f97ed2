import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from optseq.errors import InvalidArgumentError, ResourceLimitError
from optseq.seqcore import as_seq, rearrange, tensor, tensor_blocks, top_k_products
from optseq.spaces import WeightGenerator

vectors = st.lists(st.floats(-1e3, 1e3, allow_nan=False), min_size=1, max_size=12)


def test_rearrange_basic():
    assert rearrange([1, -3, 2]).tolist() == [3, 2, 1]


def test_as_seq_rejects_bad_input():
    with pytest.raises(InvalidArgumentError):
        as_seq([1.0, np.nan])
    with pytest.raises(InvalidArgumentError):
        as_seq([])


@given(vectors)
def test_rearrange_is_sorted_abs_and_idempotent(a):
    r = rearrange(a)
    assert np.all(np.diff(r) <= 0)
    assert np.allclose(np.sort(np.abs(a))[::-1], r)
    assert np.array_equal(rearrange(r), r)


@given(vectors, vectors)
def test_tensor_blocks_matches_tensor(a, b):
    blocks = rearrange(tensor_blocks(a, b))
    full = rearrange(tensor(a, b))
    # blocks are zero padded to a square grid
    assert np.array_equal(blocks[: full.size], full)
    assert not blocks[full.size:].any()


def test_tensor_small():
    assert tensor([1, 2], [3, 1]).tolist() == [3, 1, 6, 2]
    assert tensor_blocks([1, 2], [3]).tolist() == [3, 0, 6, 0]


def test_tensor_cap():
    with pytest.raises(ResourceLimitError):
        tensor(np.ones(10), np.ones(10), cap=50)


@pytest.mark.parametrize("w", [WeightGenerator.power(0.5), WeightGenerator.invlog(),
                               WeightGenerator.constant()])
def test_top_k_products_against_brute_force(w):
    v = w.weights(40)
    brute = np.sort(np.outer(v, v).ravel())[::-1]
    got = top_k_products(w, 60)
    assert np.allclose(got, brute[:60], rtol=1e-13)


def test_top_k_explicit(rng):
    for _ in range(5):
        vals = np.sort(rng.random(15))[::-1]
        brute = np.sort(np.outer(vals, vals).ravel())[::-1]
        k = int(rng.integers(1, 50))
        assert np.allclose(top_k_products(vals, k), brute[:k])
