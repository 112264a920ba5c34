import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from ldpc_sense.errors import CapExceeded, DimensionMismatch
from ldpc_sense.gf2 import (
    as_binary_vector,
    enumerate_codewords,
    nullspace_basis_gf2,
    pack_rows,
    rank_gf2,
    syndrome_gf2,
    unpack_rows,
)
from ldpc_sense.tanner import hamming_matrix


def brute_kernel(M):
    """All binary x with M x = 0 (mod 2), by scanning every word."""
    M = np.asarray(M, dtype=np.int64)
    n = M.shape[1]
    words = np.array(list(itertools.product((0, 1), repeat=n)), dtype=np.int64)
    return words[np.all((words @ M.T) % 2 == 0, axis=1)]


def test_rank_examples():
    assert rank_gf2(hamming_matrix()) == 3
    assert rank_gf2(np.eye(4, dtype=int)) == 4
    assert rank_gf2(np.zeros((2, 5), dtype=int)) == 0


def test_rank_is_over_gf2_not_reals():
    # rows sum to zero mod 2 but are independent over the reals
    M = np.array([[1, 1, 0], [0, 1, 1], [1, 0, 1]])
    assert rank_gf2(M) == 2
    assert np.linalg.matrix_rank(M) == 3


def test_nullspace_examples():
    B = nullspace_basis_gf2(np.array([[1, 1]]))
    assert B.tolist() == [[1, 1]]
    assert nullspace_basis_gf2(np.eye(3, dtype=int)).shape == (0, 3)
    H = hamming_matrix()
    B = nullspace_basis_gf2(H)
    assert B.shape == (4, 7)
    for b in B:
        assert not syndrome_gf2(H, b).any()


def test_enumerate_examples():
    words = enumerate_codewords(np.array([[1, 1]]))
    assert sorted(map(tuple, words.tolist())) == [(0, 0), (1, 1)]
    words = enumerate_codewords(hamming_matrix())
    assert len(words) == 16
    assert min(int(w.sum()) for w in words if w.any()) == 3
    with pytest.raises(CapExceeded):
        enumerate_codewords(hamming_matrix(), cap=8)


def test_syndrome_examples():
    H = hamming_matrix()
    assert not syndrome_gf2(H, np.zeros(7, dtype=int)).any()
    for i in range(7):
        e = np.zeros(7, dtype=int)
        e[i] = 1
        assert np.array_equal(syndrome_gf2(H, e), H[:, i])
    words = enumerate_codewords(H)
    assert not syndrome_gf2(H, (words[3] + words[9]) % 2).any()


def test_length_mismatch():
    with pytest.raises(DimensionMismatch):
        syndrome_gf2(hamming_matrix(), [1, 0, 1])
    with pytest.raises(DimensionMismatch):
        as_binary_vector([1, 0], 3)


def test_non_binary_rejected():
    with pytest.raises(ValueError):
        rank_gf2(np.array([[2, 0], [0, 1]]))


@settings(max_examples=60, deadline=None)
@given(arrays(np.int64, st.tuples(st.integers(1, 10), st.integers(1, 16)), elements=st.integers(0, 1)))
def test_basis_in_kernel_and_rank_nullity(M):
    B = nullspace_basis_gf2(M)
    for b in B:
        assert not syndrome_gf2(M, b).any()
    assert rank_gf2(M) + B.shape[0] == M.shape[1]
    if B.shape[0]:
        assert rank_gf2(B) == B.shape[0]


@settings(max_examples=40, deadline=None)
@given(arrays(np.int64, st.tuples(st.integers(1, 6), st.integers(1, 10)), elements=st.integers(0, 1)))
def test_codewords_match_brute_force_and_are_closed(M):
    words = enumerate_codewords(M)
    ref = brute_kernel(M)
    assert set(map(tuple, words.tolist())) == set(map(tuple, ref.tolist()))
    assert len(words) == len(set(map(tuple, words.tolist())))
    S = set(map(tuple, words.tolist()))
    for a in words:
        for b in words:
            assert tuple(((a + b) % 2).tolist()) in S


@settings(max_examples=40, deadline=None)
@given(arrays(np.uint8, st.tuples(st.integers(1, 8), st.integers(1, 70)), elements=st.integers(0, 1)))
def test_pack_roundtrip(M):
    assert np.array_equal(unpack_rows(pack_rows(M), M.shape[1]), M)
