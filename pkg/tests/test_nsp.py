import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from ldpc_sense.errors import CapExceeded, HypothesisNotCertified
from ldpc_sense.nsp import (
    check_nsp_k,
    check_nsp_set,
    enumerate_circuits,
    nsp_margin_by_circuits,
    real_rank,
    thm2_equivalence,
)
from ldpc_sense.tanner import chain_matrix

from corpus import small_corpus

PAIR = np.array([[1, 1]])


def test_set_examples():
    cert = check_nsp_set(PAIR, [0], 1, strict=True)
    assert not cert.holds
    S, nu, margin = cert.worst_case
    assert margin == 0
    assert [abs(x) for x in nu] == [Fraction(1, 2)] * 2
    cert = check_nsp_set(chain_matrix(), [0], 1, strict=True)
    assert cert.holds and cert.worst_case[2] == pytest.approx(-0.5)
    assert check_nsp_set(np.eye(4, dtype=int), [0, 1], 5).holds
    assert check_nsp_set(PAIR, [0], 1, strict=False).holds


def test_k_examples():
    H = chain_matrix()
    assert check_nsp_k(H, 1).holds
    cert = check_nsp_k(H, 2)
    assert not cert.holds
    S, nu, margin = cert.worst_case
    # the violation is exact and reproducible
    on = sum(abs(nu[i]) for i in S)
    off = sum(abs(nu[i]) for i in range(4) if i not in S)
    assert on >= off and margin == on - off
    assert not any(np.asarray(H, dtype=object) @ nu)
    assert check_nsp_k(H, 0).holds
    assert check_nsp_k(PAIR, 0).holds


def test_cap_and_bad_input():
    with pytest.raises(CapExceeded):
        check_nsp_set(np.ones((1, 12), dtype=int), range(6), cap=8)
    with pytest.raises(ValueError):
        check_nsp_set(PAIR, [3])
    with pytest.raises(ValueError):
        check_nsp_set(PAIR, [0], C=-1)


def test_thm2_examples():
    assert thm2_equivalence(chain_matrix(), 1, trials=100)
    with pytest.raises(HypothesisNotCertified):
        thm2_equivalence(PAIR, 1)
    assert thm2_equivalence(PAIR, 0)


def test_circuits():
    circ = enumerate_circuits(chain_matrix())
    assert len(circ) == 1
    assert [abs(x) for x in circ[0]] == [1, 1, 1, 1]
    assert real_rank(chain_matrix()) == 3


def _random_matrix(rng):
    m = int(rng.integers(1, 5))
    n = int(rng.integers(m + 1, 9))
    return rng.integers(-1, 2, size=(m, n))


def test_lp_matches_circuit_oracle_on_random_matrices():
    rng = np.random.default_rng(21)
    checked = 0
    while checked < 40:
        H = _random_matrix(rng)
        n = H.shape[1]
        if real_rank(H) == n:
            continue
        for C in (1, Fraction(1, 2), 2):
            S = sorted(rng.choice(n, int(rng.integers(1, min(n, 4) + 1)), replace=False).tolist())
            lp = check_nsp_set(H, S, C, mode="rational").worst_case[2]
            assert lp == nsp_margin_by_circuits(H, S, C)
        checked += 1


@pytest.mark.parametrize("name", sorted(n for n, H in small_corpus().items() if H.shape[1] <= 10))
def test_lp_matches_circuit_oracle_on_corpus(name):
    H = small_corpus()[name]
    n = H.shape[1]
    for k in (1, 2):
        for S in itertools.islice(itertools.combinations(range(n), k), 12):
            lp = check_nsp_set(H, S).worst_case
            oracle = nsp_margin_by_circuits(H, S)
            assert (lp is None) == (oracle is None)
            if lp is not None:
                assert float(lp[2]) == pytest.approx(float(oracle), abs=1e-9)


@settings(max_examples=25, deadline=None)
@given(arrays(np.int64, st.tuples(st.integers(1, 3), st.integers(2, 6)), elements=st.integers(0, 1)))
def test_monotone_in_k_and_C(H):
    grid = [(k, C) for k in (1, 2, 3) for C in (Fraction(1, 2), 1, 2)]
    verdict = {(k, C): check_nsp_k(H, k, C).holds for k, C in grid}
    for (k, C), ok in verdict.items():
        if ok:
            for (k2, C2), ok2 in verdict.items():
                if k2 <= k and C2 <= C:
                    assert ok2
