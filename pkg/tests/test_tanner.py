import itertools
import math

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from ldpc_sense.errors import AlistParseError, CapExceeded, ConstructionError, ExpansionTooWeak
from ldpc_sense.tanner import (
    GIRTH_INFINITE,
    ConstructionSpec,
    TannerGraph,
    chain_matrix,
    check_expansion,
    construct,
    corollary1_k_bound,
    girth,
    girth_nonbacktracking,
    hamming_matrix,
    neighbourhood_size,
    read_alist,
    write_alist,
)


def nx_girth(H):
    """Independent oracle: girth of the bipartite graph as built by networkx."""
    G = nx.Graph()
    m, n = H.shape
    G.add_edges_from((("c", j), ("v", i)) for j, i in zip(*np.nonzero(H)))
    return nx.girth(G)


def test_girth_examples():
    assert girth(chain_matrix()) == GIRTH_INFINITE
    assert girth(hamming_matrix()) == 4
    H = construct(ConstructionSpec("girth_peg", 96, 3, 6, seed=0))
    g = girth(H)
    assert g >= 6
    assert g == girth_nonbacktracking(H) == nx_girth(H)


def test_hamming_columns_share_two_rows():
    H = hamming_matrix()
    assert np.array_equal(H[:, 2], [1, 1, 0]) and np.array_equal(H[:, 6], [1, 1, 1])
    assert H.sum(axis=0).tolist() == [1, 1, 2, 1, 2, 2, 3]


@settings(max_examples=60, deadline=None)
@given(arrays(np.int64, st.tuples(st.integers(1, 8), st.integers(1, 16)), elements=st.integers(0, 1)))
def test_girth_matches_oracles(H):
    if not H.any():
        return
    g = girth(H)
    assert g == girth_nonbacktracking(H)
    assert g == nx_girth(H)


def test_gallager_regularity_across_seeds():
    for seed in range(5):
        H = construct(ConstructionSpec("gallager_regular", 24, 3, 6, seed=seed))
        assert H.shape == (12, 24)
        assert set(H.sum(axis=0).tolist()) == {3}
        assert set(H.sum(axis=1).tolist()) == {6}


def test_peg_regular_and_girth():
    H = construct(ConstructionSpec("girth_peg", 48, 3, 6, seed=2))
    assert set(H.sum(axis=0).tolist()) == {3}
    assert set(H.sum(axis=1).tolist()) == {6}
    assert girth(H) >= 6


def test_random_column_weight():
    H = construct(ConstructionSpec("random_column_weight", 200, 8, 16, seed=1, m=100))
    assert set(H.sum(axis=0).tolist()) == {8}


def test_dense_pm1_zero_fraction():
    H = construct(ConstructionSpec("dense_pm1", 10_000, seed=0, m=1))
    frac = float(np.mean(H == 0))
    assert 0.66 <= frac <= 0.674
    assert set(np.unique(H).tolist()) <= {-1, 0, 1}


def test_construction_errors():
    with pytest.raises(ConstructionError):
        ConstructionSpec("gallager_regular", 25, 3, 6)
    with pytest.raises(ValueError):
        ConstructionSpec("nonsense", 24)
    with pytest.raises(ConstructionError):
        construct(ConstructionSpec("random_column_weight", 10, 5, 6, m=3))


def test_construction_is_seeded():
    a = construct(ConstructionSpec("girth_peg", 48, seed=5))
    b = construct(ConstructionSpec("girth_peg", 48, seed=5))
    assert np.array_equal(a, b)


def test_expansion_examples():
    rep = check_expansion(np.ones((3, 3), dtype=int), 1, "1/3")
    assert rep.passed
    H = np.array([[1, 1, 0], [1, 1, 1], [0, 0, 1]])
    rep = check_expansion(H, 1, 1)
    assert not rep.passed
    assert len(rep.witness) == 2
    # re-evaluating the witness reproduces the failure
    assert neighbourhood_size(H, rep.witness) < 1 * 2 * len(rep.witness)


def test_expansion_brute_force_agreement():
    rng = np.random.default_rng(3)
    for _ in range(20):
        m, n = 6, 7
        H = np.zeros((m, n), dtype=int)
        for i in range(n):
            H[rng.choice(m, 2, replace=False), i] = 1
        for gamma, delta in [(0.3, 0.75), (0.5, 0.5), (0.5, 1)]:
            ok = True
            for size in range(1, int(math.floor(gamma * n)) + 1):
                for S in itertools.combinations(range(n), size):
                    if H[:, list(S)].any(axis=1).sum() < delta * 2 * size:
                        ok = False
            assert check_expansion(H, gamma, delta).passed == ok


def test_expansion_cap_and_irregular():
    with pytest.raises(CapExceeded):
        check_expansion(np.ones((3, 30), dtype=int), 1, 0.5, cap=100)
    with pytest.raises(ValueError):
        check_expansion(np.array([[1, 1], [0, 1]]), 1, 0.5)


def test_corollary1_bound():
    assert corollary1_k_bound(8, 0.5, 0.75, 202) == pytest.approx(0.5 * (0.5 * 202 - 1))
    assert corollary1_k_bound(4, 1, 1, 101) == pytest.approx(100)
    with pytest.raises(ExpansionTooWeak):
        corollary1_k_bound(3, 0.5, 0.7, 100)


def test_alist_roundtrip(tmp_path):
    p = tmp_path / "eye.alist"
    write_alist(p, np.eye(3, dtype=int))
    assert np.array_equal(read_alist(p), np.eye(3))
    rng = np.random.default_rng(0)
    for t in range(100):
        H = (rng.random((rng.integers(1, 8), rng.integers(1, 12))) < 0.4).astype(np.uint8)
        H[0, 0] = 1
        write_alist(p, H)
        assert np.array_equal(read_alist(p), H)


def test_alist_hamming_degrees(tmp_path):
    p = tmp_path / "h.alist"
    write_alist(p, hamming_matrix())
    lines = p.read_text().splitlines()
    assert lines[2].split() == ["1", "1", "2", "1", "2", "2", "3"]


@pytest.mark.parametrize("text", [
    "3 3\n1 1\n1 1 1\n1 1 1\n1\n2\n3 0\n1\n2\n3\n",       # extra entry
    "3 3\n1 1\n1 1 1\n1 1 1\n1\n2\n\n1\n2\n3\n",          # missing entry
    "2 1\n1 2\n1 1\n2\n1\n1\n1 1\n",                       # repeated index
    "x y\n",
])
def test_alist_malformed(tmp_path, text):
    p = tmp_path / "bad.alist"
    p.write_text(text)
    with pytest.raises(AlistParseError):
        read_alist(p)


def test_tanner_graph_degrees():
    g = TannerGraph(hamming_matrix())
    assert g.var_degrees().tolist() == [1, 1, 2, 1, 2, 2, 3]
    assert g.chk_degrees().tolist() == [4, 4, 4]
    assert np.array_equal(g.to_matrix(), hamming_matrix())
