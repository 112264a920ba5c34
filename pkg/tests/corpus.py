"""Fixed corpus of small matrices shared by the tests."""

import numpy as np

from ldpc_sense.tanner import ConstructionSpec, chain_matrix, construct, hamming_matrix


def cycle_matrix(L):
    """Vertex-edge incidence matrix of the cycle graph on L vertices."""
    H = np.zeros((L, L), dtype=np.int64)
    for i in range(L):
        H[i, i] = H[(i + 1) % L, i] = 1
    return H


def small_corpus():
    """Named zero-one matrices with n <= 12."""
    return {
        "chain": chain_matrix().astype(np.int64),
        "pair": np.array([[1, 1]]),
        "spc3": np.array([[1, 1, 1]]),
        "hamming": hamming_matrix().astype(np.int64),
        "cycle6": cycle_matrix(6),
        "gallager24_n8": construct(ConstructionSpec("gallager_regular", 8, 2, 4, seed=0)).astype(np.int64),
        "colweight2_n10": construct(ConstructionSpec("random_column_weight", 10, 2, 4, seed=0, m=5)).astype(np.int64),
        "peg36_n12": construct(ConstructionSpec("girth_peg", 12, 3, 6, seed=0)).astype(np.int64),
    }


def random_binary(rng, m, n, p=0.4):
    H = (rng.random((m, n)) < p).astype(np.int64)
    return H


# complex worked examples: a unit-magnitude matrix and one with integer magnitudes
_R2 = np.sqrt(2.0)
UNIT_H = np.array([[1, 0, (1 + 1j) / _R2], [-1, 1j, 1]])
UNIT_NU = np.array([(1 + 1j) / _R2, 1 / _R2 - 1j * (1 + 1 / _R2), -1])
INT_H = np.array([[1, 0, _R2 * (1 + 1j)], [-2, 1j, 3]])
INT_NU = np.array([_R2 * (1 + 1j), 2 * _R2 - 1j * (3 + 2 * _R2), -1])
_U = (1 + 1j) / _R2
INT_COVER = np.array([
    [0, 1, 0, 0, 0, 0, _U, _U, 0],
    [1, 0, 0, 0, 0, 0, _U, 0, _U],
    [0, 0, 1, 0, 0, 0, 0, _U, _U],
    [0, -1, -1, 1j, 0, 0, 1, 1, 1],
    [-1, -1, 0, 0, 1j, 0, 1, 1, 1],
    [-1, 0, -1, 0, 0, 1j, 1, 1, 1],
])
