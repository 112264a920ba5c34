import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from ldpc_sense.cclpd import ChannelModel, transmit
from ldpc_sense.estimators import LPDecoder, SparseRecovery
from ldpc_sense.gf2 import enumerate_codewords
from ldpc_sense.tanner import chain_matrix, hamming_matrix


def test_sparse_recovery_api():
    H = chain_matrix().astype(float)
    est = SparseRecovery(H=H)
    assert clone(est).get_params()["mode"] == "float"
    with pytest.raises(NotFittedError):
        est.predict(np.zeros((1, 3)))
    est.fit()
    assert est.n_features_in_ == 3
    E = np.array([[0, 2.0, 0, 0], [0, 0, 0, -1.5], [0, 0, 0, 0]])
    S = E @ H.T
    assert np.allclose(est.predict(S), E, atol=1e-6)
    assert est.score(S, E) == 1.0
    with pytest.raises(ValueError):
        est.predict(np.zeros((1, 4)))
    with pytest.raises(ValueError):
        SparseRecovery().fit()


def test_sparse_recovery_reports_failures():
    est = SparseRecovery(H=np.array([[1.0, 1.0]])).fit()
    E = np.array([[1.0, 0], [0, 1.0]])
    assert est.score(E @ est.H_.T, E) < 1


def test_lp_decoder_api():
    H = hamming_matrix()
    dec = LPDecoder(H=H, channel="bsc", param=0.1).fit()
    words = enumerate_codewords(H).astype(float)
    rng = np.random.default_rng(0)
    X = words[:4]
    Y = np.array([transmit(dec.channel_, x.astype(int), rng) for x in X])
    assert dec.decision_function(Y).shape == (4, 7)
    # received words that are codewords decode to themselves
    assert dec.score(X, X) == 1.0
    assert dec.predict(X).shape == (4, 7)
    with pytest.raises(NotFittedError):
        LPDecoder(H=H).predict(X)
    with pytest.raises(ValueError):
        LPDecoder(H=H, channel="bsc", param=0.7).fit()
    assert isinstance(ChannelModel("awgn", 1.0), ChannelModel)
    awgn = LPDecoder(H=H, channel="awgn", param=2.0).fit()
    assert awgn.score(1 - 2 * X, X) == 1.0
