"""scikit-learn style wrappers around basis pursuit and LP decoding."""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .cclpd import ChannelModel, cclpd_decode, llr
from .cslpd import EXACT_TOL, MeasurementInstance, cs_lpd
from .gf2 import as_binary_matrix

__all__ = ["SparseRecovery", "LPDecoder"]


class SparseRecovery(BaseEstimator):
    """Recover sparse signals from real measurements ``s = H e``.

    ``fit`` validates the measurement matrix; ``predict`` maps a batch of
    measurement vectors (one per row) to basis-pursuit estimates.
    """

    def __init__(self, H=None, mode="float", rule="auto"):
        self.H = H
        self.mode = mode
        self.rule = rule

    def fit(self, X=None, y=None):
        if self.H is None:
            raise ValueError("SparseRecovery needs a measurement matrix H")
        self.H_ = check_array(self.H, dtype=np.float64)
        self.n_features_in_ = self.H_.shape[0]
        return self

    def predict(self, X):
        check_is_fitted(self, "H_")
        S = check_array(X, dtype=np.float64)
        if S.shape[1] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} measurements per row, got {S.shape[1]}")
        out = np.empty((S.shape[0], self.H_.shape[1]))
        for t, s in enumerate(S):
            res = cs_lpd(MeasurementInstance(self.H_, None, s), mode=self.mode, rule=self.rule)
            out[t] = np.asarray(res.e_hat, dtype=np.float64)
        return out

    def score(self, X, y):
        """Fraction of rows recovered exactly (infinity-norm error <= 1e-6)."""
        E = check_array(y, dtype=np.float64)
        err = np.abs(self.predict(X) - E).max(axis=1)
        return float(np.mean(err <= EXACT_TOL))


class LPDecoder(BaseEstimator):
    """LP decoding over the fundamental polytope of a binary code.

    ``predict`` takes received channel outputs (one word per row) and returns
    the LP optimum, which is a codeword whenever it is integral.
    """

    def __init__(self, H=None, channel="bsc", param=0.05, mode="float"):
        self.H = H
        self.channel = channel
        self.param = param
        self.mode = mode

    def fit(self, X=None, y=None):
        if self.H is None:
            raise ValueError("LPDecoder needs a parity-check matrix H")
        self.H_ = as_binary_matrix(check_array(self.H))
        self.channel_ = ChannelModel(self.channel, self.param)
        self.n_features_in_ = self.H_.shape[1]
        return self

    def decision_function(self, X):
        """Log-likelihood ratios of the received words."""
        check_is_fitted(self, "H_")
        Y = check_array(X, dtype=np.float64)
        if Y.shape[1] != self.n_features_in_:
            raise ValueError(f"expected words of length {self.n_features_in_}")
        return np.vstack([llr(self.channel_, y if self.channel == "awgn" else y.astype(np.int64))
                          for y in Y])

    def predict(self, X):
        lam = self.decision_function(X)
        return np.vstack([np.asarray(cclpd_decode(self.H_, l, mode=self.mode).point, dtype=np.float64)
                          for l in lam])

    def score(self, X, y):
        """Fraction of words decoded to exactly the transmitted codeword."""
        truth = check_array(y, dtype=np.float64)
        return float(np.mean(np.all(np.abs(self.predict(X) - truth) <= 1e-6, axis=1)))
