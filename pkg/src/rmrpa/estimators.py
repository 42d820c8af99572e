"""scikit-learn style wrappers.

Rows of ``X`` are received LLR vectors of length ``2**m``; ``predict`` returns
one decoded codeword per row.  ``fit`` only builds the code, so the
estimators can be used as the final step of a pipeline that maps raw channel
outputs to LLRs.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .budget import BudgetReport
from .crc3 import CRC3_GSM
from .rmcode import build_code, encode, recover_message
from .rpa import RpaConfig, rpa_decode_soft
from .srpa import SrpaConfig, sample_plan, srpa_multi_decode


class _DecoderBase(BaseEstimator):
    def _check_llrs(self, X) -> np.ndarray:
        check_is_fitted(self, "code_")
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != self.code_.n:
            raise ValueError(f"X has {X.shape[1]} columns, expected n={self.code_.n}")
        return X

    def score(self, X, y) -> float:
        """Fraction of rows decoded to exactly the codeword in ``y``."""
        y = check_array(y, dtype=np.uint8)
        return float(np.mean(np.all(self.predict(X) == y, axis=1)))


class RMEncoder(TransformerMixin, BaseEstimator):
    """Messages to RM(m, r) codewords; ``crc=True`` appends CRC-3 first."""

    def __init__(self, m=7, r=2, crc=False):
        self.m = m
        self.r = r
        self.crc = crc

    def fit(self, X=None, y=None):
        self.code_ = build_code(self.m, self.r)
        self.n_message_bits_ = self.code_.k - (CRC3_GSM.width if self.crc else 0)
        return self

    def transform(self, X):
        check_is_fitted(self, "code_")
        X = check_array(X, dtype=np.uint8)
        if X.shape[1] != self.n_message_bits_:
            raise ValueError(f"expected {self.n_message_bits_} message bits, got {X.shape[1]}")
        if self.crc:
            X = np.stack([CRC3_GSM.append(row) for row in X])
        return encode(self.code_, X)

    def inverse_transform(self, X):
        check_is_fitted(self, "code_")
        msgs = recover_message(self.code_, check_array(X, dtype=np.uint8))
        return msgs[:, : self.n_message_bits_]


class RPADecoder(_DecoderBase):
    """Full recursive projection-aggregation decoder.

    Parameters
    ----------
    m, r : int
        Code parameters of RM(m, r).
    epsilon : float
        Fixed-point tolerance on the per-entry LLR change.
    early_stopping : bool
        Stop iterating once the tolerance is met; ``False`` always runs the
        full ``floor(m/2)`` iterations per level.
    normalization : {"n", "votes"}
        Divide vote sums by the block length or by the number of votes.
    """

    def __init__(self, m=7, r=2, epsilon=0.05, early_stopping=True, normalization="n"):
        self.m = m
        self.r = r
        self.epsilon = epsilon
        self.early_stopping = early_stopping
        self.normalization = normalization

    def fit(self, X=None, y=None):
        self.code_ = build_code(self.m, self.r)
        self.config_ = RpaConfig(self.epsilon, self.early_stopping, self.normalization)
        self.budget_ = BudgetReport()
        return self

    def decision_function(self, X):
        """Final aggregated LLRs (the hard output is their sign)."""
        X = self._check_llrs(X)
        return rpa_decode_soft(self.code_, X, self.config_, self.budget_)[1]

    def predict(self, X):
        X = self._check_llrs(X)
        return rpa_decode_soft(self.code_, X, self.config_, self.budget_)[0]


class SRPADecoder(_DecoderBase):
    """k sparse RPA decoders with correlation or CRC-aided selection.

    ``budget_`` accumulates operation counts over every ``predict`` call.
    Plans are redrawn on each decode from a generator seeded by
    ``random_state`` at fit time, unless ``freeze_plans`` is set.
    """

    def __init__(
        self,
        m=7,
        r=2,
        n_decoders=2,
        inner_decoders=4,
        ratio=1 / 8,
        selection="crc",
        soft_selection=False,
        freeze_plans=False,
        random_state=None,
    ):
        self.m = m
        self.r = r
        self.n_decoders = n_decoders
        self.inner_decoders = inner_decoders
        self.ratio = ratio
        self.selection = selection
        self.soft_selection = soft_selection
        self.freeze_plans = freeze_plans
        self.random_state = random_state

    def fit(self, X=None, y=None):
        self.code_ = build_code(self.m, self.r)
        seed = 0 if self.random_state is None else self.random_state
        self.config_ = SrpaConfig.default(
            self.m, self.r, k=self.n_decoders, inner_decoders=self.inner_decoders,
            ratio=self.ratio, selection=self.selection, soft_selection=self.soft_selection,
            freeze_plans=self.freeze_plans, master_seed=seed,
        )
        self.config_.validate(self.code_)
        self.rng_ = np.random.default_rng(self.random_state)
        self.plans_ = None
        if self.freeze_plans:
            lv = self.config_.levels[0]
            self.plans_ = [sample_plan(self.m, lv.q, lv.t, self.rng_) for _ in range(lv.d)]
        self.budget_ = BudgetReport()
        return self

    def predict(self, X):
        X = self._check_llrs(X)
        out = np.empty(X.shape, dtype=np.uint8)
        chosen = np.empty(X.shape[0], dtype=np.intp)
        for i, row in enumerate(X):
            out[i], chosen[i] = srpa_multi_decode(self.code_, row, self.config_, self.budget_, self.rng_, self.plans_)
        self.chosen_ = chosen
        return out
