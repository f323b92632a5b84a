"""
LMS predictor for the best-degree growth rate λ_d.

U_p[n+1] = Σ_k h_n[k]·U[n-k]
h_{n+1}[k] = h_n[k] + μ·U_e[n]·U[n-k],  U_e[n] = U[n] - U_p[n]

Observations are normalized by the running maximum of their magnitude, so μ
acts on inputs in [0, 1] whatever the scale of λ_d. The history keeps raw
observations; normalization is applied when the weights are adapted.
"""

import logging
from typing import Optional, Sequence

import numpy as np

from .._stability_constants import LMS_DEFAULT_STEP, LMS_DEFAULT_TAPS
from ..errors import ParameterDomainError

logger = logging.getLogger(__name__)


class LmsFilter:
    """
    Z-tap LMS filter with a running-mean cold start.

    history[0] is the most recent observation U[n].
    """

    def __init__(
        self,
        taps: int = LMS_DEFAULT_TAPS,
        step: float = LMS_DEFAULT_STEP,
        normalize: bool = True,
        weights: Optional[Sequence[float]] = None,
        history: Optional[Sequence[float]] = None,
    ):
        if taps < 1:
            raise ParameterDomainError(f"tap count must be >= 1, got {taps}")
        if step <= 0.0:
            raise ParameterDomainError(f"step size must be > 0, got {step}")
        self.taps = taps
        self.step = step
        self.normalize = normalize

        self.weights = np.zeros(taps) if weights is None else np.array(weights, dtype=float)
        self.history = np.zeros(taps) if history is None else np.array(history, dtype=float)
        if self.weights.shape != (taps,) or self.history.shape != (taps,):
            raise ParameterDomainError(f"weights and history must both hold {taps} values")

        # A supplied history counts as fully primed.
        self.observations = taps if history is not None else 0
        self._total = float(self.history.sum()) if history is not None else 0.0
        self._scale = float(np.max(np.abs(self.history))) if history is not None else 0.0

    @property
    def primed(self) -> bool:
        return self.observations >= self.taps

    @property
    def running_mean(self) -> float:
        if self.observations == 0:
            return 0.0
        return self._total / self.observations

    def _norm(self) -> float:
        if not self.normalize:
            return 1.0
        return self._scale

    def predict(self) -> float:
        """Next-period prediction; the running mean until Z observations exist"""
        if not self.primed:
            return self.running_mean
        return float(np.dot(self.weights, self.history))

    def update(self, observed: float) -> "LmsFilter":
        """Adapt the weights against the current prediction, then shift observed in"""
        if self.normalize:
            self._scale = max(self._scale, abs(observed))

        if self.primed:
            norm = self._norm()
            if norm > 0.0:
                error = (observed - float(np.dot(self.weights, self.history))) / norm
                if error != 0.0:
                    self.weights = self.weights + self.step * error * (self.history / norm)

        self.history = np.roll(self.history, 1)
        self.history[0] = observed
        self.observations += 1
        self._total += observed
        return self

    def __repr__(self) -> str:
        return (
            f"LmsFilter(taps={self.taps}, step={self.step}, "
            f"weights={self.weights.tolist()}, primed={self.primed})"
        )


def lms_predict(lms: LmsFilter) -> float:
    """Convenience wrapper around LmsFilter.predict"""
    return lms.predict()


def lms_update(lms: LmsFilter, observed: float) -> LmsFilter:
    """Convenience wrapper around LmsFilter.update"""
    return lms.update(observed)
