"""
Numeric oracles for the stopping rule.

These evaluate the stopping-set integrals directly (truncated Poisson series
inside adaptive Gauss-Kronrod quadrature) so the closed forms in
closed_form.py can be checked against something that does not share their
algebra.
"""

import logging
import math
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import integrate, special

from .._stability_constants import (
    DECISION_TOLERANCE,
    EXP_TAIL_MASS,
    POISSON_TRUNCATION_MASS,
    QUADRATURE_ABS_TOLERANCE,
    QUADRATURE_FAILURE_TOLERANCE,
    QUADRATURE_REL_TOLERANCE,
    QUADRATURE_SUBDIVISION_LIMIT,
)
from ..errors import NumericFailureError, ParameterDomainError
from ..schema import PolicyParams
from .gain import GainFunction, StopRewardIndex, default_gain, stop_reward

logger = logging.getLogger(__name__)


def exponential_cutoff(rate: float) -> float:
    """Horizon beyond which an exponential(rate) tail holds less than EXP_TAIL_MASS"""
    return -math.log(EXP_TAIL_MASS) / rate


def integrate_adaptive(
    func: Callable[[float], float], upper: float, points: Optional[Sequence[float]] = None
) -> float:
    """
    Integrate func over [0, upper] with scipy's adaptive QUADPACK scheme.

    Raises:
        NumericFailureError: the reported error bound exceeds QUADRATURE_FAILURE_TOLERANCE
    """
    inner = [p for p in (points or ()) if 0.0 < p < upper]
    result = integrate.quad(
        func,
        0.0,
        upper,
        epsabs=QUADRATURE_ABS_TOLERANCE,
        epsrel=QUADRATURE_REL_TOLERANCE,
        limit=QUADRATURE_SUBDIVISION_LIMIT,
        points=inner or None,
        full_output=1,
    )
    value, abserr = result[0], result[1]
    if not math.isfinite(value) or abserr > QUADRATURE_FAILURE_TOLERANCE:
        raise NumericFailureError(
            f"Quadrature did not converge on [0, {upper:.6g}]: error bound {abserr:.3e}",
            achieved=abserr,
        )
    if len(result) > 3:
        logger.debug(f"quad reported '{result[3]}' with error bound {abserr:.3e}")
    return value


def _opportunity_density(params: PolicyParams) -> Callable[[float], float]:
    """Discounted opportunity density e^{-LδT}·λ_t·e^{-λ_t T}"""
    total = params.discount_rate + params.lambda_t
    lam = params.lambda_t
    return lambda t: lam * math.exp(-total * t)


def expected_discount_quadrature(params: PolicyParams) -> float:
    """Numeric E_T[e^{-LδT}]"""
    density = _opportunity_density(params)
    return integrate_adaptive(density, exponential_cutoff(params.discount_rate + params.lambda_t))


def expected_weighted_discount_quadrature(params: PolicyParams) -> float:
    """Numeric E_T[T·e^{-LδT}]"""
    density = _opportunity_density(params)
    total = params.discount_rate + params.lambda_t
    return integrate_adaptive(
        lambda t: t * density(t), exponential_cutoff(total), points=[1.0 / total]
    )


def poisson_pmf(k: Union[int, np.ndarray], mu: float) -> Union[float, np.ndarray]:
    """Poisson(k; mu) via log-space special functions"""
    k = np.asarray(k, dtype=float)
    if mu <= 0.0:
        return np.where(k == 0.0, 1.0, 0.0)
    return np.exp(special.xlogy(k, mu) - mu - special.gammaln(k + 1.0))


def truncated_poisson(mu: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    Support and pmf of Poisson(mu) cut once cumulative mass exceeds
    1 - POISSON_TRUNCATION_MASS.
    """
    if mu <= 0.0:
        return np.zeros(1, dtype=int), np.ones(1)
    k_hi = int(mu + 12.0 * math.sqrt(mu) + 40.0)
    ks = np.arange(k_hi + 1)
    pmf = poisson_pmf(ks, mu)
    cut = int(np.searchsorted(np.cumsum(pmf), 1.0 - POISSON_TRUNCATION_MASS))
    cut = min(cut, k_hi)
    return ks[: cut + 1], pmf[: cut + 1]


def transition_prob(i: int, j: int, t0: float, lambda_d: float) -> float:
    """
    Probability of moving from best degree i to j while waiting t0.

    Returns:
        0 for j < i, otherwise Poisson(j - i; λ_d·t0)
    """
    if i < 1 or j < 1:
        raise ParameterDomainError(f"states must be >= 1, got i={i}, j={j}")
    if t0 < 0.0 or lambda_d < 0.0:
        raise ParameterDomainError(f"t0 and lambda_d must be >= 0, got {t0}, {lambda_d}")
    if j < i:
        return 0.0
    return float(poisson_pmf(j - i, lambda_d * t0))


def lookahead_rhs(
    d: int,
    params: PolicyParams,
    gain: Optional[GainFunction] = None,
    index: StopRewardIndex = StopRewardIndex.DEGREE,
) -> float:
    """
    Expected discounted reward of waiting exactly one stage and then stopping,
    evaluated numerically.

    Args:
        d: Current best degree
        params: Policy parameters
        gain: Gain function (defaults to the linear gain of params)
        index: Stop-reward indexing

    Returns:
        ∫ Σ_{j>=d} Poisson(j-d; λ_d T)·R(j)·e^{-LδT}·λ_t e^{-λ_t T} dT
    """
    if d < 1:
        raise ParameterDomainError(f"coding degree must be >= 1, got {d}")
    gain = gain or default_gain(params)
    total = params.discount_rate + params.lambda_t
    upper = exponential_cutoff(total)
    lam_t, lam_d = params.lambda_t, params.lambda_d

    # Rewards for every offset the truncated series can reach on [0, upper].
    reach, _ = truncated_poisson(lam_d * upper)
    rewards = np.array([stop_reward(d + int(k), gain, index) for k in reach], dtype=float)

    def integrand(t: float) -> float:
        ks, pmf = truncated_poisson(lam_d * t)
        n = min(len(ks), len(rewards))
        expected = float(np.dot(pmf[:n], rewards[:n]))
        return expected * lam_t * math.exp(-total * t)

    return integrate_adaptive(integrand, upper)


def in_stopping_set(
    d: int,
    params: PolicyParams,
    gain: Optional[GainFunction] = None,
    index: StopRewardIndex = StopRewardIndex.DEGREE,
) -> bool:
    """One-stage look-ahead membership test: stopping now is at least as good"""
    gain = gain or default_gain(params)
    return stop_reward(d, gain, index) >= lookahead_rhs(d, params, gain, index) - DECISION_TOLERANCE


def smallest_stopping_state(
    params: PolicyParams,
    gain: Optional[GainFunction] = None,
    index: StopRewardIndex = StopRewardIndex.DEGREE,
    limit: int = 1 << 20,
) -> int:
    """
    Smallest d in the stopping set, found by doubling then bisection.

    Relies on the set being upward closed.
    """
    if in_stopping_set(1, params, gain, index):
        return 1
    lo, hi = 1, 2
    while not in_stopping_set(hi, params, gain, index):
        lo, hi = hi, hi * 2
        if hi > limit:
            raise NumericFailureError(f"No stopping state found below {limit}")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if in_stopping_set(mid, params, gain, index):
            hi = mid
        else:
            lo = mid
    return hi


def discounted_kernel(offset: int, params: PolicyParams) -> float:
    """
    E_T[p_{d,d+offset}(0, T)·e^{-LδT}]: discounted probability that the best
    degree grows by exactly `offset` before the next opportunity.
    """
    if offset < 0:
        return 0.0
    total = params.discount_rate + params.lambda_t
    lam_t, lam_d = params.lambda_t, params.lambda_d
    upper = exponential_cutoff(total)
    if lam_d == 0.0:
        return expected_discount_quadrature(params) if offset == 0 else 0.0

    def integrand(t: float) -> float:
        return float(poisson_pmf(offset, lam_d * t)) * lam_t * math.exp(-total * t)

    peak = offset / (lam_d + total)
    return integrate_adaptive(integrand, upper, points=[peak] if offset > 0 else None)
