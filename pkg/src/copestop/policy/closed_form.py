"""
Closed-form kernel of the to-send-or-not-to-send rule.

All functions are pure; PolicyParams is frozen, so results depend on their
arguments only.
"""

from typing import Optional

from .._stability_constants import DECISION_TOLERANCE
from ..errors import ParameterDomainError, UnsupportedGainError
from ..schema import Decision, PolicyParams
from .gain import GainFunction, LinearGain


def _check_rate(name: str, value: float) -> None:
    if value < 0.0:
        raise ParameterDomainError(f"{name} must be >= 0, got {value}")


def _check_probability(name: str, value: float) -> None:
    if not 0.0 <= value <= 1.0:
        raise ParameterDomainError(f"{name} must lie in [0, 1], got {value}")


def compose_degree_growth_rate(lambda_r: float, p_r: float, lambda_p: float, p_p: float) -> float:
    """
    Overall rate at which the best coding degree grows.

    Args:
        lambda_r: Reception-report arrival rate
        p_r: Probability a report raises the best degree
        lambda_p: Data-packet arrival rate
        p_p: Probability a data packet raises the best degree

    Returns:
        λ_r·p_r + λ_p·p_p
    """
    _check_rate("lambda_r", lambda_r)
    _check_rate("lambda_p", lambda_p)
    _check_probability("p_r", p_r)
    _check_probability("p_p", p_p)
    return lambda_r * p_r + lambda_p * p_p


def expected_discount(params: PolicyParams) -> float:
    """E_T[e^{-LδT}] = λ_t / (δL + λ_t) for exponential opportunity gaps"""
    return params.lambda_t / (params.discount_rate + params.lambda_t)


def expected_weighted_discount(params: PolicyParams) -> float:
    """E_T[T·e^{-LδT}] = λ_t / (δL + λ_t)^2"""
    total = params.discount_rate + params.lambda_t
    return params.lambda_t / (total * total)


def threshold(params: PolicyParams, gain: Optional[GainFunction] = None) -> float:
    """
    Real-valued stopping threshold d*.

    d* = λ_d·λ_t / (δL·(δL + λ_t)) - b/c

    Args:
        params: Policy parameters (b and c are used unless gain is given)
        gain: Optional LinearGain overriding params' b and c

    Returns:
        d*; values <= 1 make every state a Send state

    Raises:
        UnsupportedGainError: gain is not linear
    """
    if gain is None:
        slope, intercept = params.gain_slope_c, params.gain_intercept_b
    elif isinstance(gain, LinearGain):
        slope, intercept = gain.slope, gain.intercept
    else:
        raise UnsupportedGainError(
            f"Closed-form threshold requires a linear gain, got {type(gain).__name__}"
        )
    if slope <= 0.0:
        raise ParameterDomainError(f"gain slope must be > 0, got {slope}")

    dl = params.discount_rate
    return params.lambda_d * params.lambda_t / (dl * (dl + params.lambda_t)) - intercept / slope


def decide(d: int, params: PolicyParams) -> Decision:
    """Send iff d >= d*, ties within DECISION_TOLERANCE resolve to Send"""
    if d < 1:
        raise ParameterDomainError(f"coding degree must be >= 1, got {d}")
    if d >= threshold(params) - DECISION_TOLERANCE:
        return Decision.SEND
    return Decision.WAIT


def first_send_state(params: PolicyParams) -> int:
    """Smallest integer degree at which decide() returns Send"""
    d_star = threshold(params)
    d = max(1, int(d_star) - 1)
    while decide(d, params) is Decision.WAIT:
        d += 1
    return d
