"""
Value-iteration oracle for the optimality equation.

v(d) = max{ Σ_{j>=d} E_T[p_dj(0,T)·e^{-LδT}]·v(j),  R(d) }

State 1 is also the absorbing post-transmission state, so its value is
pinned to 0 and its stop reward is 0. States above d_max are Send states
valued at their own stop reward.
"""

import logging
import math
from typing import List, Optional

import numpy as np

from .._stability_constants import (
    DECISION_TOLERANCE,
    KERNEL_EXTENSION_FACTOR,
    KERNEL_RESIDUAL_MASS,
    VALUE_ITERATION_MAX_ITERATIONS,
    VALUE_ITERATION_MIN_HEADROOM,
)
from ..errors import NumericFailureError, ParameterDomainError
from ..schema import Decision, PolicyParams, ValueSolution
from .closed_form import threshold
from .gain import GainFunction, LinearGain, StopRewardIndex, default_gain, stop_reward
from .numeric import discounted_kernel, expected_discount_quadrature

logger = logging.getLogger(__name__)


def build_discounted_kernel(params: PolicyParams, d_max: int) -> np.ndarray:
    """
    Discounted kernel K[k] for offsets 0..d_max-1, extended until a term falls
    below KERNEL_RESIDUAL_MASS. The last entry carries whatever mass the
    extension left unaccounted for.
    """
    kernel: List[float] = []
    cap = KERNEL_EXTENSION_FACTOR * d_max
    for offset in range(cap):
        term = discounted_kernel(offset, params)
        kernel.append(term)
        if offset >= d_max - 1 and term < KERNEL_RESIDUAL_MASS:
            break

    residual = expected_discount_quadrature(params) - math.fsum(kernel)
    if residual > 0.0:
        kernel[-1] += residual
    logger.debug(f"Discounted kernel: {len(kernel)} offsets, residual mass {residual:.3e}")
    return np.asarray(kernel, dtype=float)


def value_iteration(
    params: PolicyParams,
    d_max: int,
    tol: float,
    gain: Optional[GainFunction] = None,
    index: StopRewardIndex = StopRewardIndex.DEGREE,
    max_iterations: int = VALUE_ITERATION_MAX_ITERATIONS,
    sweep: str = "gauss-seidel",
) -> ValueSolution:
    """
    Solve the optimality equation on states 1..d_max by value iteration.

    Args:
        params: Policy parameters
        d_max: Largest explicitly iterated state
        tol: Sup-norm change that ends the iteration
        gain: Gain function (defaults to the linear gain of params)
        index: Stop-reward indexing
        max_iterations: Iteration cap
        sweep: "gauss-seidel" updates states in place from d_max down to 2 and
            solves the self-loop exactly, which settles an upward-only chain
            in one pass; "jacobi" applies the full Bellman operator per sweep

    Returns:
        ValueSolution with values, greedy policy and the smallest Send state

    Raises:
        ParameterDomainError: tol <= 0, unknown sweep or d_max below ceil(d*) + headroom
        NumericFailureError: no convergence within max_iterations
    """
    if tol <= 0.0:
        raise ParameterDomainError(f"tol must be > 0, got {tol}")
    if sweep not in ("gauss-seidel", "jacobi"):
        raise ParameterDomainError(f"unknown sweep '{sweep}'")
    gain = gain or default_gain(params)
    if isinstance(gain, LinearGain):
        required = math.ceil(threshold(params, gain)) + VALUE_ITERATION_MIN_HEADROOM
        if d_max < required:
            raise ParameterDomainError(f"d_max must be >= {required}, got {d_max}")
    elif d_max < 2:
        raise ParameterDomainError(f"d_max must be >= 2, got {d_max}")

    kernel = build_discounted_kernel(params, d_max)
    width = len(kernel)

    # Stop rewards for every state reachable from 1..d_max in one stage.
    reach = d_max + width
    stop_all = np.array([stop_reward(d, gain, index) for d in range(1, reach + 1)], dtype=float)
    stop_all[0] = 0.0
    stop = stop_all[:d_max]

    rows = np.arange(d_max)[:, None]
    cols = np.arange(d_max)[None, :]
    offsets = cols - rows
    inside = (offsets >= 0) & (offsets < width)
    transition = np.where(inside, kernel[np.clip(offsets, 0, width - 1)], 0.0)

    # Mass that leaves the iterated block lands on Send states above d_max.
    tail = np.zeros(d_max)
    for state in range(d_max):
        first = d_max - state
        if first < width:
            tail[state] = float(np.dot(kernel[first:], stop_all[d_max : state + width]))

    stay = float(kernel[0])
    values = stop.copy()
    residual = math.inf
    iterations = 0
    while residual >= tol:
        if iterations >= max_iterations:
            raise NumericFailureError(
                f"Value iteration did not converge in {max_iterations} iterations "
                f"(last change {residual:.3e})",
                achieved=residual,
                iterations=iterations,
            )
        if sweep == "jacobi":
            updated = np.maximum(stop, transition @ values + tail)
        else:
            updated = _gauss_seidel_sweep(values, stop, transition, tail, stay)
        updated[0] = 0.0
        residual = float(np.max(np.abs(updated - values)))
        values = updated
        iterations += 1

    continuation = transition @ values + tail
    policy = [
        Decision.SEND if stop[i] >= continuation[i] - DECISION_TOLERANCE else Decision.WAIT
        for i in range(d_max)
    ]
    send_states = [d for d, dec in enumerate(policy, start=1) if dec is Decision.SEND]
    threshold_state = send_states[0] if send_states else d_max + 1

    logger.info(
        f"Value iteration converged in {iterations} iterations; threshold state {threshold_state}"
    )
    return ValueSolution(
        values=values.tolist(),
        policy=policy,
        threshold_state=threshold_state,
        iterations=iterations,
        residual=residual,
    )


def _gauss_seidel_sweep(
    values: np.ndarray, stop: np.ndarray, transition: np.ndarray, tail: np.ndarray, stay: float
) -> np.ndarray:
    """One in-place backward sweep; the kernel only moves upward, so each row sees final values."""
    updated = values.copy()
    for i in range(len(updated) - 1, 0, -1):
        rest = float(transition[i, i + 1 :] @ updated[i + 1 :]) + tail[i]
        updated[i] = max(stop[i], rest / (1.0 - stay))
    return updated
