"""Optimal stopping rule for coded transmission"""

from .gain import GainFunction, LinearGain, StopRewardIndex, default_gain, stop_reward
from .closed_form import (
    compose_degree_growth_rate,
    decide,
    expected_discount,
    expected_weighted_discount,
    first_send_state,
    threshold,
)
from .numeric import (
    in_stopping_set,
    lookahead_rhs,
    smallest_stopping_state,
    transition_prob,
)
from .value_iteration import value_iteration

__all__ = [
    "GainFunction",
    "LinearGain",
    "StopRewardIndex",
    "default_gain",
    "stop_reward",
    "compose_degree_growth_rate",
    "decide",
    "expected_discount",
    "expected_weighted_discount",
    "first_send_state",
    "threshold",
    "in_stopping_set",
    "lookahead_rhs",
    "smallest_stopping_state",
    "transition_prob",
    "value_iteration",
]
