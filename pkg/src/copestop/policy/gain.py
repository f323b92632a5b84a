"""
Gain functions and the indexing of the stop reward.

The stopping problem rewards a transmission at state d with the gain g of the
transmissions it saves. The look-ahead can charge that reward as g(d - 1); the
closed form for the linear family uses c·d + b. StopRewardIndex picks
between the two; the closed-form threshold is exact only under DEGREE.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Union

GainFunction = Callable[[float], float]


@dataclass(frozen=True)
class LinearGain:
    """g(x) = c·x + b"""

    slope: float = 1.0
    intercept: float = 0.0

    def __call__(self, x: float) -> float:
        return self.slope * x + self.intercept


class StopRewardIndex(str, Enum):
    """Argument at which g is evaluated when stopping at state d"""

    DEGREE = "degree"
    DEGREE_MINUS_ONE = "degree-minus-one"


def stop_reward(d: int, gain: GainFunction, index: Union[StopRewardIndex, str]) -> float:
    """Reward for transmitting at state d under the chosen indexing"""
    index = StopRewardIndex(index)
    if index is StopRewardIndex.DEGREE:
        return gain(d)
    return gain(d - 1)


def default_gain(params) -> LinearGain:
    """Linear gain built from PolicyParams' b and c"""
    return LinearGain(slope=params.gain_slope_c, intercept=params.gain_intercept_b)
