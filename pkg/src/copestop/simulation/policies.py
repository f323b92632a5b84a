"""
Transmission schemes consulted at every transmission opportunity.

Each scheme looks at a node's cached best coding option and returns the
option to broadcast now, or None to let the opportunity pass.
"""

import logging
from abc import ABC, abstractmethod
from typing import Optional

from ..coding import CodingOption
from ..policy import decide
from ..schema import Decision, PolicyName
from .node import NodeState

logger = logging.getLogger(__name__)


class TransmissionPolicy(ABC):
    """Abstract base class for transmission schemes"""

    name: PolicyName

    @abstractmethod
    def select(self, node: NodeState) -> Optional[CodingOption]:
        """
        Choose what to send at this opportunity.

        Args:
            node: Node holding the opportunity; its queue is nonempty

        Returns:
            Option to encode and broadcast, or None to wait
        """
        pass


class OptimalStoppingPolicy(TransmissionPolicy):
    """Send the best option once its degree reaches the threshold d*"""

    name = PolicyName.OPTIMAL_STOPPING

    def select(self, node: NodeState) -> Optional[CodingOption]:
        option = node.best_option_cache
        if decide(option.degree, node.policy_params) is Decision.SEND:
            return option
        return None


class ImmediateSendPolicy(TransmissionPolicy):
    """COPE: send the best option available, whatever its degree"""

    name = PolicyName.IMMEDIATE_SEND

    def select(self, node: NodeState) -> Optional[CodingOption]:
        return node.best_option_cache


class NoCodingPolicy(TransmissionPolicy):
    """Forward the head-of-line native at every opportunity"""

    name = PolicyName.NO_CODING

    def select(self, node: NodeState) -> Optional[CodingOption]:
        return CodingOption((node.output_queue[0].packet_id,))


_POLICIES = {
    PolicyName.OPTIMAL_STOPPING: OptimalStoppingPolicy,
    PolicyName.IMMEDIATE_SEND: ImmediateSendPolicy,
    PolicyName.NO_CODING: NoCodingPolicy,
}


def make_policy(name: PolicyName) -> TransmissionPolicy:
    return _POLICIES[PolicyName(name)]()
