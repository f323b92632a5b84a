"""Discrete-event simulation of coded multi-hop forwarding"""

from .topology import Flow, Topology, build_topology, route_next_hop, select_flows
from .events import Event, EventKind, EventQueue
from .streams import StreamBank, exponential_from_uniform, make_generator, sample_interval
from .energy import EnergyBreakdown, PowerModel, RadioActivity, account_energy
from .node import NodeState
from .policies import (
    ImmediateSendPolicy,
    NoCodingPolicy,
    OptimalStoppingPolicy,
    TransmissionPolicy,
    make_policy,
)
from .metrics import RunTally, TxRecord, collect_metrics
from .engine import Simulator, run

__all__ = [
    "Flow",
    "Topology",
    "build_topology",
    "route_next_hop",
    "select_flows",
    "Event",
    "EventKind",
    "EventQueue",
    "StreamBank",
    "exponential_from_uniform",
    "make_generator",
    "sample_interval",
    "EnergyBreakdown",
    "PowerModel",
    "RadioActivity",
    "account_energy",
    "NodeState",
    "ImmediateSendPolicy",
    "NoCodingPolicy",
    "OptimalStoppingPolicy",
    "TransmissionPolicy",
    "make_policy",
    "RunTally",
    "TxRecord",
    "collect_metrics",
    "Simulator",
    "run",
]
