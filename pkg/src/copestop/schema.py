"""
Validated records shared across the stopping policy, simulator and experiments.

Hot-path simulation objects (packets, events) live next to the code that
moves them as slotted dataclasses; everything that crosses a module or file
boundary is a pydantic model defined here.

Schema Version: 1.1.0
"""

from __future__ import annotations

from enum import Enum
from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ._stability_constants import (
    LMS_DEFAULT_STEP,
    LMS_DEFAULT_TAPS,
    RNG_ALGORITHM,
    SCHEMA_VERSION,
)


class Decision(str, Enum):
    """Outcome of the stopping rule at a transmission opportunity"""

    WAIT = "wait"
    SEND = "send"


class PolicyName(str, Enum):
    """Transmission schemes compared by the experiments"""

    OPTIMAL_STOPPING = "optimal-stopping"
    IMMEDIATE_SEND = "immediate-send"
    NO_CODING = "no-coding"


class PolicyParams(BaseModel):
    """Parameters of the to-send-or-not-to-send rule"""

    model_config = ConfigDict(frozen=True)

    lambda_d: float = Field(..., ge=0.0, description="Best-degree growth rate")
    lambda_t: float = Field(..., gt=0.0, description="Transmission-opportunity rate")
    delta: float = Field(..., gt=0.0, description="Delay discount per buffer slot and time unit")
    buffer_size_L: int = Field(..., ge=1, description="Node buffer size in packets")
    gain_slope_c: float = Field(1.0, gt=0.0, description="Reward per saved transmission")
    gain_intercept_b: float = Field(0.0, description="Reward offset")

    @property
    def discount_rate(self) -> float:
        """Exponent rate L·δ of the per-interval discount e^{-LδT}"""
        return self.delta * self.buffer_size_L


class ValueSolution(BaseModel):
    """Fixed point of the optimality equation on states 1..d_max"""

    model_config = ConfigDict(frozen=True)

    values: List[float] = Field(..., description="v(d) for d = 1..d_max (index 0 is d = 1)")
    policy: List[Decision] = Field(..., description="Greedy decision for d = 1..d_max")
    threshold_state: int = Field(..., description="Smallest d whose decision is Send")
    iterations: int = Field(..., ge=0)
    residual: float = Field(..., ge=0.0, description="Final sup-norm change")

    @model_validator(mode="after")
    def _check_lengths(self) -> "ValueSolution":
        if len(self.values) != len(self.policy):
            raise ValueError("values and policy must cover the same states")
        return self

    @property
    def d_max(self) -> int:
        return len(self.values)

    def value(self, d: int) -> float:
        return self.values[d - 1]

    def decision(self, d: int) -> Decision:
        return self.policy[d - 1]

    def is_threshold_type(self) -> bool:
        """Wait below threshold_state, Send from it upward (state 1 may differ only by waiting)"""
        return all(
            (dec == Decision.SEND) == (d >= self.threshold_state)
            for d, dec in enumerate(self.policy, start=1)
        )


class ScenarioConfig(BaseModel):
    """One simulated scenario; parsed from the flat key = value format"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    # Topology
    node_count: int = Field(..., ge=2)
    field_width: float = Field(600.0, gt=0.0, description="Metres")
    field_height: float = Field(600.0, gt=0.0, description="Metres")
    rho: float = Field(200.0, gt=0.0, description="Radio range in metres")
    seed: int = Field(1, ge=0)
    max_topology_retries: int = Field(100, ge=1)

    # Traffic
    flow_count: int = Field(8, ge=0)
    packet_rate: float = Field(0.5, gt=0.0, description="Per-flow Poisson intensity")
    min_flow_hops: int = Field(2, ge=1)
    max_flow_attempts: int = Field(1000, ge=1)

    # Event processes
    opportunity_rate: float = Field(5.0, gt=0.0, description="Per-node λ_t")
    report_rate: float = Field(2.0, gt=0.0, description="Per-node λ_r")

    # Policy
    policy: PolicyName = PolicyName.OPTIMAL_STOPPING
    delta: float = Field(0.05, gt=0.0)
    buffer_size: int = Field(40, ge=1)
    gain_slope: float = Field(1.0, gt=0.0)
    gain_intercept: float = 0.0

    # Estimators
    lms_taps: int = Field(LMS_DEFAULT_TAPS, ge=1)
    lms_step: float = Field(LMS_DEFAULT_STEP, gt=0.0)
    measurement_tick: float = Field(1.0, gt=0.0)

    # Link and radio
    loss_probability: float = Field(0.0, ge=0.0, lt=1.0)
    horizon: float = Field(3000.0, gt=0.0)
    bitrate: float = Field(1_000_000.0, gt=0.0, description="Bits per second")
    packet_size_bytes: int = Field(1000, gt=0)
    ack_timeout_factor: float = Field(5.0, gt=0.0, description="Multiples of 1/λ_t")

    # Output
    record_trace: bool = False

    def policy_params(self, lambda_d: float = 0.0, lambda_t: Optional[float] = None) -> PolicyParams:
        return PolicyParams(
            lambda_d=lambda_d,
            lambda_t=self.opportunity_rate if lambda_t is None else lambda_t,
            delta=self.delta,
            buffer_size_L=self.buffer_size,
            gain_slope_c=self.gain_slope,
            gain_intercept_b=self.gain_intercept,
        )

    @property
    def ack_timeout(self) -> float:
        return self.ack_timeout_factor / self.opportunity_rate


class FinalEstimates(BaseModel):
    """Network-mean estimator state at the horizon"""

    model_config = ConfigDict(frozen=True)

    lambda_t: float
    lambda_d: float
    p_p: float = Field(..., ge=0.0, le=1.0)
    p_r: float = Field(..., ge=0.0, le=1.0)


class MetricsReport(BaseModel):
    """Outcome of one simulated run"""

    model_config = ConfigDict(frozen=True)

    schema_version: str = SCHEMA_VERSION
    rng_algorithm: str = RNG_ALGORITHM
    horizon: float

    coding_gain: float = Field(..., ge=1.0)
    zero_transmissions: bool
    mean_e2e_delay: Optional[float] = Field(None, description="None when nothing was delivered")
    throughput: float = Field(..., ge=0.0)

    energy_per_node: float = Field(..., ge=0.0, description="Millijoules")
    energy_per_delivered: Optional[float] = Field(None, description="Millijoules")
    node_energy: List[float] = Field(default_factory=list)

    transmissions: int = Field(..., ge=0)
    failed_transmissions: int = Field(0, ge=0)
    degree_histogram: Dict[int, int] = Field(default_factory=dict)

    generated: int = Field(0, ge=0)
    delivered: int = Field(0, ge=0)
    in_flight: int = Field(0, ge=0)
    drops: int = Field(0, ge=0, description="Queue overflow drops")
    unroutable: int = Field(0, ge=0)
    decode_failures: int = Field(0, ge=0)
    busy_opportunities: int = Field(0, ge=0, description="Opportunities met with a nonempty queue")
    waits: int = Field(0, ge=0, description="Busy opportunities the scheme let pass")

    final_estimates: FinalEstimates

    @property
    def wait_share(self) -> float:
        return self.waits / self.busy_opportunities if self.busy_opportunities else 0.0


class RunRecord(BaseModel):
    """One (scenario, seed, policy) cell of a scenario matrix"""

    model_config = ConfigDict(frozen=True)

    scenario: str
    seed: int
    row_seed: int
    cell_seed: int
    policy: PolicyName
    flow_count: int
    report: MetricsReport

    def sort_key(self) -> tuple:
        return (self.flow_count, self.seed, self.policy.value, self.scenario)
