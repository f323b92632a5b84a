"""
Radio energy under a four-state power model.

energy = P_tx·t_tx + P_rx·t_rx + P_idle·t_idle + P_circuit·horizon

Powers are in mW and times in seconds, so energies come out in mJ.
"""

from dataclasses import dataclass

from .._stability_constants import (
    POWER_CIRCUIT_MW,
    POWER_IDLE_MW,
    POWER_RECEIVE_MW,
    POWER_TRANSMIT_MW,
)
from ..errors import ParameterDomainError


@dataclass(frozen=True)
class PowerModel:
    transmit_mw: float = POWER_TRANSMIT_MW
    receive_mw: float = POWER_RECEIVE_MW
    idle_mw: float = POWER_IDLE_MW
    circuit_mw: float = POWER_CIRCUIT_MW


@dataclass
class RadioActivity:
    """Bits a node put on, and took off, the air"""

    transmitted_bits: float = 0.0
    received_bits: float = 0.0


@dataclass(frozen=True)
class EnergyBreakdown:
    transmit: float
    receive: float
    idle: float
    circuit: float

    @property
    def total(self) -> float:
        return self.transmit + self.receive + self.idle + self.circuit


def account_energy(
    activity: RadioActivity,
    horizon: float,
    bitrate: float,
    power: PowerModel = PowerModel(),
) -> EnergyBreakdown:
    """
    Energy of one node over a finished run.

    Idle time is whatever the horizon leaves after transmit and receive
    airtime, clamped at zero.
    """
    if horizon < 0.0:
        raise ParameterDomainError(f"horizon must be >= 0, got {horizon}")
    if bitrate <= 0.0:
        raise ParameterDomainError(f"bitrate must be > 0, got {bitrate}")
    t_tx = activity.transmitted_bits / bitrate
    t_rx = activity.received_bits / bitrate
    t_idle = max(0.0, horizon - t_tx - t_rx)
    return EnergyBreakdown(
        transmit=power.transmit_mw * t_tx,
        receive=power.receive_mw * t_rx,
        idle=power.idle_mw * t_idle,
        circuit=power.circuit_mw * horizon,
    )
