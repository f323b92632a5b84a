"""Shared fixtures"""

import pytest

from copestop.schema import PolicyParams, ScenarioConfig


@pytest.fixture
def moderate_params():
    """λ_d=10, λ_t=5, δ=0.05, L=40: d* = 50/14"""
    return PolicyParams(lambda_d=10.0, lambda_t=5.0, delta=0.05, buffer_size_L=40)


@pytest.fixture
def slow_opportunity_params():
    """λ_d=2, λ_t=1, δ=0.05, L=40: d* = 1/3"""
    return PolicyParams(lambda_d=2.0, lambda_t=1.0, delta=0.05, buffer_size_L=40)


@pytest.fixture
def static_params():
    """Best degree never grows"""
    return PolicyParams(lambda_d=0.0, lambda_t=5.0, delta=0.05, buffer_size_L=40)


@pytest.fixture
def small_config():
    """A network small enough to simulate in well under a second"""
    return ScenarioConfig(
        node_count=12,
        field_width=400.0,
        field_height=400.0,
        rho=200.0,
        seed=7,
        flow_count=3,
        packet_rate=1.0,
        opportunity_rate=5.0,
        report_rate=5.0,
        horizon=60.0,
    )
