"""Acceptance suite behind `copestop verify`"""

import pytest

from copestop.experiments.acceptance import (
    DESK_LOADS,
    MIN_WAIT_SHARE,
    check_coding_algebra,
    check_determinism,
    check_estimators,
    check_relay_exchange,
    check_integral_identities,
    check_opportunity_exponentiality,
    check_threshold_equivalence,
    check_value_iteration,
    desk_matrix,
    check_energy_trend,
    check_load_trends,
    run_acceptance,
    wait_shares,
)
from copestop.exporters import records_frame
from copestop.schema import FinalEstimates, MetricsReport, PolicyName, RunRecord

pytestmark = pytest.mark.acceptance


@pytest.mark.parametrize(
    "check",
    [
        check_integral_identities,
        check_threshold_equivalence,
        check_value_iteration,
        check_opportunity_exponentiality,
        check_relay_exchange,
        check_estimators,
        check_coding_algebra,
    ],
    ids=lambda c: c.__name__,
)
def test_quick_check(check):
    passed, detail = check()
    assert passed, detail


def test_suite_reports_selected_checks():
    results = run_acceptance([9, 5])
    assert [r.number for r in results] == [5, 9]
    assert all(r.passed for r in results)


@pytest.mark.slow
class TestDeskMatrix:
    """Desk-scale trends; these depend on the simulated traffic, not on algebra"""

    @pytest.fixture(scope="class")
    def frame(self):
        return desk_matrix()

    def test_gain_and_delay_trends(self, frame):
        passed, detail = check_load_trends(frame)
        assert passed, detail

    def test_energy_trend(self, frame):
        passed, detail = check_energy_trend(frame)
        assert passed, detail

    @pytest.mark.determinism
    def test_byte_identical_reruns(self):
        passed, detail = check_determinism()
        assert passed, detail


def _cell(policy: PolicyName, load: int, waits: int) -> RunRecord:
    stopping = policy is PolicyName.OPTIMAL_STOPPING
    report = MetricsReport(
        horizon=100.0,
        coding_gain=1.0 + load / 100.0 + (0.05 if stopping else 0.0),
        zero_transmissions=False,
        mean_e2e_delay=0.5 if stopping else 0.4,
        throughput=1.0,
        energy_per_node=10.0,
        energy_per_delivered=0.1,
        transmissions=100,
        generated=100,
        delivered=100,
        busy_opportunities=1000,
        waits=waits if stopping else 0,
        final_estimates=FinalEstimates(lambda_t=20.0, lambda_d=1.0, p_p=0.1, p_r=0.1),
    )
    return RunRecord(
        scenario="desk",
        seed=1,
        row_seed=11,
        cell_seed=12,
        policy=policy,
        flow_count=load,
        report=report,
    )


def _frame(waits: int):
    return records_frame(
        _cell(policy, load, waits)
        for load in DESK_LOADS
        for policy in (PolicyName.OPTIMAL_STOPPING, PolicyName.IMMEDIATE_SEND)
    )


class TestLoadTrendCheck:
    def test_wait_shares_per_load(self):
        shares = wait_shares(_frame(waits=100), PolicyName.OPTIMAL_STOPPING)
        assert shares == {load: pytest.approx(0.1) for load in DESK_LOADS}
        assert wait_shares(_frame(waits=100), PolicyName.IMMEDIATE_SEND)[32] == 0.0

    def test_passes_when_stopping_policy_waits(self):
        passed, detail = check_load_trends(_frame(waits=100))
        assert passed, detail

    def test_fails_when_stopping_policy_never_waits(self):
        passed, detail = check_load_trends(_frame(waits=0))
        assert not passed
        assert "stop wait share=[0.0, 0.0, 0.0, 0.0]" in detail

    def test_wait_share_floor(self):
        below = int(MIN_WAIT_SHARE * 1000) - 1
        passed, _ = check_load_trends(_frame(waits=below))
        assert not passed
