"""Results CSV, QQ data and trace export"""

import math

import numpy as np
import pandas as pd
import pytest

from copestop._stability_constants import CSV_COLUMNS
from copestop.errors import ContractError, ParameterDomainError
from copestop.exporters import emit_csv, emit_qq_data, export_trace
from copestop.exporters.qq_exporter import exponential_ks, qq_points
from copestop.schema import FinalEstimates, MetricsReport, PolicyName, RunRecord
from copestop.utils.hashing import derive_seed


def _record(seed: int, load: int, policy: PolicyName) -> RunRecord:
    delivered = 10 * load + seed
    report = MetricsReport(
        horizon=100.0,
        coding_gain=1.0 + load / 100.0,
        zero_transmissions=False,
        mean_e2e_delay=0.25 * seed if delivered else None,
        throughput=delivered / 100.0,
        energy_per_node=3500.0 + load,
        energy_per_delivered=1.0 / 3.0,
        transmissions=2 * delivered,
        degree_histogram={1: delivered, 2: delivered // 2},
        generated=delivered + 3,
        delivered=delivered,
        in_flight=3,
        final_estimates=FinalEstimates(lambda_t=5.0, lambda_d=0.1 * load, p_p=0.2, p_r=0.1),
    )
    return RunRecord(
        scenario="desk",
        seed=seed,
        row_seed=derive_seed(1, seed),
        cell_seed=derive_seed(1, seed, load, 0),
        policy=policy,
        flow_count=load,
        report=report,
    )


@pytest.fixture
def records():
    return [
        _record(seed, load, policy)
        for seed in range(1, 6)
        for load in (4, 8, 16, 32)
        for policy in PolicyName
    ]


class TestCsv:
    def test_line_count(self, records, tmp_path):
        path = emit_csv(records, tmp_path / "out.csv")
        lines = path.read_text(encoding="utf-8").split("\n")
        assert lines[-1] == ""
        assert len(lines) - 1 == 61
        assert lines[0] == ",".join(CSV_COLUMNS)
        assert lines[0].endswith(",rng_algorithm,busy_opportunities,waits")

    def test_byte_identical_rerun(self, records, tmp_path):
        a = emit_csv(records, tmp_path / "a.csv").read_bytes()
        b = emit_csv(records, tmp_path / "b.csv").read_bytes()
        assert a == b
        assert b"\r\n" not in a

    def test_empty_records(self, tmp_path):
        with pytest.raises(ContractError):
            emit_csv([], tmp_path / "empty.csv")
        assert not (tmp_path / "empty.csv").exists()

    def test_cell_formats(self, records, tmp_path):
        path = emit_csv(records[:1], tmp_path / "one.csv")
        frame = pd.read_csv(path, dtype=str, keep_default_na=False)
        row = frame.iloc[0]
        assert row["row_seed"] == str(records[0].row_seed)
        assert row["zero_transmissions"] == "false"
        assert row["degree_histogram"] == '{"1":41,"2":20}'
        assert row["energy_per_delivered"] == "0.3333333333"
        assert row["policy"] == "optimal-stopping"
        assert row["rng_algorithm"] == "PCG64"
        assert row["busy_opportunities"] == "0"
        assert row["waits"] == "0"

    def test_absent_delay_is_empty(self, tmp_path):
        record = _record(1, 4, PolicyName.NO_CODING)
        report = record.report.model_copy(update={"mean_e2e_delay": None})
        path = emit_csv([record.model_copy(update={"report": report})], tmp_path / "x.csv")
        frame = pd.read_csv(path, dtype=str, keep_default_na=False)
        assert frame.iloc[0]["mean_e2e_delay"] == ""


class TestQQ:
    def test_exact_samples_on_diagonal(self, tmp_path):
        rate = 5.0
        n = 1000
        positions = (np.arange(1, n + 1) - 0.5) / n
        samples = -np.log1p(-positions) / rate
        _, theoretical, empirical = qq_points(samples, rate)
        assert np.max(np.abs(theoretical - empirical)) < 1e-12
        summary = emit_qq_data(samples, rate, tmp_path / "qq.csv")
        assert summary.max_deviation < 1e-12
        assert summary.n == n

    def test_output_layout(self, tmp_path):
        rng = np.random.default_rng(4)
        samples = rng.exponential(0.2, size=500)
        path = tmp_path / "qq.csv"
        summary = emit_qq_data(samples, 5.0, path)
        lines = path.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "theoretical,empirical"
        assert len(lines) == 502
        assert lines[-1].startswith("# ks_statistic=")
        assert f"n={summary.n}" in lines[-1]

    def test_exponential_sample_passes_ks(self):
        rng = np.random.default_rng(12)
        _, p_value = exponential_ks(rng.exponential(0.2, size=10_000), 5.0)
        assert p_value > 1e-3

    def test_wrong_rate_fails_ks(self):
        rng = np.random.default_rng(12)
        _, p_value = exponential_ks(rng.exponential(0.2, size=10_000), 2.0)
        assert p_value < 1e-6

    def test_too_few_samples(self, tmp_path):
        with pytest.raises(ParameterDomainError):
            emit_qq_data([0.1] * 50, 5.0, tmp_path / "qq.csv")

    def test_nonpositive_rate(self):
        with pytest.raises(ParameterDomainError):
            exponential_ks([0.1] * 200, 0.0)


class TestTrace:
    def test_parquet_round_trip(self, tmp_path):
        trace = [
            {"time": 0.0, "kind": "PACKET_ARRIVAL", "node": 0, "detail": ""},
            {"time": 1.5, "kind": "TX_OPPORTUNITY", "node": 3, "detail": "send degree=2 natives=[0, 4]"},
        ]
        path = export_trace(trace, tmp_path / "nested" / "trace.parquet")
        frame = pd.read_parquet(path)
        assert list(frame.columns) == ["time", "kind", "node", "detail"]
        assert frame["node"].tolist() == [0, 3]
        assert math.isclose(frame["time"].iloc[1], 1.5)
