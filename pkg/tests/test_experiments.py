"""Scenario files and the policy × load × seed matrix"""

from pathlib import Path

import pytest

from copestop.errors import ConfigValidationError, MatrixRunError, ParameterDomainError
from copestop.experiments import parse_config, run_matrix
from copestop.experiments.config import render_config, with_overrides
from copestop.experiments.matrix import MAX_WORKERS_ENV, derive_cell_seeds, plan_cells, resolve_workers
from copestop.schema import PolicyName

CONFIG_DIR = Path(__file__).parent.parent / "configs"
ALL_POLICIES = list(PolicyName)


class TestParseConfig:
    def test_reference_setup(self):
        config = parse_config(CONFIG_DIR / "reference.conf")
        assert config.node_count == 200
        assert (config.field_width, config.field_height) == (1100.0, 1100.0)
        assert config.rho == 200.0
        assert config.buffer_size == 40
        assert config.delta == 0.05
        assert (config.gain_slope, config.gain_intercept) == (1.0, 0.0)
        assert config.policy is PolicyName.OPTIMAL_STOPPING

    def test_path_given_as_string(self):
        config = parse_config(str(CONFIG_DIR / "desk.conf"))
        assert config.node_count == 30

    def test_defaults_fill_omitted_keys(self):
        config = parse_config("node_count = 10\n")
        assert config.buffer_size == 40
        assert config.loss_probability == 0.0

    def test_comments(self):
        config = parse_config("# header\nnode_count = 10  # trailing\n\nrho = 150\n")
        assert config.node_count == 10
        assert config.rho == 150.0

    def test_missing_node_count(self):
        with pytest.raises(ConfigValidationError) as excinfo:
            parse_config("rho = 200\n")
        assert [key for key, _ in excinfo.value.issues] == ["node_count"]
        assert "node_count" in str(excinfo.value)

    def test_negative_delta(self):
        with pytest.raises(ConfigValidationError) as excinfo:
            parse_config("node_count = 10\ndelta = -0.05\n")
        assert excinfo.value.issues[0][0] == "delta"

    def test_unknown_key(self):
        with pytest.raises(ConfigValidationError) as excinfo:
            parse_config("node_count = 10\nnode_cnt = 11\n")
        assert ("node_cnt", "unknown key") in excinfo.value.issues

    def test_every_issue_reported(self):
        with pytest.raises(ConfigValidationError) as excinfo:
            parse_config("node_count = 10\nnode_count = 12\nrho\nhorizon = 0\n")
        keys = [key for key, _ in excinfo.value.issues]
        assert "node_count" in keys
        assert "line 3" in keys
        assert "horizon" in keys

    def test_render_round_trip(self):
        config = parse_config(CONFIG_DIR / "reference.conf")
        assert parse_config(render_config(config)) == config

    def test_overrides_are_validated(self):
        config = parse_config("node_count = 10\n")
        assert with_overrides(config, flow_count=3).flow_count == 3
        with pytest.raises(ConfigValidationError):
            with_overrides(config, flow_count=-1)


class TestCellPlanning:
    def test_row_seed_shared_across_cells(self):
        row_a, cell_a = derive_cell_seeds(1, 3, 0, 0)
        row_b, cell_b = derive_cell_seeds(1, 3, 2, 1)
        assert row_a == row_b
        assert cell_a != cell_b

    def test_seeds_differ_per_row(self):
        assert derive_cell_seeds(1, 3, 0, 0)[0] != derive_cell_seeds(1, 4, 0, 0)[0]

    def test_product_count(self):
        cells = plan_cells("desk", 1, ALL_POLICIES, [4, 8, 16, 32], [1, 2, 3, 4, 5])
        assert len(cells) == 60
        assert len({(c.seed, c.flow_count, c.policy) for c in cells}) == 60

    def test_worker_cap(self, monkeypatch):
        monkeypatch.setenv(MAX_WORKERS_ENV, "2")
        assert resolve_workers(8, 100) == 2
        assert resolve_workers(8, 1) == 1
        monkeypatch.setenv(MAX_WORKERS_ENV, "many")
        assert resolve_workers(3, 100) == 3


class TestRunMatrix:
    @pytest.fixture
    def tiny(self, small_config):
        return small_config.model_copy(update={"horizon": 10.0})

    def test_single_cell(self, tiny):
        records = run_matrix(tiny, [PolicyName.IMMEDIATE_SEND], [2], [1], workers=1)
        assert len(records) == 1
        assert records[0].policy is PolicyName.IMMEDIATE_SEND
        assert records[0].flow_count == 2

    def test_product_and_order(self, tiny):
        records = run_matrix(tiny, ALL_POLICIES, [1, 2], [1, 2], scenario="tiny", workers=1)
        assert len(records) == 12
        keys = [r.sort_key() for r in records]
        assert keys == sorted(keys)
        assert {r.scenario for r in records} == {"tiny"}

    def test_policies_share_traffic(self, tiny):
        records = run_matrix(
            tiny, [PolicyName.IMMEDIATE_SEND, PolicyName.NO_CODING], [2], [1], workers=1
        )
        assert records[0].report.generated == records[1].report.generated
        assert records[0].row_seed == records[1].row_seed

    def test_empty_axis(self, tiny):
        with pytest.raises(ParameterDomainError):
            run_matrix(tiny, [], [1], [1], workers=1)

    def test_failed_cells_reported(self, tiny):
        impossible = tiny.model_copy(update={"min_flow_hops": 30, "max_flow_attempts": 5})
        with pytest.raises(MatrixRunError) as excinfo:
            run_matrix(impossible, [PolicyName.IMMEDIATE_SEND], [1], [1, 2], workers=1)
        assert len(excinfo.value.failures) == 2
        assert excinfo.value.records == []

    @pytest.mark.slow
    def test_parallel_matches_serial(self, tiny):
        serial = run_matrix(tiny, ALL_POLICIES, [1, 2], [1], workers=1)
        parallel = run_matrix(tiny, ALL_POLICIES, [1, 2], [1], workers=2)
        assert [r.model_dump() for r in serial] == [r.model_dump() for r in parallel]
