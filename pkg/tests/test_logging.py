"""Logging setup and run-context records"""

import json
import logging

import pytest

from copestop.utils.logging_config import (
    LogContext,
    StructuredFormatter,
    setup_logging,
    worker_logging_args,
)


@pytest.fixture
def restore_root_logger():
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    yield
    for handler in root.handlers:
        if handler not in handlers:
            handler.close()
    root.handlers = handlers
    root.setLevel(level)


def _record(message: str = "cell done", **extra) -> logging.LogRecord:
    record = logging.getLogger("copestop.test").makeRecord(
        "copestop.test", logging.INFO, __file__, 1, message, (), None
    )
    for key, value in extra.items():
        setattr(record, key, value)
    return record


class TestStructuredFormatter:
    def test_core_fields(self):
        entry = json.loads(StructuredFormatter().format(_record()))
        assert entry["level"] == "INFO"
        assert entry["logger"] == "copestop.test"
        assert entry["message"] == "cell done"
        assert "timestamp" in entry

    def test_context_fields_and_duration(self):
        entry = json.loads(
            StructuredFormatter().format(_record(policy="no-coding", seed=3, duration=1.5))
        )
        assert entry["policy"] == "no-coding"
        assert entry["seed"] == 3
        assert entry["duration_seconds"] == 1.5
        assert "scenario" not in entry


class TestLogContext:
    def test_fields_attached_inside_block_only(self):
        with LogContext(scenario="desk", policy="immediate-send", seed=5):
            inside = logging.getLogRecordFactory()("copestop.test", logging.INFO, __file__, 1, "x", (), None)
        outside = logging.getLogRecordFactory()("copestop.test", logging.INFO, __file__, 1, "x", (), None)
        assert inside.scenario == "desk"
        assert inside.seed == 5
        assert not hasattr(outside, "scenario")


class TestSetupLogging:
    def test_worker_args_follow_last_setup(self, restore_root_logger):
        setup_logging(log_level="DEBUG", structured=True)
        assert worker_logging_args() == ("DEBUG", True)
        setup_logging(log_level="warning", structured=False)
        assert worker_logging_args() == ("WARNING", False)

    def test_unknown_level_falls_back_to_info(self, restore_root_logger):
        setup_logging(log_level="chatty", structured=False)
        assert logging.getLogger().level == logging.INFO

    def test_log_file_gets_json(self, restore_root_logger, tmp_path):
        path = tmp_path / "logs" / "run.jsonl"
        setup_logging(log_level="INFO", log_file=path, structured=False)
        logging.getLogger("copestop.test").info("hello")
        for handler in logging.getLogger().handlers:
            handler.flush()
        lines = path.read_text(encoding="utf-8").splitlines()
        assert json.loads(lines[-1])["message"] == "hello"
