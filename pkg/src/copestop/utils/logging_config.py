"""
Logging for command-line runs and matrix workers.

Human-readable or JSON lines on stderr, an optional JSON log file, and run
fields (scenario, policy, seed) attached to records emitted inside a
LogContext. Spawned matrix workers start with no handlers, so the parent's
settings are handed to them through configure_worker_logging.
"""

import json
import logging
import sys
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional, Tuple

CONTEXT_FIELDS = ("scenario", "policy", "seed", "stage", "sim_time")

PLAIN_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


@dataclass(frozen=True)
class LoggingSettings:
    level: str = "WARNING"
    structured: bool = False


_active = LoggingSettings()


class StructuredFormatter(logging.Formatter):
    """One JSON object per record"""

    def format(self, record: logging.LogRecord) -> str:
        entry = {
            "timestamp": datetime.fromtimestamp(record.created, timezone.utc).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
        }
        entry.update(
            {name: getattr(record, name) for name in CONTEXT_FIELDS if hasattr(record, name)}
        )
        if hasattr(record, "duration"):
            entry["duration_seconds"] = record.duration
        if record.exc_info:
            entry["exception"] = self.formatException(record.exc_info)
        return json.dumps(entry, default=str)


def _handler(stream_or_path, level: int, formatter: logging.Formatter) -> logging.Handler:
    if isinstance(stream_or_path, Path):
        stream_or_path.parent.mkdir(parents=True, exist_ok=True)
        handler: logging.Handler = logging.FileHandler(stream_or_path)
    else:
        handler = logging.StreamHandler(stream_or_path)
    handler.setLevel(level)
    handler.setFormatter(formatter)
    return handler


def setup_logging(
    log_level: str = "INFO", log_file: Optional[Path] = None, structured: bool = True
) -> None:
    """
    Replace the root handlers with a stderr handler and an optional file handler.

    Args:
        log_level: DEBUG, INFO, WARNING or ERROR (unknown names fall back to INFO)
        log_file: Also write JSON records here
        structured: JSON on stderr instead of plain text
    """
    global _active
    level = getattr(logging, log_level.upper(), logging.INFO)

    root = logging.getLogger()
    root.setLevel(level)
    root.handlers = []

    console_format = StructuredFormatter() if structured else logging.Formatter(PLAIN_FORMAT)
    root.addHandler(_handler(sys.stderr, level, console_format))
    if log_file:
        root.addHandler(_handler(Path(log_file), level, StructuredFormatter()))

    logging.getLogger("pyarrow").setLevel(logging.WARNING)
    _active = LoggingSettings(level=logging.getLevelName(level), structured=structured)


def worker_logging_args() -> Tuple[str, bool]:
    """initargs for configure_worker_logging, taken from the last setup_logging call"""
    return _active.level, _active.structured


def configure_worker_logging(log_level: str, structured: bool) -> None:
    """Process-pool initializer: stderr only, the file stays with the parent"""
    setup_logging(log_level=log_level, structured=structured)


class LogContext:
    """Attach run fields to every record created inside the block"""

    def __init__(self, **fields):
        self.fields = fields
        self._previous = logging.getLogRecordFactory()

    def __enter__(self) -> "LogContext":
        self._previous = previous = logging.getLogRecordFactory()
        fields = self.fields

        def factory(*args, **kwargs):
            record = previous(*args, **kwargs)
            for key, value in fields.items():
                setattr(record, key, value)
            return record

        logging.setLogRecordFactory(factory)
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        logging.setLogRecordFactory(self._previous)
