"""
Flat `key = value` scenario files.

One assignment per line; `#` starts a comment (whole-line or trailing).
Keys map one-to-one onto ScenarioConfig fields; unknown keys are rejected
and omitted keys take their defaults.
"""

import logging
from pathlib import Path
from typing import Any, Dict, List, Tuple, Union

from pydantic import ValidationError

from ..errors import ConfigValidationError
from ..schema import ScenarioConfig

logger = logging.getLogger(__name__)

ConfigSource = Union[str, Path]


def _read_source(source: ConfigSource) -> str:
    if isinstance(source, Path):
        return source.read_text(encoding="utf-8")
    if "=" in source or "\n" in source:
        return source
    return Path(source).read_text(encoding="utf-8")


def _split_assignments(text: str) -> Tuple[Dict[str, str], List[Tuple[str, str]]]:
    values: Dict[str, str] = {}
    issues: List[Tuple[str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            issues.append((f"line {lineno}", f"expected 'key = value', got {raw.strip()!r}"))
            continue
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            issues.append((f"line {lineno}", "empty key"))
        elif key in values:
            issues.append((key, f"duplicate assignment on line {lineno}"))
        else:
            values[key] = value
    return values, issues


def _validate(values: Dict[str, Any], issues: List[Tuple[str, str]]) -> ScenarioConfig:
    known = set(ScenarioConfig.model_fields)
    for key in values:
        if key not in known:
            issues.append((key, "unknown key"))
    accepted = {k: v for k, v in values.items() if k in known}

    try:
        config = ScenarioConfig.model_validate(accepted)
    except ValidationError as e:
        for error in e.errors():
            key = ".".join(str(part) for part in error["loc"]) or "config"
            issues.append((key, error["msg"]))
        config = None

    if issues:
        raise ConfigValidationError(issues)
    return config


def parse_config(source: ConfigSource) -> ScenarioConfig:
    """
    Parse and validate a scenario.

    Args:
        source: A path, or the text of a config file

    Returns:
        Validated ScenarioConfig with defaults applied

    Raises:
        ConfigValidationError: one issue per offending key or line
    """
    values, issues = _split_assignments(_read_source(source))
    config = _validate(values, issues)
    logger.debug(f"Parsed config with {len(values)} explicit keys")
    return config


def with_overrides(config: ScenarioConfig, **overrides: Any) -> ScenarioConfig:
    """Re-validated copy of config with some fields replaced"""
    values = config.model_dump()
    values.update(overrides)
    return _validate(values, [])


def _format_value(value: Any) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if hasattr(value, "value"):
        return str(value.value)
    return repr(value) if isinstance(value, float) else str(value)


def render_config(config: ScenarioConfig) -> str:
    """Every field, defaults included, in the flat format parse_config reads"""
    lines = [f"{name} = {_format_value(getattr(config, name))}" for name in ScenarioConfig.model_fields]
    return "\n".join(lines) + "\n"
