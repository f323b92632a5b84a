"""
Deterministic seed mixing and report hashing.

STABILITY-CRITICAL: the splitmix64 constants, canonical JSON arguments and
hash algorithm are frozen in _stability_constants.py. Changing any of them
changes every derived seed, and therefore every result, ever produced.
"""

import hashlib
import json
from typing import Any, Dict

from .._stability_constants import (
    CANONICAL_JSON_ENSURE_ASCII,
    CANONICAL_JSON_SEPARATORS,
    CANONICAL_JSON_SORT_KEYS,
    REPORT_HASH_ALGORITHM,
    REPORT_HASH_ENCODING,
    SPLITMIX_INCREMENT,
    SPLITMIX_MASK,
    SPLITMIX_MULTIPLIER_1,
    SPLITMIX_MULTIPLIER_2,
)


def splitmix64(state: int) -> int:
    """One splitmix64 output for the given 64-bit state"""
    z = (state + SPLITMIX_INCREMENT) & SPLITMIX_MASK
    z = ((z ^ (z >> 30)) * SPLITMIX_MULTIPLIER_1) & SPLITMIX_MASK
    z = ((z ^ (z >> 27)) * SPLITMIX_MULTIPLIER_2) & SPLITMIX_MASK
    return z ^ (z >> 31)


def derive_seed(*components: int) -> int:
    """
    Fold integer components into one 64-bit seed.

    derive_seed(a, b) != derive_seed(b, a); every component must be >= 0.
    """
    if not components:
        raise ValueError("derive_seed needs at least one component")
    state = 0
    for component in components:
        if component < 0:
            raise ValueError(f"seed components must be >= 0, got {component}")
        state = splitmix64(state ^ (component & SPLITMIX_MASK))
    return state


def canonical_json(data: Dict[str, Any]) -> str:
    return json.dumps(
        data,
        sort_keys=CANONICAL_JSON_SORT_KEYS,
        separators=CANONICAL_JSON_SEPARATORS,
        ensure_ascii=CANONICAL_JSON_ENSURE_ASCII,
    )


def compute_report_hash(report) -> str:
    """Stable digest of a MetricsReport (or any pydantic model)"""
    payload = canonical_json(report.model_dump(mode="json"))
    return hashlib.new(REPORT_HASH_ALGORITHM, payload.encode(REPORT_HASH_ENCODING)).hexdigest()
