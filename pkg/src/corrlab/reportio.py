"""Deterministic JSON encoding for reports.

Rationals are rendered as "numerator/denominator" strings so exact values
survive serialization; keys are sorted and no timestamps are embedded, so
identical inputs produce byte-identical reports.
"""

from __future__ import annotations

import json
from dataclasses import is_dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

SCHEMA_VERSION = 1


def encode(obj):
    """Recursively convert a report structure to plain JSON-ready values."""
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if is_dataclass(obj) and hasattr(obj, "to_json_obj"):
        return encode(obj.to_json_obj())
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [encode(v) for v in obj.tolist()]
    raise TypeError(f"cannot encode {type(obj).__name__} into a report")


def dump_report(report: dict) -> str:
    return json.dumps(encode(report), indent=2, sort_keys=True) + "\n"
