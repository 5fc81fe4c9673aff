"""JSON serialization with fixed float formatting.

Floats are written with 17 significant digits so that every value parses back
to the identical IEEE-754 double, which is what makes map round-trips and
trajectory replays bit-exact. Field order follows dict insertion order.
"""
from __future__ import annotations

import json
import math

import numpy as np


def format_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        raise ValueError(f"non-finite float cannot be serialized: {x}")
    return f"{x:.17g}"


def dumps(obj) -> str:
    """Serialize nested dicts/lists/scalars to compact JSON text."""
    parts: list[str] = []
    _write(obj, parts)
    return "".join(parts)


def _write(obj, parts: list[str]) -> None:
    if obj is None:
        parts.append("null")
    elif obj is True:
        parts.append("true")
    elif obj is False:
        parts.append("false")
    elif isinstance(obj, str):
        parts.append(json.dumps(obj))
    elif isinstance(obj, (int, np.integer)):
        parts.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        parts.append(format_float(float(obj)))
    elif isinstance(obj, dict):
        parts.append("{")
        for k, (key, value) in enumerate(obj.items()):
            if k:
                parts.append(",")
            parts.append(json.dumps(str(key)))
            parts.append(":")
            _write(value, parts)
        parts.append("}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        parts.append("[")
        seq = obj.tolist() if isinstance(obj, np.ndarray) else obj
        for k, value in enumerate(seq):
            if k:
                parts.append(",")
            _write(value, parts)
        parts.append("]")
    else:
        raise TypeError(f"cannot serialize value of type {type(obj).__name__}")


def loads(text: str):
    return json.loads(text)
