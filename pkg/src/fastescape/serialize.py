"""Deterministic JSON/CSV emission.

JSON uses sorted keys and Python's shortest round-trip float repr, so byte
layout depends only on the payload values, never on worker count or dict
construction order.  Tower values serialize as {"h": int, "x": float}.
"""

from __future__ import annotations

import dataclasses
import json
import math
from typing import Any, Iterable

from .xreal import TowerReal


def jsonable(obj: Any) -> Any:
    if isinstance(obj, TowerReal):
        return obj.to_json()
    if hasattr(obj, "to_json"):
        return jsonable(obj.to_json())
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return jsonable(dataclasses.asdict(obj))
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (bool, int, str)) or obj is None:
        return obj
    if isinstance(obj, float):
        return obj
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return str(obj)


def dump_json(payload: Any) -> str:
    return json.dumps(jsonable(payload), sort_keys=True, indent=2) + "\n"


def format_cell(v: Any) -> str:
    if isinstance(v, TowerReal):
        f = v.to_float()
        return repr(f) if math.isfinite(f) else f"exp^{v.h}({v.x!r})"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def dump_csv(header: Iterable[str], rows: Iterable[Iterable[Any]]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_cell(c) for c in row))
    return "\n".join(lines) + "\n"
