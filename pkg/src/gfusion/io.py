"""System files and report serialization.

A system file is human-writable JSON with an explicit version field:

    {
      "version": 1,
      "field": "real" | "complex",
      "dim": n,
      "subsystems": [
        {"weight": v, "subspace": <n x k matrix>, "lambda": <m x n matrix>},
        ...
      ]
    }

Matrices are row-major nested lists; complex entries are [re, im] pairs.
Subspace matrices hold spanning columns; columns that are already
orthonormal are kept verbatim (so canonical files round-trip exactly),
anything else is orthonormalized on load.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
from typing import Any

import numpy as np

from .errors import GFusionError, SystemFileError
from .system import FrameBounds, GFusionSystem, make_system

SYSTEM_FILE_VERSION = 1


def _entry_to_data(x, field: str):
    if field == "complex":
        return [float(np.real(x)), float(np.imag(x))]
    return float(np.real(x))


def matrix_to_data(m: np.ndarray, field: str) -> list:
    return [[_entry_to_data(x, field) for x in row] for row in np.asarray(m)]


def _is_number(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def _entry_from_data(x, field: str, where: str) -> complex | float:
    if field == "complex":
        if _is_number(x):
            return complex(float(x), 0.0)
        if isinstance(x, list) and len(x) == 2 and all(_is_number(p) for p in x):
            return complex(float(x[0]), float(x[1]))
        raise SystemFileError(f"{where}: complex entries must be numbers or [re, im] pairs")
    if _is_number(x):
        return float(x)
    raise SystemFileError(f"{where}: real entries must be plain numbers")


def matrix_from_data(data, field: str, where: str) -> np.ndarray:
    if not isinstance(data, list) or not data or not all(isinstance(r, list) for r in data):
        raise SystemFileError(f"{where}: expected a non-empty list of rows")
    width = len(data[0])
    rows = []
    for i, row in enumerate(data):
        if len(row) != width:
            raise SystemFileError(f"{where}[{i}]: ragged row (expected {width} entries, got {len(row)})")
        rows.append([_entry_from_data(x, field, f"{where}[{i}][{k}]") for k, x in enumerate(row)])
    dtype = np.complex128 if field == "complex" else np.float64
    return np.array(rows, dtype=dtype)


def system_to_dict(sys: GFusionSystem) -> dict:
    return {
        "version": SYSTEM_FILE_VERSION,
        "field": sys.field,
        "dim": sys.dim,
        "subsystems": [
            {
                "weight": sub.weight,
                "subspace": matrix_to_data(sub.subspace.basis, sys.field),
                "lambda": matrix_to_data(sub.operator, sys.field),
            }
            for sub in sys.subsystems
        ],
    }


def system_from_dict(data: dict) -> GFusionSystem:
    if not isinstance(data, dict):
        raise SystemFileError("top level: expected an object")
    version = data.get("version")
    if version != SYSTEM_FILE_VERSION:
        raise SystemFileError(f"version: expected {SYSTEM_FILE_VERSION}, got {version!r}")
    field = data.get("field")
    if field not in ("real", "complex"):
        raise SystemFileError(f"field: expected 'real' or 'complex', got {field!r}")
    dim = data.get("dim")
    if not isinstance(dim, int) or dim < 1:
        raise SystemFileError(f"dim: expected a positive integer, got {dim!r}")
    raw_subs = data.get("subsystems")
    if not isinstance(raw_subs, list) or not raw_subs:
        raise SystemFileError("subsystems: expected a non-empty list")
    components = []
    for i, raw in enumerate(raw_subs):
        where = f"subsystems[{i}]"
        if not isinstance(raw, dict):
            raise SystemFileError(f"{where}: expected an object")
        weight = raw.get("weight")
        if not _is_number(weight) or not weight > 0:
            raise SystemFileError(f"{where}.weight: expected a positive number, got {weight!r}")
        span = matrix_from_data(raw.get("subspace"), field, f"{where}.subspace")
        if span.shape[0] != dim:
            raise SystemFileError(f"{where}.subspace: expected {dim} rows, got {span.shape[0]}")
        lam = matrix_from_data(raw.get("lambda"), field, f"{where}.lambda")
        if lam.shape[1] != dim:
            raise SystemFileError(f"{where}.lambda: expected {dim} columns, got {lam.shape[1]}")
        components.append((float(weight), span, lam))
    try:
        return make_system(dim, field, components)
    except GFusionError as exc:
        raise SystemFileError(f"system validation failed: {exc}") from exc


def load_system(path: str) -> GFusionSystem:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise SystemFileError(f"{path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SystemFileError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    return system_from_dict(data)


def save_system(sys: GFusionSystem, path: str):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_canonical(system_to_dict(sys)))


def dumps_canonical(payload: dict) -> str:
    """Deterministic JSON: sorted keys, fixed separators, trailing newline."""
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def file_digest(path: str) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def to_jsonable(obj: Any) -> Any:
    """Recursively convert reports (dataclasses, arrays, numpy scalars) to JSON data."""
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, float):
        return obj
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.ndarray):
        field = "complex" if np.iscomplexobj(obj) else "real"
        if obj.ndim == 2:
            return matrix_to_data(obj, field)
        if obj.ndim == 1:
            return [_entry_to_data(x, field) for x in obj]
        return obj.tolist()
    if isinstance(obj, FrameBounds):
        return {"lower": obj.lower, "upper": obj.upper, "kind": obj.kind}
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj)!r}")
