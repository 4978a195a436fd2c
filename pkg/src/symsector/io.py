"""JSON containers for matrices, subspaces and sequences.

Matrices are ``{"d": int, "rows": [[...], ...]}`` (row major). For a map
``d`` is the half dimension and ``rows`` is ``2d x 2d``; for a graph matrix
``rows`` is ``d x d``. Sequences are ``{"maps": [matrix, ...]}`` or
``{"example69": {"A": ..., "P": ..., "tau": [[tau, tau'], ...]}}``, where
``A`` and ``P`` are either one ``d x d`` row list (reused at every step) or
a list of them, and ``R`` and ``C`` are optional.

Floats are written with 17 significant digits so reports round-trip.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .errors import DimensionMismatch, SymsectorError
from .lagrangian import LagrangianSubspace, subspace_from_graph
from .sequences import Example69Spec, MapSequence, build_example69
from .symplectic import BlockMap


class SchemaError(SymsectorError):
    pass


def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    text = format(x, ".17g")
    return text if any(c in text for c in ".en") else text + ".0"


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON encoding with 17-significant-digit floats and numpy support."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, (np.floating, float)):
        return _fmt_float(float(obj))
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if obj is None:
        return "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj):
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in obj) + "]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot encode {type(obj).__name__}")


def load(path) -> dict:
    with open(path) as fh:
        obj = json.load(fh)
    if not isinstance(obj, dict):
        raise SchemaError(f"{path}: top level must be an object")
    return obj


def matrix_obj(m, d: int | None = None) -> dict:
    m = np.asarray(m, dtype=float)
    if d is None:
        d = m.shape[0] // 2
    return {"d": d, "rows": m}


def read_matrix(obj, square_of: str = "map") -> np.ndarray:
    """Parse a matrix container; ``square_of`` is ``"map"`` (2d x 2d) or ``"graph"`` (d x d)."""
    if not isinstance(obj, dict) or "rows" not in obj:
        raise SchemaError('matrix must be an object with "rows"')
    try:
        m = np.array(obj["rows"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"bad matrix rows: {exc}") from None
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise SchemaError(f"matrix must be square, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise SchemaError("matrix entries must be finite")
    side = m.shape[0]
    if "d" in obj:
        expected = 2 * int(obj["d"]) if square_of == "map" else int(obj["d"])
        if side != expected:
            raise DimensionMismatch(f'"d" = {obj["d"]} does not match a {side}x{side} matrix')
    return m


def read_map(obj) -> BlockMap:
    return BlockMap(read_matrix(obj, "map"))


def read_subspaces(obj) -> list[LagrangianSubspace]:
    if "subspaces" not in obj:
        raise SchemaError('expected {"subspaces": [...]}')
    return [subspace_from_graph(read_matrix(s, "graph")) for s in obj["subspaces"]]


def subspaces_obj(subspaces) -> dict:
    return {"subspaces": [{"d": s.dim, "rows": s.graph()} for s in subspaces]}


def read_example69(obj) -> Example69Spec:
    body = obj["example69"]
    try:
        return Example69Spec.build(
            a=body["A"],
            p=body["P"],
            tau=body["tau"],
            r=body.get("R"),
            c_bound=body.get("C"),
        )
    except KeyError as exc:
        raise SchemaError(f"example69 is missing {exc}") from None


def read_sequence(obj) -> MapSequence:
    """Parse ``{"maps": [...]}``, ``{"example69": {...}}`` or a single matrix.

    A lone matrix becomes a one-element sequence; callers repeat it as
    needed.
    """
    if "maps" in obj:
        return MapSequence([read_map(m) for m in obj["maps"]])
    if "example69" in obj:
        return build_example69(read_example69(obj))
    if "rows" in obj:
        return MapSequence([read_map(obj)])
    raise SchemaError('expected "maps", "example69" or a matrix object')


def sequence_obj(seq: MapSequence) -> dict:
    return {"maps": [matrix_obj(m.full) for m in seq.maps]}


def write_text(text: str, path: str | None) -> None:
    if path is None:
        print(text)
    else:
        Path(path).write_text(text + "\n")
