"""JSON formats for matrices and positive maps.

Matrix: ``{"dim": n, "entries": [[[re, im], ...], ...]}`` row-major. Kraus
operators may be rectangular; those carry an extra ``"shape": [rows, cols]``.

Maps: a tagged union on ``"form"`` mirroring :mod:`traceineq.maps`.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from traceineq import maps


class ParseError(ValueError):
    pass


def matrix_to_json(A) -> dict:
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2:
        raise ValueError(f"expected a 2-d array, got shape {A.shape}")
    out = {
        "dim": int(A.shape[0]),
        "entries": [[[float(z.real), float(z.imag)] for z in row] for row in A],
    }
    if A.shape[0] != A.shape[1]:
        out["shape"] = [int(A.shape[0]), int(A.shape[1])]
    return out


def matrix_from_json(obj, where: str = "matrix") -> np.ndarray:
    try:
        rows, cols = obj.get("shape", [obj["dim"], obj["dim"]])
        data = np.array(obj["entries"], dtype=float)
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise ParseError(f"{where}: malformed matrix object ({exc})") from exc
    if data.shape != (rows, cols, 2):
        raise ParseError(f"{where}: entries have shape {data.shape}, expected ({rows}, {cols}, 2)")
    return data[..., 0] + 1j * data[..., 1]


def map_to_json(phi) -> dict:
    if isinstance(phi, maps.KrausCP):
        return {"form": "kraus", "kraus": [matrix_to_json(A) for A in phi.kraus]}
    if isinstance(phi, maps.Transpose):
        return {"form": "transpose", "dim": phi.dim}
    if isinstance(phi, maps.ConvexMixture):
        return {
            "form": "mixture",
            "weights": [float(w) for w in phi.weights],
            "parts": [map_to_json(p) for p in phi.parts],
        }
    if isinstance(phi, maps.Composition):
        return {"form": "composition", "outer": map_to_json(phi.outer), "inner": map_to_json(phi.inner)}
    if isinstance(phi, maps.BlockEmbed):
        return {"form": "block_embed", "dim": phi.dim, "copies": phi.copies}
    if isinstance(phi, maps.BlockSum):
        return {"form": "block_sum", "dim": phi.dim, "copies": phi.copies}
    raise TypeError(f"not a map representation: {type(phi).__name__}")


def map_from_json(obj, where: str = "map"):
    try:
        form = obj["form"]
        if form == "kraus":
            return maps.KrausCP(
                tuple(matrix_from_json(A, f"{where}.kraus[{i}]") for i, A in enumerate(obj["kraus"]))
            )
        if form == "transpose":
            return maps.Transpose(int(obj["dim"]))
        if form == "mixture":
            parts = tuple(map_from_json(p, f"{where}.parts[{i}]") for i, p in enumerate(obj["parts"]))
            return maps.ConvexMixture(tuple(float(w) for w in obj["weights"]), parts)
        if form == "composition":
            return maps.Composition(
                map_from_json(obj["outer"], f"{where}.outer"), map_from_json(obj["inner"], f"{where}.inner")
            )
        if form == "block_embed":
            return maps.BlockEmbed(int(obj["dim"]), int(obj["copies"]))
        if form == "block_sum":
            return maps.BlockSum(int(obj["dim"]), int(obj["copies"]))
    except ParseError:
        raise
    except (KeyError, TypeError) as exc:
        raise ParseError(f"{where}: malformed map object ({exc!r})") from exc
    except ValueError as exc:
        raise ParseError(f"{where}: {exc}") from exc
    raise ParseError(f"{where}: unknown map form {form!r}")


def value_to_json(value):
    """Serialise one instance field: matrix, map, list, scalar or text label."""
    if isinstance(value, maps.MAP_TYPES):
        return {"map": map_to_json(value)}
    if isinstance(value, np.ndarray):
        return {"matrix": matrix_to_json(value)}
    if isinstance(value, (list, tuple)):
        return {"list": [value_to_json(v) for v in value]}
    if isinstance(value, str):
        return {"text": value}
    if isinstance(value, (int, float, np.floating, np.integer)):
        return {"scalar": float(value)}
    raise TypeError(f"cannot serialise {type(value).__name__}")


def value_from_json(obj, where: str):
    if not isinstance(obj, dict) or len(obj) != 1:
        raise ParseError(f"{where}: expected a single-key tagged value")
    (tag, payload), = obj.items()
    if tag == "matrix":
        return matrix_from_json(payload, where)
    if tag == "map":
        return map_from_json(payload, where)
    if tag == "list":
        return [value_from_json(v, f"{where}[{i}]") for i, v in enumerate(payload)]
    if tag == "scalar":
        return float(payload)
    if tag == "text":
        return str(payload)
    raise ParseError(f"{where}: unknown tag {tag!r}")


def instance_to_json(instance: dict) -> dict:
    return {k: value_to_json(v) for k, v in instance.items()}


def instance_from_json(obj: dict, where: str = "instance") -> dict:
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: expected an object")
    return {k: value_from_json(v, f"{where}.{k}") for k, v in obj.items()}


def load_json(path) -> object:
    """Read a JSON file; decode errors are re-raised naming the byte offset."""
    path = Path(path)
    raw = path.read_bytes()
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        text = raw.decode("utf-8", errors="replace")
        offset = len(text[: exc.pos].encode("utf-8"))
        raise ParseError(
            f"{path}: invalid JSON at byte offset {offset} (line {exc.lineno}, column {exc.colno}): {exc.msg}"
        ) from exc
    except UnicodeDecodeError as exc:
        raise ParseError(f"{path}: invalid UTF-8 at byte offset {exc.start}") from exc
