"""File formats: operator JSON, qubit-pair JSON, CSV rows.

Operators are stored row-major as ``{"dim": d, "entries": [[[re, im], ...], ...]}``.
Every float written by this package uses 17 significant digits so values
round-trip exactly.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from .effect_core import EffectError, HermitianOperator
from .qubit import QubitEffect

SCHEMA = 1


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def dumps(obj, indent: int | None = 2) -> str:
    """``json.dumps`` with floats at 17 significant digits."""
    def enc(o, level):
        pad = "" if indent is None else "\n" + " " * (indent * (level + 1))
        end = "" if indent is None else "\n" + " " * (indent * level)
        sep = "," if indent is None else ","
        if isinstance(o, bool) or o is None or isinstance(o, str):
            return json.dumps(o)
        if isinstance(o, (int, np.integer)):
            return str(int(o))
        if isinstance(o, (float, np.floating)):
            if not math.isfinite(o):
                raise ValueError(f"non-finite value {o!r} cannot be serialised")
            return fmt(o)
        if isinstance(o, dict):
            if not o:
                return "{}"
            items = [pad + json.dumps(str(k)) + ": " + enc(v, level + 1) for k, v in o.items()]
            return "{" + sep.join(items) + end + "}"
        if isinstance(o, (list, tuple, np.ndarray)):
            if len(o) == 0:
                return "[]"
            # numeric leaves stay on one line
            if all(isinstance(v, (int, float, np.integer, np.floating)) and not isinstance(v, bool) for v in o):
                return "[" + ", ".join(enc(v, level + 1) for v in o) + "]"
            return "[" + sep.join(pad + enc(v, level + 1) for v in o) + end + "]"
        raise TypeError(f"cannot serialise {type(o).__name__}")

    return enc(obj, 0)


def operator_to_dict(mat) -> dict:
    mat = np.asarray(mat, dtype=complex)
    return {"dim": int(mat.shape[0]),
            "entries": [[[float(z.real), float(z.imag)] for z in row] for row in mat]}


def operator_from_dict(d: dict) -> HermitianOperator:
    try:
        dim = int(d["dim"])
        rows = d["entries"]
        mat = np.array([[complex(float(re), float(im)) for re, im in row] for row in rows])
    except (KeyError, TypeError, ValueError) as exc:
        raise EffectError(f"malformed operator record: {exc}") from exc
    if mat.shape != (dim, dim):
        raise EffectError(f"entries have shape {mat.shape}, expected ({dim}, {dim})")
    return HermitianOperator(mat)


def _load_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise EffectError(f"{path}: invalid JSON ({exc})") from exc


def load_operator(path) -> HermitianOperator:
    return operator_from_dict(_load_json(path))


def save_operator(mat, path) -> None:
    Path(path).write_text(dumps(operator_to_dict(mat)) + "\n")


def pair_from_dict(d: dict) -> tuple[QubitEffect, QubitEffect]:
    try:
        return QubitEffect.from_dict(d["A"]), QubitEffect.from_dict(d["B"])
    except KeyError as exc:
        raise EffectError(f"pair record lacks {exc}") from exc


def load_pair(path) -> tuple[QubitEffect, QubitEffect]:
    return pair_from_dict(_load_json(path))


def pair_to_dict(A: QubitEffect, B: QubitEffect) -> dict:
    return {"A": A.to_dict(), "B": B.to_dict()}


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()
