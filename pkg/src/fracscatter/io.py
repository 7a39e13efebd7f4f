"""CSV/JSON emitters with 17-significant-digit numbers.

Formatting never depends on locale: floats go through ``format(x, '.17g')``.
Non-finite values are written as ``nan``/``inf`` in CSV and ``null`` in JSON.
"""
from __future__ import annotations

import json
import math
from typing import Any, Iterable, Sequence, TextIO

import numpy as np

from . import kernels
from .scan import ScanField, SubPeakTrack

FIELD_HEADER = ("alpha", "E", "log10R", "log10T", "log10_abs_m22", "log10_abs_C")


def fmt(x: Any) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    if x is None:
        return ""
    return str(x)


def write_csv(out: TextIO, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    out.write(",".join(header) + "\n")
    for row in rows:
        out.write(",".join(fmt(v) for v in row) + "\n")


def field_rows(fld: ScanField):
    """Long-form rows ``alpha, E, log10R, log10T, log10|m22|, log10|C|``."""
    v = fld.values
    for j, a in enumerate(fld.alphas):
        for i, e in enumerate(fld.energies):
            yield (
                a, e,
                v[kernels.ROW_R, j, i], v[kernels.ROW_T, j, i],
                v[kernels.ROW_M22, j, i], v[kernels.ROW_C, j, i],
            )


def write_field_csv(out: TextIO, fields: Iterable[ScanField]) -> None:
    out.write(",".join(FIELD_HEADER) + "\n")
    for fld in fields:
        for row in field_rows(fld):
            out.write(",".join(fmt(x) for x in row) + "\n")


def track_rows(tracks: Iterable[SubPeakTrack]):
    for t in tracks:
        for s in t.samples:
            yield (t.peak_id, t.kind, t.main, *s)


TRACK_HEADER = ("peak_id", "kind", "main", "alpha", "e_peak", "log10R", "log10T", "log10_residual")


def _json(obj: Any, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return format(x, ".17g") if math.isfinite(x) else "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{_json(str(k), indent, level + 1)}: {_json(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in seq):
            return "[" + ", ".join(_json(v, indent, level + 1) for v in seq) + "]"
        return "[\n" + ",\n".join(pad + _json(v, indent, level + 1) for v in seq) + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps_json(obj: Any, indent: int = 2) -> str:
    """JSON text with every float at 17 significant digits."""
    return _json(obj, indent, 0) + "\n"
