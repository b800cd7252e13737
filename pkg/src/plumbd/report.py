"""Serialization of reports: JSON, CSV and DOT.

Rationals are always written as exact strings, ``"p/q"`` in lowest terms or
a bare integer; never as decimals.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from typing import Any, Dict, List, Sequence

from .grading import GradedRoot, root_to_dot
from .optimizer import DInvariantReport
from .plumbing import PlumbingGraph, PlumbingMatrix

FORMATS = ("json", "csv", "dot")


class UnsupportedFormat(ValueError):
    pass


def format_rational(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def manifold_dict(g: PlumbingGraph, m: PlumbingMatrix) -> Dict[str, Any]:
    return {
        "s": m.s,
        "ids": list(m.ids),
        "weights": list(m.weights),
        "edges": [list(e) for e in g.edges],
        "det": m.det,
        "h1_order": abs(m.det),
    }


def _cell(value: Any) -> str:
    if isinstance(value, (list, tuple)):
        return ";".join(str(v) for v in value)
    if isinstance(value, Fraction):
        return format_rational(value)
    return str(value)


DINV_COLUMNS = ["index", "rep", "maximizer", "max_square", "d"]
SPINC_COLUMNS = ["index", "rep", "coords"]


def to_csv(rows: Sequence[Dict[str, Any]], columns: List[str]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row[col]) for col in columns])
    return buf.getvalue()


def to_json(doc: Dict[str, Any]) -> str:
    return json.dumps(_jsonable(doc), indent=2) + "\n"


def dinv_document(g: PlumbingGraph, m: PlumbingMatrix, reports: Sequence[DInvariantReport]) -> Dict[str, Any]:
    return {"manifold": manifold_dict(g, m), "classes": [r.to_dict() for r in reports]}


def write_report(report: Dict[str, Any], fmt: str) -> bytes:
    """Serialize a ``{"manifold": ..., "classes": [...]}`` document.

    ``dot`` expects ``report["roots"]`` to hold :class:`GradedRoot` objects;
    ``csv`` writes the class rows with columns given by ``report["columns"]``
    (default: the d-invariant table).
    """
    if fmt == "json":
        doc = {k: v for k, v in report.items() if k not in ("columns", "roots")}
        if "roots" in report:
            doc["roots"] = [r.to_dict() for r in report["roots"]]
        return to_json(doc).encode()
    if fmt == "csv":
        if "classes" not in report:
            raise UnsupportedFormat("csv output needs a class table")
        return to_csv(report["classes"], report.get("columns", DINV_COLUMNS)).encode()
    if fmt == "dot":
        roots: List[GradedRoot] = report.get("roots")
        if roots is None:
            raise UnsupportedFormat("dot output is only available for graded roots")
        return "".join(root_to_dot(r) for r in roots).encode()
    raise UnsupportedFormat(f"unknown format {fmt!r}; expected one of {', '.join(FORMATS)}")
