"""Model documents, graph exports, growth CSVs and deterministic JSON reports."""

from __future__ import annotations

import json
import re
from dataclasses import asdict, is_dataclass
from fractions import Fraction
from typing import Any, Iterable

import numpy as np

from .growth import GlobalGrowth, GrowthCurve
from .model import CellModel
from .substitution import HierarchicalGraph

MODEL_FIELDS = ("name", "vertices", "boundary", "slots", "anchor_slot")
EXPORT_FORMATS = ("dot", "edges", "json")


class ModelFormatError(ValueError):
    """A model document that cannot be turned into a well-formed cell model."""


def _line_col(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    return line, pos - (text.rfind("\n", 0, pos) + 1) + 1


def _element_offset(text: str, key: str, index: int | None) -> int | None:
    """Text offset of ``key`` (or of its ``index``-th array element) in a JSON object."""
    match = re.search(r'"%s"\s*:\s*' % re.escape(key), text)
    if match is None:
        return None
    pos = match.end()
    if index is None:
        return pos
    if pos >= len(text) or text[pos] != "[":
        return pos
    depth, count, in_str = 0, 0, False
    i = pos
    while i < len(text):
        ch = text[i]
        if in_str:
            if ch == "\\":
                i += 1
            elif ch == '"':
                in_str = False
        elif ch == '"':
            in_str = True
        elif ch in "[{":
            depth += 1
            if depth == 2 and count == index:
                return i
        elif ch in "]}":
            depth -= 1
            if depth == 0:
                break
        elif ch == "," and depth == 1:
            count += 1
        elif depth == 1 and count == index and not ch.isspace():
            return i
        i += 1
    return pos


def _fail(text: str, message: str, key: str, index: int | None = None) -> ModelFormatError:
    offset = _element_offset(text, key, index)
    if offset is not None:
        line, col = _line_col(text, offset)
        message = f"{message} (line {line}, column {col})"
    return ModelFormatError(message)


def _is_int(x: Any) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def parse_model(text: str) -> CellModel:
    """Parse a JSON model document; diagnostics name the offending field and its position."""
    if not text.strip():
        raise ModelFormatError("syntax error: empty document")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"syntax error: {exc.msg} (line {exc.lineno}, column {exc.colno})") from None
    if not isinstance(doc, dict):
        raise ModelFormatError("syntax error: a model document must be a JSON object")
    unknown = sorted(set(doc) - set(MODEL_FIELDS))
    if unknown:
        raise _fail(text, f"unknown field {unknown[0]!r}", unknown[0])
    for key in ("name", "vertices", "boundary", "slots"):
        if key not in doc:
            raise ModelFormatError(f"missing field {key!r}")
    if not isinstance(doc["name"], str):
        raise _fail(text, "name: expected a string", "name")
    for key in ("vertices", "anchor_slot"):
        if key in doc and not _is_int(doc[key]):
            raise _fail(text, f"{key}: expected an integer", key)
    if not isinstance(doc["boundary"], list) or not all(_is_int(v) for v in doc["boundary"]):
        raise _fail(text, "boundary: expected an array of integers", "boundary")
    slots = doc["slots"]
    if not isinstance(slots, list):
        raise _fail(text, "slots: expected an array of arrays", "slots")
    for i, s in enumerate(slots):
        if not isinstance(s, list) or not all(_is_int(v) for v in s):
            raise _fail(text, f"slots[{i}]: expected an array of integers", "slots", i)
    try:
        return CellModel(name=doc["name"], vertex_count=doc["vertices"], boundary=tuple(doc["boundary"]),
                         slots=tuple(tuple(s) for s in slots), anchor_slot=doc.get("anchor_slot", 0))
    except ValueError as exc:
        msg = str(exc)
        hit = re.match(r"slots\[(\d+)\]", msg)
        if hit:
            raise _fail(text, msg, "slots", int(hit.group(1))) from None
        key = "boundary" if msg.startswith("boundary") else ("anchor_slot" if "anchor" in msg else "vertices")
        raise _fail(text, msg, key) from None


def dump_model(m: CellModel) -> str:
    """Canonical model document (one slot per line)."""
    slots = ",\n".join("    " + json.dumps(list(s)) for s in m.slots)
    return (
        "{\n"
        f'  "name": {json.dumps(m.name)},\n'
        f'  "vertices": {m.vertex_count},\n'
        f'  "boundary": {json.dumps(list(m.boundary))},\n'
        f'  "slots": [\n{slots}\n  ],\n'
        f'  "anchor_slot": {m.anchor_slot}\n'
        "}\n"
    )


def export_graph(hg: HierarchicalGraph, fmt: str) -> str:
    edges = hg.graph.edges().tolist()
    if fmt == "edges":
        return "\n".join(f"{u} {v}" for u, v in edges)
    if fmt == "dot":
        lines = [f"graph G{hg.n} {{"]
        lines += [f"  {v} [level={int(lv)}];" for v, lv in enumerate(hg.level.tolist())]
        lines += [f"  {u} -- {v};" for u, v in edges]
        lines.append("}")
        return "\n".join(lines) + "\n"
    if fmt == "json":
        doc = {
            "model": hg.model.name,
            "n": hg.n,
            "boundary": list(hg.boundary),
            "vertices": [{"id": v, "level": int(lv)} for v, lv in enumerate(hg.level.tolist())],
            "edges": edges,
        }
        return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"
    raise ValueError(f"unknown export format {fmt!r}; choose from {', '.join(EXPORT_FORMATS)}")


def write_growth_csv(series: GrowthCurve | Iterable[GlobalGrowth]) -> str:
    if isinstance(series, GrowthCurve):
        rows = ["r,volume"] + [f"{r},{int(v)}" for r, v in enumerate(series.volumes.tolist())]
    else:
        items = list(series)
        if not items:
            raise ValueError("empty growth series")
        rows = ["r,lower,upper"] + [f"{g.radius},{g.lower},{g.upper}" for g in items]
    return "\n".join(rows) + "\n"


def jsonable(obj: Any) -> Any:
    """Recursively convert numpy scalars/arrays, dataclasses and fractions to JSON types."""
    if hasattr(obj, "to_dict"):
        return jsonable(obj.to_dict())
    if is_dataclass(obj) and not isinstance(obj, type):
        return jsonable(asdict(obj))
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [jsonable(v) for v in items]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, Fraction):
        return int(obj) if obj.denominator == 1 else str(obj)
    return obj


def report_json(doc: Any) -> str:
    """Byte-stable JSON: sorted keys, shortest round-trip floats, trailing newline."""
    return json.dumps(jsonable(doc), sort_keys=True, indent=2, allow_nan=False) + "\n"
