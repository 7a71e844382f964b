"""Reading event and region files, writing tables as text, JSON or CSV.

Event files are JSON::

    {"model": "lozenge",
     "edges": [[[0, 0, 0], [0, 0, 1]], [[0, 1, 0], [0, 1, 1]]],
     "region": {"faces": [[0, 1], [1, 1]]}}      # optional
    # or "torus": [4, 4] instead of "region"

Each edge lists its two endpoints in either order.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .cylinder import CylinderEvent
from .exactfield import SymbolicValue
from .geometry import Model, RegionGraph, build_region

SCHEMA = "dimerstats/1"


class InputError(ValueError):
    """Malformed input file or option (a usage problem, not a computation)."""


@dataclass(frozen=True)
class EventSpec:
    event: CylinderEvent
    region: RegionGraph | None = None
    torus: tuple | None = None


def _read_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def parse_event(data: dict, model=None) -> EventSpec:
    try:
        model = Model.parse(model or data["model"])
        edges = [tuple(tuple(int(c) for c in v) for v in e) for e in data.get("edges", [])]
        event = CylinderEvent(model, tuple(edges))
    except (KeyError, TypeError) as exc:
        raise InputError(f"bad event description: {exc!r}") from exc
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    region = torus = None
    if "region" in data:
        region = parse_region(data["region"], model)
    if "torus" in data:
        m, n = data["torus"]
        torus = (int(m), int(n))
    if region is not None and torus is not None:
        raise InputError("give either a region or a torus, not both")
    return EventSpec(event, region, torus)


def parse_region(data, model) -> RegionGraph:
    faces = data["faces"] if isinstance(data, dict) else data
    try:
        return build_region(model, [tuple(int(c) for c in f) for f in faces])
    except (TypeError, ValueError) as exc:
        raise InputError(f"bad region: {exc}") from exc


def load_event(path, model=None) -> EventSpec:
    return parse_event(_read_json(path), model)


def load_region(path, model=None) -> RegionGraph:
    data = _read_json(path)
    model = model or (data.get("model") if isinstance(data, dict) else None)
    if model is None:
        raise InputError("region file does not name a model; pass --model")
    return parse_region(data.get("region", data) if isinstance(data, dict) else data, model)


def event_to_json(spec: EventSpec) -> dict:
    out = {"model": spec.event.model.value,
           "edges": [[list(e.black), list(e.white)] for e in spec.event.edges]}
    if spec.region is not None:
        out["region"] = {"faces": [list(f) for f in spec.region.faces]}
    if spec.torus is not None:
        out["torus"] = list(spec.torus)
    return out


# output tables ----------------------------------------------------------------------

def cell(value):
    """JSON/CSV friendly form of a computed value."""
    if isinstance(value, (SymbolicValue, Fraction)):
        return str(value)
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, Model):
        return value.value
    return value


@dataclass
class Table:
    command: str
    columns: list
    rows: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def add(self, **values):
        missing = set(self.columns) - set(values)
        if missing:
            raise KeyError(f"row lacks columns {sorted(missing)}")
        self.rows.append({c: cell(values[c]) for c in self.columns})

    def to_json(self) -> str:
        doc = {"schema": SCHEMA, "command": self.command, "columns": self.columns,
               "rows": self.rows}
        if self.meta:
            doc["meta"] = {k: cell(v) for k, v in self.meta.items()}
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for r in self.rows:
            w.writerow([_flat(r[c]) for c in self.columns])
        return buf.getvalue()

    def to_text(self) -> str:
        cols = self.columns
        body = [[_human(r[c]) for c in cols] for r in self.rows]
        widths = [max([len(c)] + [len(b[i]) for b in body]) for i, c in enumerate(cols)]
        lines = ["  ".join(c.ljust(w) for c, w in zip(cols, widths)).rstrip()]
        for b in body:
            lines.append("  ".join(x.ljust(w) for x, w in zip(b, widths)).rstrip())
        for k, v in self.meta.items():
            lines.append(f"# {k}: {_human(cell(v))}")
        return "\n".join(lines) + "\n"

    def render(self, fmt: str) -> str:
        return {"json": self.to_json, "csv": self.to_csv, "human": self.to_text}[fmt]()


def _flat(v):
    if isinstance(v, list):
        return ";".join(repr(x) for x in v)
    if v is None:
        return ""
    return v


def _human(v):
    if isinstance(v, float):
        return f"{v:.10g}"
    if isinstance(v, list):
        re_, im = v
        return f"{re_:.10g}{im:+.10g}i"
    if v is None:
        return "-"
    return str(v)


def error_record(kind: str, exc: BaseException) -> str:
    return json.dumps({"schema": SCHEMA, "error": {"kind": kind, "type": type(exc).__name__,
                                                   "message": str(exc)}}, sort_keys=True)
