"""Verification reports and their deterministic serialisation."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from .geometry import SpaceSpec

TOOL_VERSION = "0.1.0"


def _clean(value: Any) -> Any:
    """Convert numpy scalars/arrays and nested containers to plain JSON types."""
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_clean(v) for v in value.tolist()]
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        v = float(value)
        if math.isnan(v) or math.isinf(v):
            return repr(v)
        return v
    if isinstance(value, SpaceSpec):
        return value.as_dict()
    if hasattr(value, "value") and isinstance(getattr(value, "value"), str):
        return value.value
    return value


@dataclass
class VerificationReport:
    check_id: str
    space: SpaceSpec | None
    parameters: dict
    passed: bool
    worst_margin: float
    worst_location: dict
    grid_meta: dict
    notes: list[str] = field(default_factory=list)
    children: list["VerificationReport"] = field(default_factory=list)

    @classmethod
    def from_margin(cls, check_id: str, margin: float, tolerance: float, *, space=None,
                    parameters=None, location=None, grid_meta=None, notes=None,
                    strict: bool = False) -> VerificationReport:
        """``strict`` demands margin > -tolerance, for claims of strict positivity."""
        meta = dict(grid_meta or {})
        meta["tolerance"] = tolerance
        margin = float(margin)
        passed = margin > -tolerance if strict else margin >= -tolerance
        if strict:
            meta["strict"] = True
        return cls(check_id, space, dict(parameters or {}), bool(passed), margin,
                   dict(location or {}), meta, list(notes or []))

    @classmethod
    def skipped(cls, check_id: str, reason: str, *, space=None, parameters=None) -> VerificationReport:
        return cls(check_id, space, dict(parameters or {}), True, math.inf, {},
                   {"tolerance": 0.0, "applicable": False}, [f"not applicable: {reason}"])

    @classmethod
    def combine(cls, check_id: str, children: Sequence[VerificationReport], *, space=None,
                parameters=None, grid_meta=None, notes=None) -> VerificationReport:
        """Aggregate report whose margin is the smallest slack ``margin + tolerance`` of its children."""
        slack = math.inf
        where: dict = {}
        for c in children:
            s = c.worst_margin + c.grid_meta.get("tolerance", 0.0)
            if s < slack:
                slack, where = s, {"check": c.check_id, **c.worst_location}
        meta = dict(grid_meta or {})
        meta["tolerance"] = 0.0
        meta["margin_kind"] = "slack (margin + tolerance) of the worst child"
        passed = all(c.passed for c in children)
        return cls(check_id, space, dict(parameters or {}), passed, slack, where, meta,
                   list(notes or []), list(children))

    @property
    def tolerance(self) -> float:
        return self.grid_meta.get("tolerance", 0.0)

    def failures(self) -> list[VerificationReport]:
        out = [] if self.passed or self.children else [self]
        for c in self.children:
            out.extend(c.failures())
        return out

    def to_dict(self) -> dict:
        return _clean({
            "check_id": self.check_id,
            "space": self.space,
            "parameters": self.parameters,
            "passed": self.passed,
            "worst_margin": self.worst_margin,
            "worst_location": self.worst_location,
            "grid_meta": self.grid_meta,
            "notes": self.notes,
            "children": [c.to_dict() for c in self.children],
        })

    @classmethod
    def from_dict(cls, d: dict) -> VerificationReport:
        def num(x):
            return float(x) if isinstance(x, str) else x
        space = SpaceSpec(**d["space"]) if d.get("space") else None
        return cls(d["check_id"], space, d["parameters"], d["passed"], num(d["worst_margin"]),
                   d["worst_location"], d["grid_meta"], list(d["notes"]),
                   [cls.from_dict(c) for c in d.get("children", [])])

    def flatten(self, prefix: str = "") -> list[VerificationReport]:
        rows = [self]
        for c in self.children:
            rows.extend(c.flatten())
        return rows


def dumps_json(payload: Any) -> str:
    """Deterministic JSON: sorted keys, shortest round-trip floats, LF newline."""
    return json.dumps(_clean(payload), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def document(command: str, reports: Iterable[VerificationReport], extra: dict | None = None) -> dict:
    reports = list(reports)
    doc = {
        "tool": "ross-spectra",
        "version": TOOL_VERSION,
        "command": command,
        "passed": all(r.passed for r in reports),
        "reports": [r.to_dict() for r in reports],
    }
    if extra:
        doc.update(_clean(extra))
    return doc


def _fmt(v: Any) -> str:
    v = _clean(v)
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True)
    return str(v)


def rows_to_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def reports_to_csv(reports: Iterable[VerificationReport]) -> str:
    header = ["check_id", "space", "passed", "worst_margin", "tolerance", "worst_location", "parameters", "notes"]
    rows = []
    for top in reports:
        for r in top.flatten():
            rows.append([r.check_id, r.space.label if r.space else "", r.passed, r.worst_margin,
                         r.tolerance, r.worst_location, r.parameters, "; ".join(r.notes)])
    return rows_to_csv(header, rows)


def write_text(path: str | Path, text: str) -> None:
    path = Path(path)
    try:
        if path.parent and not path.parent.exists():
            path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
