"""Rule files: versioned JSON and CSV with a metadata header."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

import numpy as np

from .cubature import CubatureRule
from .distributions import Distribution
from .quadrature import QuadratureRule
from .reduce1d import NestedFamily

SCHEMA = "cq-rule/1"

Payload = Union[QuadratureRule, CubatureRule, NestedFamily]


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def rule_to_dict(rule) -> dict:
    if isinstance(rule, QuadratureRule):
        return {"type": "quadrature", "nodes": rule.nodes.tolist(), "std_nodes": rule.std_nodes.tolist(),
                "weights": rule.weights.tolist(), "degree": int(rule.degree),
                "distribution": rule.distribution.to_dict(), "provenance": rule.provenance,
                "meta": _jsonable(rule.meta)}
    if isinstance(rule, CubatureRule):
        return {"type": "cubature", "d": rule.d, "nodes": rule.nodes.tolist(),
                "std_nodes": rule.std_nodes.tolist(), "weights": rule.weights.tolist(),
                "degree": int(rule.degree), "distributions": [d.to_dict() for d in rule.distributions],
                "provenance": rule.provenance, "meta": _jsonable(rule.meta)}
    raise TypeError(f"cannot serialize {type(rule).__name__}")


def rule_from_dict(data: dict):
    kind = data.get("type", "cubature" if "d" in data else "quadrature")
    if kind == "quadrature":
        dist = Distribution.from_dict(data["distribution"])
        u = data.get("std_nodes")
        u = np.asarray(u, float) if u is not None else dist.to_standard(np.asarray(data["nodes"], float))
        return QuadratureRule(u, data["weights"], int(data["degree"]), dist,
                              data.get("provenance", "vandermonde_solve"), data.get("meta", {}))
    if kind == "cubature":
        dists = tuple(Distribution.from_dict(d) for d in data["distributions"])
        u = data.get("std_nodes")
        if u is None:
            x = np.asarray(data["nodes"], float)
            u = np.column_stack([dd.to_standard(x[:, i]) for i, dd in enumerate(dists)])
        return CubatureRule(np.asarray(u, float), data["weights"], int(data["degree"]), dists,
                            data.get("provenance", "tensor"), data.get("meta", {}))
    raise ValueError(f"unknown rule type {kind!r}")


@dataclass
class RuleFile:
    """A payload plus creation metadata, serialized under a schema tag."""

    payload: Payload
    metadata: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {"schema": SCHEMA, "metadata": _jsonable(self.metadata)}
        if isinstance(self.payload, NestedFamily):
            out.update({"nested": True, "rules": [rule_to_dict(r) for r in self.payload]})
        else:
            out["rule"] = rule_to_dict(self.payload)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "RuleFile":
        schema = data.get("schema")
        if schema != SCHEMA:
            raise ValueError(f"unsupported schema {schema!r} (expected {SCHEMA})")
        if "rules" in data:
            payload = NestedFamily(tuple(rule_from_dict(r) for r in data["rules"]))
        else:
            payload = rule_from_dict(data["rule"])
        return cls(payload, data.get("metadata", {}))

    def dumps(self) -> str:
        # json writes floats with repr, so values round-trip exactly
        return json.dumps(self.to_dict(), indent=1) + "\n"

    def save(self, path: Union[str, Path]) -> None:
        path = Path(path)
        if path.suffix == ".csv":
            path.write_text(to_csv(self.payload, self.metadata), newline="")
        else:
            path.write_text(self.dumps())

    @classmethod
    def load(cls, path: Union[str, Path]) -> "RuleFile":
        path = Path(path)
        if path.suffix == ".csv":
            raise ValueError("CSV files are export-only; load the JSON rule file")
        return cls.from_dict(json.loads(path.read_text()))


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def to_csv(payload, metadata: dict | None = None) -> str:
    """Comma-separated table with ``# key: value`` metadata lines first."""
    buf = io.StringIO()
    for k, v in (metadata or {}).items():
        buf.write(f"# {k}: {json.dumps(_jsonable(v))}\n")
    rules = list(payload) if isinstance(payload, NestedFamily) else [payload]
    w = csv.writer(buf, lineterminator="\n")
    multi = len(rules) > 1
    first = rules[0]
    if isinstance(first, QuadratureRule):
        w.writerow((["rule_size"] if multi else []) + ["node", "weight"])
    else:
        w.writerow((["rule_size"] if multi else []) + [f"x{i + 1}" for i in range(first.d)] + ["weight"])
    for r in rules:
        x = r.nodes.reshape(len(r), -1)
        for row, wt in zip(x, r.weights):
            w.writerow(([len(r)] if multi else []) + [_fmt(v) for v in row] + [_fmt(wt)])
    return buf.getvalue()


def table_csv(rows: list[dict], metadata: dict | None = None) -> str:
    """Generic result table with the same header convention."""
    buf = io.StringIO()
    for k, v in (metadata or {}).items():
        buf.write(f"# {k}: {json.dumps(_jsonable(v))}\n")
    if not rows:
        return buf.getvalue()
    w = csv.writer(buf, lineterminator="\n")
    # union of columns in first-seen order; missing cells stay empty
    keys = list(dict.fromkeys(k for r in rows for k in r))
    w.writerow(keys)
    for r in rows:
        w.writerow([_fmt(r[k]) if isinstance(r.get(k), float) else r.get(k, "") for k in keys])
    return buf.getvalue()
