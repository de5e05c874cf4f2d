"""Named scalar results and their CSV / JSON serialisation."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

UNITS = frozenset({"J", "s", "s^-1", "K", "eV", "dimensionless", "ps"})


@dataclass(frozen=True)
class ResultRecord:
    name: str
    value: float
    unit: str
    formula_ref: str
    inputs: dict[str, tuple[float, str]] = field(default_factory=dict)

    def __post_init__(self):
        if self.unit not in UNITS:
            raise ValueError(f"unit {self.unit!r} not in {sorted(UNITS)}")
        if not math.isfinite(self.value):
            raise ValueError(f"record {self.name!r} has non-finite value {self.value!r}")
        for key, (_, unit) in self.inputs.items():
            if unit not in UNITS:
                raise ValueError(f"input {key!r} has unknown unit {unit!r}")

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "value": self.value,
            "unit": self.unit,
            "formula_ref": self.formula_ref,
            "inputs": {k: {"value": v, "unit": u} for k, (v, u) in self.inputs.items()},
        }

    @classmethod
    def from_dict(cls, d: dict) -> ResultRecord:
        return cls(
            name=d["name"],
            value=float(d["value"]),
            unit=d["unit"],
            formula_ref=d["formula_ref"],
            inputs={k: (float(v["value"]), v["unit"]) for k, v in d.get("inputs", {}).items()},
        )


def fmt(value: float) -> str:
    """Shortest round-trip text for a float, independent of locale."""
    return repr(float(value))


def records_to_json(records: list[ResultRecord]) -> str:
    return json.dumps([r.to_dict() for r in records], indent=2)


def records_from_json(text: str) -> list[ResultRecord]:
    return [ResultRecord.from_dict(d) for d in json.loads(text)]


def write_csv(stream, header: list[str], rows) -> None:
    """Comma-separated, LF-terminated; floats in shortest round-trip form."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) if isinstance(v, float) else v for v in row])


def records_to_csv(records: list[ResultRecord]) -> str:
    buf = io.StringIO()
    write_csv(buf, ["name", "value", "unit", "formula_ref"],
              ([r.name, float(r.value), r.unit, r.formula_ref] for r in records))
    return buf.getvalue()


def records_to_table(records: list[ResultRecord]) -> str:
    if not records:
        return ""
    width = max(len(r.name) for r in records)
    lines = []
    for r in records:
        lines.append(f"{r.name:<{width}}  {r.value:>16.10g}  {r.unit:<13}  {r.formula_ref}")
    return "\n".join(lines) + "\n"
