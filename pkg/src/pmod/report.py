"""Line-oriented run reports.

A report is a sequence of ``key: value`` lines in a fixed section order:
operation, parameters, input hashes, verdicts (with witnesses), values,
artifacts, timing.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from fractions import Fraction

from .barcode import INF
from .exact import format_rational
from .formats import format_matrix
from .interleave import Verdict

REPORT_HEADER = "report v1"


def render_value(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    if value == INF:
        return "inf"
    if isinstance(value, (int, Fraction)):
        return format_rational(value)
    return str(value)


def sha256_of(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


@dataclass
class Report:
    operation: str
    params: dict[str, object] = field(default_factory=dict)
    inputs: dict[str, str] = field(default_factory=dict)
    verdicts: dict[str, Verdict] = field(default_factory=dict)
    values: dict[str, object] = field(default_factory=dict)
    artifacts: dict[str, str] = field(default_factory=dict)
    elapsed: float | None = None

    def add_input(self, name: str, data: bytes) -> None:
        self.inputs[name] = sha256_of(data)

    def render(self, timing: bool = True) -> str:
        lines = [REPORT_HEADER, f"operation: {self.operation}"]
        lines += [f"param.{k}: {render_value(v)}" for k, v in self.params.items()]
        lines += [f"input.{k}.sha256: {v}" for k, v in self.inputs.items()]
        for name, v in self.verdicts.items():
            lines.append(f"verdict.{name}: {'accepted' if v.accepted else 'rejected'}")
            if v.witness is not None:
                w = v.witness
                lines.append(f"witness.{name}.x: {format_rational(w.x)}")
                lines.append(f"witness.{name}.condition: {w.condition}")
                lines.append(f"witness.{name}.lhs: {format_matrix(w.lhs)}")
                lines.append(f"witness.{name}.rhs: {format_matrix(w.rhs)}")
        lines += [f"value.{k}: {render_value(v)}" for k, v in self.values.items()]
        lines += [f"artifact.{k}: {v}" for k, v in self.artifacts.items()]
        if timing and self.elapsed is not None:
            lines.append(f"elapsed_s: {self.elapsed:.6f}")
        return "\n".join(lines) + "\n"


def parse_report(text: str) -> dict[str, str]:
    """Key/value view of a rendered report (the header line is dropped)."""
    out = {}
    for line in text.splitlines()[1:]:
        key, _, value = line.partition(": ")
        out[key] = value
    return out
