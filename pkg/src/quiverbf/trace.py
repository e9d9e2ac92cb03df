"""Step-by-step records shared by the slice and reflection engines."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .bpoly import FactorProduct


@dataclass(frozen=True)
class TraceStep:
    kind: str  # slice, simplify-a, simplify-b', prune, castle, drop
    target: str  # arrow or vertex the step acts on
    factor: FactorProduct
    symbolic: str = ""  # factor with beta-labels, display only
    detail: str = ""
    snapshot: str = ""

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "target": self.target,
            "factor": self.factor.to_json(),
            "factor_text": self.factor.text(),
            "symbolic": self.symbolic,
            "detail": self.detail,
            "snapshot": self.snapshot,
        }


@dataclass
class ReductionTrace:
    method: str
    nvars: int = 1
    steps: list[TraceStep] = field(default_factory=list)

    def add(self, step: TraceStep) -> None:
        self.steps.append(step)

    def product(self) -> FactorProduct:
        out = FactorProduct.unit(self.nvars)
        for s in self.steps:
            out = out * s.factor
        return out

    def factor_steps(self) -> list[TraceStep]:
        return [s for s in self.steps if not s.factor.is_unit()]

    def symbolic_sequence(self) -> list[str]:
        return [s.symbolic for s in self.steps if s.kind == "slice" and s.symbolic]

    def text(self, snapshots: bool = False) -> str:
        lines = [f"{self.method} trace:"]
        for i, s in enumerate(self.steps, 1):
            fac = "" if s.factor.is_unit() else f"  factor {s.factor.text()}"
            sym = f"  [{s.symbolic}]" if s.symbolic else ""
            det = f"  {s.detail}" if s.detail else ""
            lines.append(f"  {i:>3}. {s.kind:<12} {s.target:<10}{fac}{sym}{det}")
            if snapshots and s.snapshot:
                lines.append(f"         -> {s.snapshot}")
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {"method": self.method, "nvars": self.nvars, "steps": [s.to_json() for s in self.steps]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)
