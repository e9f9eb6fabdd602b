"""Detection reports: JSON for programs, a fixed-width table for people."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .scan import DetectionSet


@dataclass
class DetectionReport:
    """Rows of ``(label(n_max), h, gamma, label(lo), label(hi))`` plus the threshold.

    ``labels[n - 1]`` names time ``n``; without labels the integer index is
    printed.  Labels are carried through verbatim and never parsed.
    """

    detections: DetectionSet
    q: float
    config: dict = field(default_factory=dict)
    labels: list[str] | None = None

    def _label(self, n: int) -> str:
        return self.labels[n - 1] if self.labels else str(n)

    def rows(self) -> list[dict]:
        out = []
        for d in self.detections:
            row = d.to_dict()
            if self.labels:
                row.update(label=self._label(d.n), lo_label=self._label(d.lo), hi_label=self._label(d.hi))
            out.append(row)
        return out

    def to_dict(self) -> dict:
        return {"q": self.q, "config": self.config, "detections": self.rows()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_table(self) -> str:
        head = ("n_max", "h", "gamma(n,h)", "[n_max-h+1,", "n_max+h]")
        body = [
            (self._label(d.n), str(d.h), f"{d.gamma:.4g}", f"[{self._label(d.lo)},", f"{self._label(d.hi)}]")
            for d in self.detections
        ]
        widths = [max(len(r[i]) for r in [head, *body]) for i in range(len(head))]
        lines = ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in [head, *body]]
        lines.insert(1, "-" * len(lines[0]))
        if not body:
            lines.append("(no changes detected)")
        lines.append(f"critical threshold q = {self.q:.6g}")
        return "\n".join(lines) + "\n"
