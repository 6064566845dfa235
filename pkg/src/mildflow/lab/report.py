"""Common report record for empirical constants."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field

STABILITY_TOL = 0.10


def relative_change(a, b):
    scale = max(abs(a), abs(b))
    return 0.0 if scale == 0 else abs(a - b) / scale


@dataclass(frozen=True)
class EstimateReport:
    name: str
    constant: float
    samples: int
    resolution: int
    stable: bool | None = None
    seed: int | None = None
    extra: dict = field(default_factory=dict)

    def to_dict(self):
        return asdict(self)

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, default=float)

    def to_text(self):
        rows = [("estimate", self.name), ("constant", f"{self.constant:.10g}"),
                ("samples", str(self.samples)), ("resolution", str(self.resolution)),
                ("stable", str(self.stable)), ("seed", str(self.seed))]
        rows += [(k, f"{v:.10g}" if isinstance(v, float) else str(v)) for k, v in sorted(self.extra.items())
                 if not isinstance(v, (list, tuple, dict))]
        w = max(len(k) for k, _ in rows)
        return "\n".join(f"{k.ljust(w)}  {v}" for k, v in rows)


def series_csv(t, value, bound=None):
    """Plot-data CSV with columns ``t,value[,bound]``."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "value"] + (["bound"] if bound is not None else []))
    for i, ti in enumerate(t):
        row = [repr(float(ti)), repr(float(value[i]))]
        if bound is not None:
            row.append(repr(float(bound[i])))
        w.writerow(row)
    return buf.getvalue()
