"""Serialization of :class:`~lpnreach.reach.ReachReport` records."""

from __future__ import annotations

import csv
import io
import json
from typing import Sequence

from .reach import ReachReport

CSV_FIELDS = (
    "model", "backend", "states", "firings", "elapsed_s", "termination",
    "local_states", "store_bytes", "local_table_bytes", "estimated_bytes",
    "ss", "ssd", "union_calls", "flushes", "threshold", "max_depth",
)


def to_json(reports: Sequence[ReachReport], agree: bool | None = None) -> str:
    if len(reports) == 1 and agree is None:
        payload = reports[0].to_dict()
    else:
        payload = {"runs": [r.to_dict() for r in reports], "agree": agree}
    return json.dumps(payload, indent=2) + "\n"


def to_csv(reports: Sequence[ReachReport]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for r in reports:
        d = r.to_dict()
        writer.writerow([repr(d[f]) if isinstance(d[f], float) else d[f] for f in CSV_FIELDS])
    return buf.getvalue()


def to_text(reports: Sequence[ReachReport], agree: bool | None = None) -> str:
    header = (f"{'model':<18} {'backend':<7} {'|S|':>10} {'firings':>11} {'time(s)':>9} "
              f"{'est.MiB':>9} {'SS':>10} {'SSD':>11} {'unions':>8}  status")
    lines = [header, "-" * len(header)]
    for r in reports:
        lines.append(
            f"{r.model:<18} {r.backend:<7} {r.states:>10} {r.firings:>11} "
            f"{r.elapsed_s:>9.2f} {r.estimated_bytes / (1 << 20):>9.3f} {r.ss:>10.0f} "
            f"{r.ssd:>11.0f} {r.union_calls:>8}  {r.termination}")
    if agree is not None:
        lines.append(f"backends agree: {'yes' if agree else 'NO'}")
    return "\n".join(lines) + "\n"


def from_csv(text: str) -> list[dict]:
    """Parse :func:`to_csv` output back into typed dicts."""
    rows = []
    for row in csv.DictReader(io.StringIO(text)):
        typed = {}
        for k, v in row.items():
            if k in ("model", "backend", "termination"):
                typed[k] = v
            elif k in ("elapsed_s", "ss", "ssd"):
                typed[k] = float(v)
            else:
                typed[k] = int(v)
        rows.append(typed)
    return rows
