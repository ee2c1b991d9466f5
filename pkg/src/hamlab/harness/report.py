"""Per-claim summary of stored result rows."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass

from .core import FIXED_COLUMNS, REGISTRY


class ReportError(ValueError):
    pass


@dataclass
class ClaimSummary:
    experiment: str
    claim: str
    rows: int = 0
    passed: int = 0
    worst_margin: float = math.nan
    measured_min: float = math.inf
    measured_max: float = -math.inf
    target: str = ""
    tolerance: str = ""

    @property
    def status(self) -> str:
        if self.rows == 0:
            return "MISSING"
        if self.passed < self.rows:
            return "FAIL"
        return "info" if math.isnan(self.worst_margin) else "pass"


def read_rows(paths) -> list[dict]:
    rows = []
    for path in paths:
        try:
            with open(path, newline="") as fh:
                reader = csv.DictReader(fh)
                header = tuple(reader.fieldnames or ())
                if header[:len(FIXED_COLUMNS)] != FIXED_COLUMNS:
                    raise ReportError(f"{path}: unexpected header {header[:len(FIXED_COLUMNS)]}")
                for r in reader:
                    exp = REGISTRY.get(r["experiment"])
                    if exp is not None and header != exp.header:
                        raise ReportError(f"{path}: header does not match the schema of {exp.id}")
                    rows.append(r)
        except OSError as e:
            raise ReportError(f"cannot read {path}: {e}") from None
    versions = sorted({r["version"] for r in rows})
    if len(versions) > 1:
        raise ReportError(f"version mismatch across rows: {', '.join(versions)}")
    return rows


def summarize(rows, require_all: bool = False) -> list[ClaimSummary]:
    """Aggregate rows per (experiment, claim) with a coverage check.

    Every declared claim of each experiment present in the rows (or of every
    registered experiment with ``require_all``) gets an entry; claims with no
    rows are reported as MISSING.
    """
    table: dict[tuple[str, str], ClaimSummary] = {}
    present = sorted({r["experiment"] for r in rows})
    ids = sorted(REGISTRY) if require_all else present
    for eid in ids:
        if eid in REGISTRY:
            for c in REGISTRY[eid].claims:
                table[(eid, c)] = ClaimSummary(eid, c)
    for r in rows:
        key = (r["experiment"], r["claim"])
        s = table.setdefault(key, ClaimSummary(*key))
        s.rows += 1
        s.passed += r["passed"] == "true"
        m = float(r["measured"])
        s.measured_min = min(s.measured_min, m)
        s.measured_max = max(s.measured_max, m)
        if r["margin"] not in ("", "nan"):
            mg = float(r["margin"])
            if math.isnan(s.worst_margin) or mg < s.worst_margin:
                s.worst_margin = mg
                s.target, s.tolerance = r["target"], r["tolerance"]
    order = {eid: i for i, eid in enumerate(ids)}
    return sorted(table.values(), key=lambda s: (order.get(s.experiment, len(order)), s.experiment,
                                                 REGISTRY[s.experiment].claims.index(s.claim)
                                                 if s.experiment in REGISTRY and s.claim in REGISTRY[s.experiment].claims
                                                 else 0, s.claim))


def _g(x: float) -> str:
    return "" if isinstance(x, float) and (math.isnan(x) or math.isinf(x)) else f"{x:.6g}"


def render(summaries) -> str:
    head = ("experiment", "claim", "anchor", "rows", "passed", "measured", "target", "tolerance",
            "worst margin", "status")
    lines = ["| " + " | ".join(head) + " |", "|" + "---|" * len(head)]
    for s in summaries:
        anchor = REGISTRY[s.experiment].anchor if s.experiment in REGISTRY else ""
        if s.rows == 0:
            measured = ""
        elif s.measured_min == s.measured_max:
            measured = _g(s.measured_min)
        else:
            measured = f"{_g(s.measured_min)} .. {_g(s.measured_max)}"
        target = _g(float(s.target)) if s.target not in ("", "nan") else ""
        tol = _g(float(s.tolerance)) if s.tolerance not in ("",) else ""
        cells = (s.experiment, s.claim, anchor.replace("|", "/"), str(s.rows), str(s.passed), measured,
                 target, tol if target else "", _g(s.worst_margin), s.status)
        lines.append("| " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"


def report(paths, require_all: bool = False) -> tuple[str, bool]:
    """Rendered table and whether every claim is covered and passing."""
    if not paths:
        return "", True
    summaries = summarize(read_rows(paths), require_all)
    ok = all(s.status in ("pass", "info") for s in summaries)
    return render(summaries), ok
