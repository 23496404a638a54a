"""Score matches against hand-assigned TP/FP gold labels.

Gold labels are keyed by ``(rule_id, file, line, first_pos, second_pos)``,
with ``second_pos`` 0 for prefix matches.  Matches without a label are
counted as unlabeled rather than assumed false, and precision is
``tp / (tp + fp)``, left undefined (``None``) when nothing was judged.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import GoldFileError
from .matching import Match
from .rules import rule_sort_key

GOLD_COLUMNS = ("rule_id", "file", "line", "first_pos", "second_pos", "label")
REPORT_COLUMNS = ("rule_id", "results", "tp", "fp", "unlabeled", "precision")
LABELS = ("TP", "FP")
AGGREGATE_ID = "ALL"

GoldKey = tuple[str, str, int, int, int]


@dataclass(frozen=True)
class GoldLabel:
    rule_id: str
    file_id: str
    line: int
    first_pos: int
    second_pos: int
    label: str

    @property
    def key(self) -> GoldKey:
        return (self.rule_id, self.file_id, self.line, self.first_pos, self.second_pos)


@dataclass(frozen=True)
class RuleReport:
    rule_id: str
    results: int = 0
    tp: int = 0
    fp: int = 0
    unlabeled: int = 0

    @property
    def precision(self) -> Optional[float]:
        judged = self.tp + self.fp
        return self.tp / judged if judged else None


def _int_field(value: str, name: str, rowno: int, minimum: int) -> int:
    try:
        n = int(value)
    except ValueError:
        raise GoldFileError(f"{name} must be an integer, got {value!r}", rowno) from None
    if n < minimum:
        raise GoldFileError(f"{name} must be ≥ {minimum}, got {n}", rowno)
    return n


def parse_gold(serialized: str) -> list[GoldLabel]:
    """Parse a gold TSV file.  The header row is optional; blank lines are skipped."""
    labels = []
    seen: dict[GoldKey, int] = {}
    for rowno, raw in enumerate(serialized.lstrip("\ufeff").split("\n"), start=1):
        row = raw.rstrip("\r")
        if not row.strip():
            continue
        cells = row.split("\t")
        if tuple(cells) == GOLD_COLUMNS:
            continue
        if len(cells) != len(GOLD_COLUMNS):
            raise GoldFileError(f"expected {len(GOLD_COLUMNS)} tab-separated fields, got {len(cells)}", rowno)
        rule_id, file_id, line, first_pos, second_pos, label = cells
        if not rule_id or not file_id:
            raise GoldFileError("rule_id and file must be non-empty", rowno)
        if label not in LABELS:
            raise GoldFileError(f"label must be TP or FP, got {label!r}", rowno)
        gold = GoldLabel(
            rule_id,
            file_id,
            _int_field(line, "line", rowno, 1),
            _int_field(first_pos, "first_pos", rowno, 1),
            _int_field(second_pos, "second_pos", rowno, 0),
            label,
        )
        if gold.key in seen:
            raise GoldFileError(f"duplicate key (same as row {seen[gold.key]})", rowno)
        seen[gold.key] = rowno
        labels.append(gold)
    return labels


def render_gold(labels: Iterable[GoldLabel]) -> str:
    rows = ["\t".join(GOLD_COLUMNS)]
    rows += [
        "\t".join(str(v) for v in (g.rule_id, g.file_id, g.line, g.first_pos, g.second_pos, g.label))
        for g in labels
    ]
    return "\n".join(rows) + "\n"


def score(
    matches: Iterable[Match],
    gold: Iterable[GoldLabel],
    rule_ids: Optional[Iterable[str]] = None,
) -> tuple[list[RuleReport], list[GoldKey]]:
    """Tally matches per rule and return the reports plus orphaned gold keys.

    `rule_ids` adds zero-count reports for rules that produced no match.
    Orphans are gold keys that no match refers to, usually a stale gold file.
    """
    by_key = {g.key: g.label for g in gold}
    counts: dict[str, list[int]] = {rid: [0, 0, 0, 0] for rid in rule_ids or ()}
    used: set[GoldKey] = set()
    for m in matches:
        c = counts.setdefault(m.rule_id, [0, 0, 0, 0])
        c[0] += 1
        label = by_key.get(m.key)
        if label is None:
            c[3] += 1
        else:
            used.add(m.key)
            c[1 if label == "TP" else 2] += 1
    reports = [RuleReport(rid, *counts[rid]) for rid in sorted(counts, key=rule_sort_key)]
    orphans = sorted(set(by_key) - used, key=lambda k: (rule_sort_key(k[0]), *k[1:]))
    return reports, orphans


def aggregate(reports: Sequence[RuleReport]) -> RuleReport:
    return RuleReport(
        AGGREGATE_ID,
        sum(r.results for r in reports),
        sum(r.tp for r in reports),
        sum(r.fp for r in reports),
        sum(r.unlabeled for r in reports),
    )


def _report_dict(r: RuleReport) -> dict:
    return {
        "rule_id": r.rule_id,
        "results": r.results,
        "tp": r.tp,
        "fp": r.fp,
        "unlabeled": r.unlabeled,
        "precision": r.precision,
    }


def render_report(reports: Sequence[RuleReport], fmt: str = "tsv") -> bytes:
    """Serialize reports sorted by rule id, followed by an ``ALL`` total row.

    TSV prints precision with four decimals and ``null`` when undefined;
    JSON keeps full float precision.
    """
    ordered = sorted(reports, key=lambda r: rule_sort_key(r.rule_id))
    total = aggregate(ordered)
    if fmt == "json":
        payload = {"rules": [_report_dict(r) for r in ordered], "total": _report_dict(total)}
        return (json.dumps(payload, ensure_ascii=False, indent=2) + "\n").encode("utf-8")
    rows = ["\t".join(REPORT_COLUMNS)]
    for r in (*ordered, total):
        p = "null" if r.precision is None else f"{r.precision:.4f}"
        rows.append("\t".join(map(str, (r.rule_id, r.results, r.tp, r.fp, r.unlabeled, p))))
    return ("\n".join(rows) + "\n").encode("utf-8")


def parse_report(serialized: bytes | str) -> list[RuleReport]:
    """Read back per-rule reports (without the total row) from either format."""
    if isinstance(serialized, bytes):
        serialized = serialized.decode("utf-8")
    if serialized.lstrip().startswith("{"):
        data = json.loads(serialized)
        return [
            RuleReport(d["rule_id"], d["results"], d["tp"], d["fp"], d["unlabeled"])
            for d in data["rules"]
        ]
    out = []
    for row in serialized.splitlines()[1:]:
        cells = row.split("\t")
        if cells[0] != AGGREGATE_ID:
            out.append(RuleReport(cells[0], *map(int, cells[1:5])))
    return out
