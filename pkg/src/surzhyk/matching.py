"""Apply rule sets to a corpus index.

Matching is line-scoped: a pair rule only joins tokens of the same
``(file_id, line)`` group, with the second token strictly after the first and
at most ``max_distance`` positions away.  Every qualifying pair is reported;
the same token pair matched by two rules gives two records.
"""

from __future__ import annotations

import json
from bisect import bisect_right
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, replace
from typing import Iterable, Optional, Sequence

from .errors import MatchFileError
from .rules import (
    AnchorMode,
    ConstraintKind,
    PairRule,
    PatternAnchor,
    PrefixRule,
    RuleSet,
    Target,
    rule_sort_key,
)
from .text import CorpusIndex, Token


@dataclass(frozen=True)
class Match:
    rule_id: str
    file_id: str
    line: int
    first_pos: int
    first_word: str
    second_pos: Optional[int] = None
    second_word: Optional[str] = None
    distance: Optional[int] = None
    context: str = ""

    @property
    def key(self) -> tuple[str, str, int, int, int]:
        """Join key against gold labels; prefix matches use second_pos 0."""
        return (self.rule_id, self.file_id, self.line, self.first_pos, self.second_pos or 0)


def sort_key(m: Match) -> tuple:
    return (m.file_id, m.line, m.first_pos, m.second_pos or 0, rule_sort_key(m.rule_id))


def anchor_matches(anchor: PatternAnchor, token: Token) -> bool:
    if anchor.mode is AnchorMode.EXACT_WORD:
        return token.surface == anchor.text
    if anchor.mode is AnchorMode.ENDS_WITH:
        return token.surface.endswith(anchor.text)
    return token.surface.startswith(anchor.text)


def constraints_hold(rule: PairRule, first: Token, second: Token) -> bool:
    for c in rule.constraints:
        tok = first if c.target is Target.FIRST else second
        if c.kind is ConstraintKind.EXACT_EQUALS:
            if tok.surface != c.value:
                return False
        elif not tok.char_len > c.value:
            return False
    return True


def match_pair_rule(rule: PairRule, line_tokens: Sequence[Token], context: str = "") -> list[Match]:
    positions = [t.position for t in line_tokens]
    out = []
    for i, t1 in enumerate(line_tokens):
        if not anchor_matches(rule.first, t1):
            continue
        stop = bisect_right(positions, t1.position + rule.max_distance)
        for t2 in line_tokens[i + 1 : stop]:
            if t2.position <= t1.position:
                continue
            if anchor_matches(rule.second, t2) and constraints_hold(rule, t1, t2):
                out.append(
                    Match(
                        rule.id, t1.file_id, t1.line,
                        t1.position, t1.surface,
                        t2.position, t2.surface,
                        t2.position - t1.position, context,
                    )
                )
    return out


def match_prefix_rule(rule: PrefixRule, line_tokens: Sequence[Token], context: str = "") -> list[Match]:
    return [
        Match(rule.id, t.file_id, t.line, t.position, t.surface, context=context)
        for t in line_tokens
        if t.surface.startswith(rule.prefix) and t.char_len > rule.min_char_len_exclusive
    ]


def _match_groups(rs: RuleSet, groups: Sequence[tuple[Sequence[Token], str]]) -> list[Match]:
    out = []
    for tokens, text in groups:
        for rule in rs.pair_rules:
            out += match_pair_rule(rule, tokens, text)
        for prule in rs.prefix_rules:
            out += match_prefix_rule(prule, tokens, text)
    return out


def run(rs: RuleSet, idx: CorpusIndex, workers: int = 1) -> list[Match]:
    """Apply every rule of `rs` to every line of `idx`, sorted by coordinates.

    Order: file id, line, first position, second position (0 for prefix
    matches), rule id.  The result does not depend on `workers`.
    """
    by_file: dict[str, list[tuple[Sequence[Token], str]]] = {}
    for (file_id, line), tokens in idx:
        by_file.setdefault(file_id, []).append((tokens, idx.line_text(file_id, line)))
    if workers > 1 and len(by_file) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_match_groups, [rs] * len(by_file), by_file.values()))
    else:
        chunks = [_match_groups(rs, groups) for groups in by_file.values()]
    return sorted((m for chunk in chunks for m in chunk), key=sort_key)


def widen_context(matches: Iterable[Match], idx: CorpusIndex, n: int, sep: str = " / ") -> list[Match]:
    """Replace each match's context with its line plus `n` lines either side."""
    if n <= 0:
        return list(matches)
    out = []
    for m in matches:
        lo = max(1, m.line - n)
        hi = min(idx.line_count(m.file_id), m.line + n)
        text = sep.join(idx.line_text(m.file_id, i) for i in range(lo, hi + 1))
        out.append(replace(m, context=text))
    return out


# -- serialization -------------------------------------------------------------

MATCH_COLUMNS = (
    "rule_id", "file", "line", "first_pos", "first_word",
    "second_pos", "second_word", "distance", "context",
)


def _tsv_field(value: object) -> str:
    if value is None:
        return ""
    # tabs and newlines would break the row structure
    return " ".join(str(value).split("\t")).replace("\n", " ")


def render_matches(matches: Iterable[Match], fmt: str = "tsv") -> str:
    if fmt == "json":
        rows = []
        for m in matches:
            d = asdict(m)
            d["file"] = d.pop("file_id")
            rows.append({k: d[k] for k in MATCH_COLUMNS})
        return json.dumps(rows, ensure_ascii=False, indent=2) + "\n"
    lines = ["\t".join(MATCH_COLUMNS)]
    for m in matches:
        lines.append(
            "\t".join(
                _tsv_field(v)
                for v in (
                    m.rule_id, m.file_id, m.line, m.first_pos, m.first_word,
                    m.second_pos, m.second_word, m.distance, m.context,
                )
            )
        )
    return "\n".join(lines) + "\n"


def _opt_int(value: str) -> Optional[int]:
    return int(value) if value != "" else None


def parse_matches(serialized: str) -> list[Match]:
    """Read matches written by :func:`render_matches` (TSV or JSON)."""
    text = serialized.lstrip("\ufeff")
    if text.lstrip().startswith("["):
        try:
            rows = json.loads(text)
            return [
                Match(
                    r["rule_id"], r["file"], int(r["line"]), int(r["first_pos"]), r["first_word"],
                    r.get("second_pos"), r.get("second_word"), r.get("distance"), r.get("context", ""),
                )
                for r in rows
            ]
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise MatchFileError(f"malformed JSON match file: {exc}") from exc

    rows = [(n, ln.rstrip("\r")) for n, ln in enumerate(text.split("\n"), start=1) if ln.strip()]
    if not rows:
        return []
    if tuple(rows[0][1].split("\t")) != MATCH_COLUMNS:
        raise MatchFileError("match file header must be: " + "\\t".join(MATCH_COLUMNS))
    out = []
    for rowno, ln in rows[1:]:
        cells = ln.split("\t")
        if len(cells) != len(MATCH_COLUMNS):
            raise MatchFileError(f"row {rowno}: expected {len(MATCH_COLUMNS)} fields, got {len(cells)}")
        try:
            out.append(
                Match(
                    cells[0], cells[1], int(cells[2]), int(cells[3]), cells[4],
                    _opt_int(cells[5]), cells[6] or None, _opt_int(cells[7]), cells[8],
                )
            )
        except ValueError as exc:
            raise MatchFileError(f"row {rowno}: {exc}") from exc
    return out
