"""Exhaustive reference matcher used to cross-check :func:`surzhyk.matching.run`.

It shares no matching code with the engine and works relationally: for each
rule, filter the flat token table into first-side and second-side tables,
inner-join them on ``(file_id, line)`` and keep the joined rows whose
position difference lies in ``(0, max_distance]``.  Anchors and constraints
are re-derived from slicing; every constraint inspects a single token, so it
is applied while filtering the side it targets.
"""

from __future__ import annotations

from .matching import Match
from .rules import PairRule, RuleSet, rule_sort_key
from .text import CorpusIndex


def _anchor(mode: str, text: str, word: str) -> bool:
    n = len(text)
    if mode == "exact_word":
        return word == text
    if mode == "ends_with":
        return len(word) >= n and word[len(word) - n :] == text
    return len(word) >= n and word[:n] == text


def _side_ok(rule: PairRule, side: str, word: str) -> bool:
    anchor = rule.first if side == "first" else rule.second
    ok = _anchor(anchor.mode.value, anchor.text, word)
    for c in rule.constraints:
        if c.target.value != side:
            continue
        if c.kind.value == "exact_equals":
            ok = ok and word == c.value
        else:
            ok = ok and len(word) > c.value
    return ok


def brute_force_oracle(rs: RuleSet, idx: CorpusIndex) -> list[Match]:
    table = [(t.file_id, t.line, t.position, t.surface) for t in idx.tokens()]

    def context(file_id: str, line: int) -> str:
        return idx.documents[file_id][line - 1]

    found = []
    for rule in rs.pair_rules:
        firsts = [row for row in table if _side_ok(rule, "first", row[3])]
        seconds: dict[tuple[str, int], list] = {}
        for row in table:
            if _side_ok(rule, "second", row[3]):
                seconds.setdefault((row[0], row[1]), []).append(row)
        for f, line, p1, w1 in firsts:
            for _, _, p2, w2 in seconds.get((f, line), ()):
                if 0 < p2 - p1 <= rule.max_distance:
                    found.append(Match(rule.id, f, line, p1, w1, p2, w2, p2 - p1, context(f, line)))
    for prule in rs.prefix_rules:
        for f, line, p, w in table:
            if _anchor("starts_with", prule.prefix, w) and len(w) > prule.min_char_len_exclusive:
                found.append(Match(prule.id, f, line, p, w, context=context(f, line)))

    found.sort(key=lambda m: (m.file_id, m.line, m.first_pos, m.second_pos or 0, rule_sort_key(m.rule_id)))
    return found
