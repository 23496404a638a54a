"""Rule data model, built-in rule sets and the JSON rule-file format.

A pair rule fires when a token matching the ``first`` anchor is followed,
within ``max_distance`` positions on the same line, by a token whose surface
ends with the ``second`` text.  A prefix rule fires on a single token that
starts with a given prefix and is longer than a minimum length.

Built-in ids: ``G1``-``G4`` (general first-person-plural rules), ``S1``-``S16``
(specific rules) and ``P1`` (the ``под-`` prefix rule).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, replace
from enum import Enum
from typing import Any, Union

from .errors import RuleFileError
from .text import normalize


class AnchorMode(str, Enum):
    EXACT_WORD = "exact_word"
    ENDS_WITH = "ends_with"
    STARTS_WITH = "starts_with"


class Target(str, Enum):
    FIRST = "first"
    SECOND = "second"


class ConstraintKind(str, Enum):
    EXACT_EQUALS = "exact_equals"
    CHAR_LEN_GREATER_THAN = "char_len_greater_than"


class RuleGroup(str, Enum):
    GENERAL = "general"
    SPECIFIC = "specific"
    USER = "user"


@dataclass(frozen=True)
class PatternAnchor:
    mode: AnchorMode
    text: str

    def describe(self) -> str:
        if self.mode is AnchorMode.ENDS_WITH:
            return f"-{self.text}"
        if self.mode is AnchorMode.STARTS_WITH:
            return f"{self.text}-"
        return self.text


@dataclass(frozen=True)
class Constraint:
    """Post-filter on one side of a pair match.

    ``value`` is the word to compare with for ``exact_equals`` and the
    exclusive character-count bound for ``char_len_greater_than``.
    """

    target: Target
    kind: ConstraintKind
    value: Union[str, int]

    def describe(self) -> str:
        op = "=" if self.kind is ConstraintKind.EXACT_EQUALS else "len >"
        return f"{self.target.value} {op} {self.value}"


@dataclass(frozen=True)
class PairRule:
    id: str
    group: RuleGroup
    first: PatternAnchor
    second: PatternAnchor
    max_distance: int
    constraints: tuple[Constraint, ...] = ()


@dataclass(frozen=True)
class PrefixRule:
    id: str
    prefix: str
    min_char_len_exclusive: int


@dataclass(frozen=True)
class RuleSet:
    name: str
    pair_rules: tuple[PairRule, ...] = ()
    prefix_rules: tuple[PrefixRule, ...] = ()

    def rule_ids(self) -> list[str]:
        return [r.id for r in self.pair_rules] + [r.id for r in self.prefix_rules]

    def __len__(self) -> int:
        return len(self.pair_rules) + len(self.prefix_rules)


Rule = Union[PairRule, PrefixRule]


def rule_sort_key(rule_id: str) -> tuple:
    """Order ids naturally, so ``S2`` sorts before ``S10``."""
    return tuple(
        (0, int(part), "") if part.isdigit() else (1, 0, part)
        for part in re.findall(r"\d+|\D+", rule_id)
    )


# -- validation --------------------------------------------------------------


def _text_violations(label: str, text: Any) -> list[str]:
    if not isinstance(text, str) or not text:
        return [f"{label} must be a non-empty string"]
    out = []
    if any(ch.isspace() for ch in text):
        out.append(f"{label} must not contain whitespace")
    if normalize(text) != text:
        out.append(f"{label} must be normalized (NFC, lowercase)")
    return out


def _positive_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool) and value >= 1


def validate_rule(rule: Rule) -> list[str]:
    """Return every violated invariant of `rule`; empty when it is valid."""
    out: list[str] = []
    if not isinstance(rule.id, str) or not rule.id:
        out.append("id must be a non-empty string")
    if isinstance(rule, PrefixRule):
        out += _text_violations("prefix", rule.prefix)
        if not _positive_int(rule.min_char_len_exclusive):
            out.append("min_char_len_exclusive ≥ 1")
        elif isinstance(rule.prefix, str) and rule.min_char_len_exclusive < len(rule.prefix):
            out.append("min_char_len_exclusive ≥ length(prefix)")
        return out

    out += _text_violations("first.text", rule.first.text)
    out += _text_violations("second.text", rule.second.text)
    if rule.second.mode is not AnchorMode.ENDS_WITH:
        out.append("second pattern must be ends_with")
    if not _positive_int(rule.max_distance):
        out.append("max_distance ≥ 1")
    for c in rule.constraints:
        if c.kind is ConstraintKind.EXACT_EQUALS:
            out += _text_violations(f"{c.target.value} exact_equals value", c.value)
        elif not _positive_int(c.value):
            out.append(f"{c.target.value} char_len_greater_than value ≥ 1")
    return out


def validate_ruleset(rs: RuleSet) -> list[str]:
    out = []
    seen: set[str] = set()
    for rule in (*rs.pair_rules, *rs.prefix_rules):
        if rule.id in seen:
            out.append(f"duplicate rule id {rule.id!r}")
        seen.add(rule.id)
        out += [f"rule {rule.id!r}: {v}" for v in validate_rule(rule)]
    return out


# -- built-in rule sets ------------------------------------------------------

# Surzhyk first-person-plural endings: Russian -м after the Ukrainian thematic
# vowels of both conjugations.
ENDINGS = ("ем", "єм", "им", "їм")
ANCHOR_WORDS = ("ми", "самі")
MAX_DISTANCE = 3
# "ти" (pronoun) and "їм" (dative pronoun) are both two letters long
PRONOUN_LEN = 2

BUILTIN_NAMES = ("general", "specific", "prefix", "all")


def _word(text: str) -> PatternAnchor:
    return PatternAnchor(AnchorMode.EXACT_WORD, text)


def _end(text: str) -> PatternAnchor:
    return PatternAnchor(AnchorMode.ENDS_WITH, text)


def _longer(target: Target) -> Constraint:
    return Constraint(target, ConstraintKind.CHAR_LEN_GREATER_THAN, PRONOUN_LEN)


def _general_rules(strict_paper: bool) -> list[PairRule]:
    g = RuleGroup.GENERAL
    if strict_paper:
        mi = (_end("ми"), (Constraint(Target.FIRST, ConstraintKind.EXACT_EQUALS, "ми"),))
        sami = (_end("самі"), ())
    else:
        mi = (_word("ми"), ())
        sami = (_word("самі"), ())
    return [
        PairRule("G1", g, mi[0], _end("м"), MAX_DISTANCE, mi[1]),
        PairRule("G2", g, sami[0], _end("м"), MAX_DISTANCE, sami[1]),
        PairRule("G3", g, _end("м"), _end("ти"), MAX_DISTANCE, (_longer(Target.SECOND),)),
        PairRule("G4", g, _end("м"), _end("ть"), MAX_DISTANCE),
    ]


def _specific_rules(strict_paper: bool) -> list[PairRule]:
    g = RuleGroup.SPECIFIC
    make_anchor = _end if strict_paper else _word
    rules = []
    n = 0
    for word in ANCHOR_WORDS:
        for ending in ENDINGS:
            n += 1
            extra = (_longer(Target.SECOND),) if ending == "їм" else ()
            rules.append(PairRule(f"S{n}", g, make_anchor(word), _end(ending), MAX_DISTANCE, extra))
    for second in ("ти", "ть"):
        for ending in ENDINGS:
            n += 1
            extra = [_longer(Target.SECOND)] if second == "ти" else []
            if ending == "їм":
                extra.insert(0, _longer(Target.FIRST))
            rules.append(PairRule(f"S{n}", g, _end(ending), _end(second), MAX_DISTANCE, tuple(extra)))
    return rules


def _prefix_rules() -> list[PrefixRule]:
    # a bare "под" is the preposition; only longer words can carry the prefix
    return [PrefixRule("P1", "под", 3)]


def builtin_ruleset(name: str, strict_paper: bool = False) -> RuleSet:
    """Return one of the shipped rule sets: general, specific, prefix or all.

    With `strict_paper` the ``ми``/``самі`` anchors become word-final patterns,
    and only G1 keeps an exact-word filter on its first token.
    """
    if name not in BUILTIN_NAMES:
        raise ValueError(f"unknown built-in rule set {name!r}; expected one of {BUILTIN_NAMES}")
    pair: list[PairRule] = []
    prefix: list[PrefixRule] = []
    if name in ("general", "all"):
        pair += _general_rules(strict_paper)
    if name in ("specific", "all"):
        pair += _specific_rules(strict_paper)
    if name in ("prefix", "all"):
        prefix += _prefix_rules()
    return RuleSet(name, tuple(pair), tuple(prefix))


# -- JSON rule files -----------------------------------------------------------


def ruleset_to_dict(rs: RuleSet) -> dict[str, Any]:
    return {
        "name": rs.name,
        "pair_rules": [
            {
                "id": r.id,
                "group": r.group.value,
                "first": {"mode": r.first.mode.value, "text": r.first.text},
                "second": {"mode": r.second.mode.value, "text": r.second.text},
                "max_distance": r.max_distance,
                "constraints": [
                    {"target": c.target.value, "kind": c.kind.value, "value": c.value}
                    for c in r.constraints
                ],
            }
            for r in rs.pair_rules
        ],
        "prefix_rules": [
            {"id": r.id, "prefix": r.prefix, "min_char_len_exclusive": r.min_char_len_exclusive}
            for r in rs.prefix_rules
        ],
    }


def render_ruleset(rs: RuleSet) -> str:
    return json.dumps(ruleset_to_dict(rs), ensure_ascii=False, indent=2) + "\n"


class _Schema:
    """Field accessors that raise RuleFileError naming the rule and field."""

    def __init__(self, where: str) -> None:
        self.where = where

    def fail(self, msg: str) -> RuleFileError:
        return RuleFileError(f"{self.where}: {msg}")

    def obj(self, value: Any, label: str, required: set[str], optional: set[str] = frozenset()) -> dict:
        if not isinstance(value, dict):
            raise self.fail(f"{label} must be an object")
        unknown = sorted(set(value) - required - optional)
        if unknown:
            raise self.fail(f"{label}: unknown key(s) {', '.join(map(repr, unknown))}")
        missing = sorted(required - set(value))
        if missing:
            raise self.fail(f"{label}: missing key(s) {', '.join(map(repr, missing))}")
        return value

    def enum(self, cls: type[Enum], value: Any, label: str) -> Any:
        try:
            return cls(value)
        except ValueError:
            allowed = ", ".join(m.value for m in cls)
            raise self.fail(f"{label} must be one of {{{allowed}}}, got {value!r}") from None


def _parse_anchor(schema: _Schema, data: Any, label: str) -> PatternAnchor:
    data = schema.obj(data, label, {"mode", "text"})
    return PatternAnchor(schema.enum(AnchorMode, data["mode"], f"{label}.mode"), data["text"])


def _parse_pair(data: Any, index: int) -> PairRule:
    rid = data.get("id") if isinstance(data, dict) else None
    schema = _Schema(f"pair rule {rid!r}" if rid is not None else f"pair rule #{index + 1}")
    data = schema.obj(
        data, "rule", {"id", "first", "second", "max_distance"}, {"group", "constraints"}
    )
    constraints = []
    raw = data.get("constraints", [])
    if not isinstance(raw, list):
        raise schema.fail("constraints must be a list")
    for i, c in enumerate(raw):
        label = f"constraints[{i}]"
        c = schema.obj(c, label, {"target", "kind", "value"})
        constraints.append(
            Constraint(
                schema.enum(Target, c["target"], f"{label}.target"),
                schema.enum(ConstraintKind, c["kind"], f"{label}.kind"),
                c["value"],
            )
        )
    rule = PairRule(
        id=data["id"],
        group=schema.enum(RuleGroup, data.get("group", "user"), "group"),
        first=_parse_anchor(schema, data["first"], "first"),
        second=_parse_anchor(schema, data["second"], "second"),
        max_distance=data["max_distance"],
        constraints=tuple(constraints),
    )
    problems = validate_rule(rule)
    if problems:
        raise RuleFileError(f"{schema.where}: {problems[0]}", problems)
    return rule


def _parse_prefix(data: Any, index: int) -> PrefixRule:
    rid = data.get("id") if isinstance(data, dict) else None
    schema = _Schema(f"prefix rule {rid!r}" if rid is not None else f"prefix rule #{index + 1}")
    data = schema.obj(data, "rule", {"id", "prefix", "min_char_len_exclusive"})
    rule = PrefixRule(data["id"], data["prefix"], data["min_char_len_exclusive"])
    problems = validate_rule(rule)
    if problems:
        raise RuleFileError(f"{schema.where}: {problems[0]}", problems)
    return rule


def parse_ruleset(serialized: str) -> RuleSet:
    """Parse and validate a JSON rule file.

    Raises RuleFileError for JSON syntax errors (with line and column),
    schema violations (naming the rule and field) and duplicate ids.
    """
    try:
        data = json.loads(serialized)
    except json.JSONDecodeError as exc:
        raise RuleFileError(f"syntax error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    top = _Schema("rule file").obj(data, "top level", {"name"}, {"pair_rules", "prefix_rules"})
    if not isinstance(top["name"], str):
        raise RuleFileError("rule file: name must be a string")
    for key in ("pair_rules", "prefix_rules"):
        if not isinstance(top.get(key, []), list):
            raise RuleFileError(f"rule file: {key} must be a list")
    rs = RuleSet(
        top["name"],
        tuple(_parse_pair(r, i) for i, r in enumerate(top.get("pair_rules", []))),
        tuple(_parse_prefix(r, i) for i, r in enumerate(top.get("prefix_rules", []))),
    )
    ids = rs.rule_ids()
    dupes = sorted({i for i in ids if ids.count(i) > 1})
    if dupes:
        raise RuleFileError(f"duplicate rule id {dupes[0]!r}", [f"duplicate rule id {d!r}" for d in dupes])
    return rs


def merge(name: str, *sets: RuleSet) -> RuleSet:
    return RuleSet(
        name,
        tuple(r for s in sets for r in s.pair_rules),
        tuple(r for s in sets for r in s.prefix_rules),
    )


def with_rules(rs: RuleSet, *rules: Rule) -> RuleSet:
    pair = tuple(r for r in rules if isinstance(r, PairRule))
    prefix = tuple(r for r in rules if isinstance(r, PrefixRule))
    return replace(rs, pair_rules=rs.pair_rules + pair, prefix_rules=rs.prefix_rules + prefix)
