"""Command-line interface: ``surzhyk {match,evaluate,rules,tokenize}``.

Data goes to standard output, diagnostics to standard error.  Exit codes:
0 success, 2 usage error, 3 I/O or decode error, 4 rule-file error,
5 gold-file error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .errors import CorpusError, GoldFileError, MatchFileError, RuleFileError
from .evaluation import parse_gold, render_report, score
from .matching import parse_matches, render_matches, run, widen_context
from .rules import (
    BUILTIN_NAMES,
    RuleSet,
    builtin_ruleset,
    parse_ruleset,
    render_ruleset,
    validate_ruleset,
)
from .text import index_corpus

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_RULES = 4
EXIT_GOLD = 5

PROG = "surzhyk"


class _Fail(Exception):
    def __init__(self, code: int, message: str) -> None:
        self.code = code
        super().__init__(message)


def _emit(text: str | bytes) -> None:
    data = text.encode("utf-8") if isinstance(text, str) else text
    out = sys.stdout
    if hasattr(out, "buffer"):
        out.flush()
        out.buffer.write(data)
        out.buffer.flush()
    else:
        out.write(data.decode("utf-8"))


def _warn(message: str) -> None:
    print(f"{PROG}: {message}", file=sys.stderr)


def _read_text(path: str, what: str) -> str:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise _Fail(EXIT_IO, f"cannot read {what} {path}: {exc.strerror or exc}") from exc
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise _Fail(EXIT_IO, f"{path} (byte offset {exc.start}): invalid UTF-8") from exc


def load_rules(spec: str, strict_paper: bool = False) -> RuleSet:
    """Resolve ``builtin:NAME`` or a path to a JSON rule file."""
    if spec.startswith("builtin:"):
        name = spec.split(":", 1)[1]
        if name not in BUILTIN_NAMES:
            raise _Fail(EXIT_RULES, f"unknown built-in rule set {name!r} (choose from {', '.join(BUILTIN_NAMES)})")
        return builtin_ruleset(name, strict_paper=strict_paper)
    if strict_paper:
        _warn("--strict-paper only affects built-in rule sets; ignored for " + spec)
    try:
        return parse_ruleset(_read_text(spec, "rule file"))
    except RuleFileError as exc:
        detail = "".join(f"\n  {v}" for v in exc.violations[1:])
        raise _Fail(EXIT_RULES, f"{spec}: {exc}{detail}") from exc


def _index(paths: Sequence[str], workers: int):
    try:
        return index_corpus(paths, workers=workers)
    except CorpusError as exc:
        raise _Fail(EXIT_IO, str(exc)) from exc


def cmd_match(args: argparse.Namespace) -> int:
    rs = load_rules(args.rules, args.strict_paper)
    idx = _index(args.paths, args.workers)
    matches = widen_context(run(rs, idx, workers=args.workers), idx, args.context)
    _emit(render_matches(matches, args.format))
    return EXIT_OK


def cmd_evaluate(args: argparse.Namespace) -> int:
    try:
        matches = parse_matches(_read_text(args.matches, "match file"))
    except MatchFileError as exc:
        raise _Fail(EXIT_IO, f"{args.matches}: {exc}") from exc
    gold_text = _read_text(args.gold, "gold file")
    try:
        gold = parse_gold(gold_text)
    except GoldFileError as exc:
        raise _Fail(EXIT_GOLD, f"{args.gold}: {exc}") from exc
    rule_ids = load_rules(args.rules).rule_ids() if args.rules else None
    reports, orphans = score(matches, gold, rule_ids)
    for key in orphans:
        _warn("orphan gold label (no matching output): " + "\t".join(map(str, key)))
    _emit(render_report(reports, args.format))
    return EXIT_OK


def _rules_tsv(rs: RuleSet) -> str:
    rows = ["id\ttype\tfirst\tsecond\tmax_distance\tconstraints"]
    for r in rs.pair_rules:
        cons = "; ".join(c.describe() for c in r.constraints)
        rows.append(f"{r.id}\tpair\t{r.first.describe()}\t{r.second.describe()}\t{r.max_distance}\t{cons}")
    for p in rs.prefix_rules:
        rows.append(f"{p.id}\tprefix\t{p.prefix}-\t\t\tlen > {p.min_char_len_exclusive}")
    return "\n".join(rows) + "\n"


def cmd_rules(args: argparse.Namespace) -> int:
    rs = load_rules(args.rules, args.strict_paper)
    problems = validate_ruleset(rs)
    if problems:
        raise _Fail(EXIT_RULES, "invalid rule set:\n  " + "\n  ".join(problems))
    _emit(render_ruleset(rs) if args.format == "json" else _rules_tsv(rs))
    return EXIT_OK


def cmd_tokenize(args: argparse.Namespace) -> int:
    idx = _index(args.paths, args.workers)
    rows = ["file\tline\tposition\tword"]
    rows += [f"{t.file_id}\t{t.line}\t{t.position}\t{t.surface}" for t in idx.tokens()]
    _emit("\n".join(rows) + "\n")
    return EXIT_OK


def _non_negative(value: str) -> int:
    n = int(value)
    if n < 0:
        raise argparse.ArgumentTypeError("must be ≥ 0")
    return n


def _positive(value: str) -> int:
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError("must be ≥ 1")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=PROG, description="Detect Surzhyk verb patterns in plain-text corpora."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def rules_opt(p: argparse.ArgumentParser, default: Optional[str]) -> None:
        p.add_argument(
            "--rules",
            default=default,
            metavar="builtin:NAME|PATH",
            help=f"built-in set ({', '.join(BUILTIN_NAMES)}) or JSON rule file"
            + (f" (default: {default})" if default else ""),
        )

    def workers_opt(p: argparse.ArgumentParser) -> None:
        p.add_argument("--workers", type=_positive, default=1, help="worker processes (default: 1)")

    p = sub.add_parser("match", help="apply rules to corpus files and print matches")
    p.add_argument("paths", nargs="+", help="corpus files or directories of *.txt files")
    rules_opt(p, "builtin:all")
    p.add_argument("--format", choices=("tsv", "json"), default="tsv")
    p.add_argument("--strict-paper", action="store_true",
                   help="use word-final ми/самі anchors as in the original tables")
    p.add_argument("--context", type=_non_negative, default=0, metavar="N",
                   help="include N neighbouring lines on each side in the context column")
    workers_opt(p)
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("evaluate", help="score a match file against gold TP/FP labels")
    p.add_argument("matches", help="output of `match` (TSV or JSON)")
    p.add_argument("gold", help="gold label TSV")
    p.add_argument("--format", choices=("tsv", "json"), default="tsv")
    rules_opt(p, None)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("rules", help="list or lint a rule set")
    rules_opt(p, "builtin:all")
    p.add_argument("--format", choices=("tsv", "json"), default="tsv")
    p.add_argument("--strict-paper", action="store_true")
    p.set_defaults(func=cmd_rules)

    p = sub.add_parser("tokenize", help="print the token stream of corpus files")
    p.add_argument("paths", nargs="+")
    workers_opt(p)
    p.set_defaults(func=cmd_tokenize)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _Fail as exc:
        _warn(f"error: {exc}")
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
