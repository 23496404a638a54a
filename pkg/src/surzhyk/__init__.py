"""Rule-based detection of Surzhyk verb patterns in tokenized corpora."""

__version__ = "0.1.0"

from .evaluation import GoldLabel, RuleReport, parse_gold, render_report, score
from .matching import Match, anchor_matches, match_pair_rule, match_prefix_rule, run
from .rules import (
    AnchorMode,
    Constraint,
    ConstraintKind,
    PairRule,
    PatternAnchor,
    PrefixRule,
    RuleGroup,
    RuleSet,
    Target,
    builtin_ruleset,
    parse_ruleset,
    render_ruleset,
    validate_rule,
)
from .text import CorpusIndex, Document, Token, index_corpus, normalize, tokenize

__all__ = [
    "AnchorMode", "Constraint", "ConstraintKind", "CorpusIndex", "Document",
    "GoldLabel", "Match", "PairRule", "PatternAnchor", "PrefixRule", "RuleGroup",
    "RuleReport", "RuleSet", "Target", "Token", "anchor_matches", "builtin_ruleset",
    "index_corpus", "match_pair_rule", "match_prefix_rule", "normalize",
    "parse_gold", "parse_ruleset", "render_report", "render_ruleset", "run",
    "score", "tokenize", "validate_rule",
]
