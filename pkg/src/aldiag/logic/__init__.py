"""Ground logic programs under the answer-set semantics."""

from .grounder import GroundingError, ground
from .solver import (
    BruteForceCapError,
    enumerate_answer_sets,
    expand_extended_rules,
    has_answer_set,
    is_answer_set,
    reduct,
)
from .syntax import (
    AnswerSet,
    Atom,
    CardinalityBound,
    Choice,
    Guard,
    Lit,
    Program,
    Rule,
    SchematicRule,
    Signature,
    answer_set_key,
    atom,
    constraint,
    fact,
    is_consistent,
    pos,
    rule,
    sneg,
    validate_program,
)
from .text import (
    ParseError,
    format_answer_set,
    format_literal,
    format_program,
    format_rule,
    parse_literal,
    parse_program,
    parse_rules,
)

__all__ = [
    "AnswerSet",
    "Atom",
    "BruteForceCapError",
    "CardinalityBound",
    "Choice",
    "GroundingError",
    "Guard",
    "Lit",
    "ParseError",
    "Program",
    "Rule",
    "SchematicRule",
    "Signature",
    "answer_set_key",
    "atom",
    "constraint",
    "enumerate_answer_sets",
    "expand_extended_rules",
    "fact",
    "format_answer_set",
    "format_literal",
    "format_program",
    "format_rule",
    "ground",
    "has_answer_set",
    "is_answer_set",
    "is_consistent",
    "parse_literal",
    "parse_program",
    "parse_rules",
    "pos",
    "reduct",
    "rule",
    "sneg",
    "validate_program",
]
