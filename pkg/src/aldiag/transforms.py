"""Program transformations used as equivalence instrumentation.

Partial evaluation unfolds a literal's definition into the bodies that
mention it positively; trimming additionally drops the definition.  The
conservative-extension check and the splitting utilities verify, by full
enumeration at desk scale, that a transformed program says the same thing
about the literals both programs share.

Partial evaluation of a literal occurring in its own definition bodies is
outside the supported fragment; callers should unfold non-recursive
literals only (naf occurrences are never rewritten).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .logic import (
    CardinalityBound,
    Choice,
    Lit,
    Program,
    Rule,
    answer_set_key,
    enumerate_answer_sets,
    format_literal,
)


def _require_basic(program: Program) -> None:
    for r in program.rules:
        if isinstance(r.head, (Choice, CardinalityBound)):
            raise ValueError("transformations operate on basic programs")


def definition_of(program: Program, q: Lit) -> tuple[Rule, ...]:
    """The rules of the program with q as their head."""
    return tuple(r for r in program.rules if r.head == q)


def partial_eval(program: Program, q: Lit) -> Program:
    """Replace every positive body occurrence of q by the bodies defining it."""
    _require_basic(program)
    definition = definition_of(program, q)
    out: list[Rule] = []
    for r in program.rules:
        if q not in r.pos:
            out.append(r)
            continue
        rest = r.pos - {q}
        for d in definition:
            out.append(Rule(r.head, rest | d.pos, r.naf | d.naf))
    return Program(tuple(out), program.signature)


def extended_partial_eval(program: Program, q_seq: Sequence[Lit]) -> Program:
    """e(P, q1..qn): unfold the last literal first, then recurse on the rest."""
    if not q_seq:
        return program
    return extended_partial_eval(partial_eval(program, q_seq[-1]), q_seq[:-1])


def trim(program: Program, q_seq: Sequence[Lit]) -> Program:
    """Extended partial evaluation followed by dropping the q definitions."""
    evaluated = extended_partial_eval(program, q_seq)
    qs = set(q_seq)
    return Program(
        tuple(r for r in evaluated.rules if r.head not in qs), program.signature
    )


@dataclass(frozen=True)
class ExtensionReport:
    holds: bool
    witness: frozenset[Lit] | None
    detail: str


def check_conservative_extension(
    big: Program, small: Program, q: Iterable[Lit], engine: str = "search"
) -> ExtensionReport:
    """Is ``big`` a strong conservative extension of ``small`` w.r.t. q?

    Verified in both directions by enumeration: every answer set of the
    big program must restrict (modulo q) to one of the small program, and
    every answer set of the small program must extend to one.
    """
    qs = frozenset(q)
    small_lits = small.literals()
    big_lits = big.literals()
    if not small_lits <= big_lits:
        raise ValueError("lit(small) must be contained in lit(big)")
    big_sets = enumerate_answer_sets(big, engine=engine)
    small_sets = set(enumerate_answer_sets(small, engine=engine))
    restricted = set()
    for a in big_sets:
        r = a - qs
        restricted.add(r)
        if r not in small_sets:
            return ExtensionReport(
                False, a, "answer set does not restrict to the smaller program"
            )
    for a in small_sets:
        if a not in restricted:
            return ExtensionReport(
                False, a, "answer set of the smaller program has no extension"
            )
    return ExtensionReport(True, None, "verified on %d answer sets" % len(big_sets))


# -- splitting ---------------------------------------------------------------


class SplitError(ValueError):
    pass


def is_splitting_set(program: Program, s: Iterable[Lit]) -> Rule | None:
    """None when s splits the program; otherwise the offending rule."""
    ss = frozenset(s)
    for r in program.rules:
        if isinstance(r.head, Lit) and r.head in ss:
            if not set(r.literals()) <= ss:
                return r
    return None


def split(program: Program, s: Iterable[Lit]) -> tuple[Program, Program]:
    """Partition into the bottom (rules inside s) and the top (the rest)."""
    _require_basic(program)
    ss = frozenset(s)
    offender = is_splitting_set(program, ss)
    if offender is not None:
        from .logic import format_rule

        raise SplitError("not a splitting set; offending rule: %s" % format_rule(offender))
    bottom, top = [], []
    for r in program.rules:
        if set(r.literals()) <= ss:
            bottom.append(r)
        else:
            top.append(r)
    return Program(tuple(bottom), program.signature), Program(tuple(top), program.signature)


def evaluate_top(top: Program, s: Iterable[Lit], x: Iterable[Lit]) -> Program:
    """e_S(top, X): partially evaluate the top w.r.t. a bottom answer set."""
    ss = frozenset(s)
    xs = frozenset(x)
    out = []
    for r in top.rules:
        if any(l in ss and l not in xs for l in r.pos):
            continue
        if any(l in ss and l in xs for l in r.naf):
            continue
        out.append(
            Rule(
                r.head,
                frozenset(l for l in r.pos if l not in ss),
                frozenset(l for l in r.naf if l not in ss),
            )
        )
    return Program(tuple(out), top.signature)


def solve_by_splitting(
    program: Program, s: Iterable[Lit], engine: str = "search"
) -> list[frozenset[Lit]]:
    """Answer sets via bottom-then-top recomposition (the splitting property)."""
    ss = frozenset(s)
    bottom, top = split(program, ss)
    out = []
    for x in enumerate_answer_sets(bottom, engine=engine):
        for y in enumerate_answer_sets(evaluate_top(top, ss, x), engine=engine):
            out.append(x | y)
    out.sort(key=answer_set_key)
    return out


# -- reporting ----------------------------------------------------------------


@dataclass(frozen=True)
class TransformReport:
    operation: str
    input_program: Program
    output_program: Program
    transformed: tuple[Lit, ...]
    equivalent: bool
    detail: str

    def render(self) -> str:
        from .logic import format_program

        lines = [
            "operation=%s" % self.operation,
            "literals=%s" % ",".join(format_literal(l) for l in self.transformed),
            "equivalent=%s" % ("true" if self.equivalent else "false"),
            "detail=%s" % self.detail,
            "-- output --",
            format_program(self.output_program).rstrip("\n"),
        ]
        return "\n".join(lines)


def run_partial_eval(program: Program, q_seq: Sequence[Lit], engine: str = "search") -> TransformReport:
    out = extended_partial_eval(program, q_seq)
    same = enumerate_answer_sets(program, engine=engine) == enumerate_answer_sets(
        out, engine=engine
    )
    return TransformReport(
        "partial_eval", program, out, tuple(q_seq), same,
        "answer sets preserved" if same else "answer sets differ",
    )


def run_trim(program: Program, q_seq: Sequence[Lit], engine: str = "search") -> TransformReport:
    out = trim(program, q_seq)
    side_condition = not (frozenset(q_seq) & out.literals())
    if side_condition:
        report = check_conservative_extension(program, out, program.literals() - out.literals(), engine=engine)
        ok, detail = report.holds, report.detail
    else:
        ok, detail = False, "side condition failed: trimmed literals survive"
    return TransformReport("trim", program, out, tuple(q_seq), ok, detail)
