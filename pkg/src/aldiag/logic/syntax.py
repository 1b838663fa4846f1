"""Syntax of ground logic programs: literals, rules, signatures, programs.

Rules carry a head that is one of

* a :class:`Lit` (normal rule),
* ``None`` (falsum; the rule is an integrity constraint),
* a :class:`Choice` (subset choice over guarded atoms, optionally bounded),
* a :class:`CardinalityBound` (a count-based integrity constraint).

Choice rules are compiled away by the solver's ``expand_extended_rules``;
cardinality bounds are evaluated semantically during answer-set checking.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Union

from ..terms import STerm, Term, Var, format_term, is_ground, term_key


@dataclass(frozen=True)
class Atom:
    pred: str
    args: tuple[STerm, ...] = ()

    def key(self):
        return (self.pred, len(self.args), tuple(term_key(a) for a in self.args))

    def __repr__(self) -> str:
        if not self.args:
            return self.pred
        return "%s(%s)" % (self.pred, ",".join(format_term(a) for a in self.args))


@dataclass(frozen=True)
class Lit:
    """An atom or its strong (classical) negation."""

    atom: Atom
    positive: bool = True

    def __neg__(self) -> "Lit":
        return Lit(self.atom, not self.positive)

    @property
    def complement(self) -> "Lit":
        return Lit(self.atom, not self.positive)

    def key(self):
        return (self.atom.key(), 0 if self.positive else 1)

    def __repr__(self) -> str:
        return repr(self.atom) if self.positive else "-%s" % repr(self.atom)


def atom(pred: str, *args: STerm) -> Atom:
    return Atom(pred, tuple(args))


def pos(pred: str, *args: STerm) -> Lit:
    return Lit(Atom(pred, tuple(args)))


def sneg(pred: str, *args: STerm) -> Lit:
    return Lit(Atom(pred, tuple(args)), False)


@dataclass(frozen=True)
class Choice:
    """``lower { a1 : g1; ...; ak : gk } upper`` — choose a guarded subset."""

    elements: tuple[tuple[Atom, Optional[Lit]], ...]
    lower: int = 0
    upper: int | None = None

    def __post_init__(self):
        if self.lower < 0 or (self.upper is not None and self.upper < self.lower):
            raise ValueError("choice bounds must satisfy 0 <= lower <= upper")


@dataclass(frozen=True)
class CardinalityBound:
    """Constraint on how many elements (conjunctions of literals) may hold.

    Violated by a literal set X, when the rule body holds, unless
    ``lower <= |{e : e subset of X}| <= upper`` (absent bounds do not bind).
    ``:- k {S}`` is expressed as ``CardinalityBound(upper=k - 1, ...)``.
    """

    elements: tuple[frozenset[Lit], ...]
    lower: int | None = None
    upper: int | None = None

    def count(self, x: frozenset[Lit]) -> int:
        return sum(1 for e in self.elements if e <= x)

    def violated_by(self, x: frozenset[Lit]) -> bool:
        n = self.count(x)
        if self.lower is not None and n < self.lower:
            return True
        if self.upper is not None and n > self.upper:
            return True
        return False


Head = Union[Lit, Choice, CardinalityBound, None]

# Reserved predicate prefix for the fresh strong-negative companions that
# choice-rule expansion introduces; hidden from reported answer sets.
UNCHOSEN_PREFIX = "unchosen_"


def companion(a: Atom) -> Lit:
    return Lit(Atom(UNCHOSEN_PREFIX + a.pred, a.args), False)


def is_hidden(l: Lit) -> bool:
    return l.atom.pred.startswith(UNCHOSEN_PREFIX)


@dataclass(frozen=True)
class Rule:
    head: Head
    pos: frozenset[Lit] = frozenset()
    naf: frozenset[Lit] = frozenset()

    @property
    def is_constraint(self) -> bool:
        return self.head is None

    def body_literals(self) -> Iterator[Lit]:
        yield from self.pos
        yield from self.naf

    def literals(self) -> Iterator[Lit]:
        """All literals occurring in the rule (head, guards, bodies)."""
        if isinstance(self.head, Lit):
            yield self.head
        elif isinstance(self.head, Choice):
            for a, g in self.head.elements:
                yield Lit(a)
                if g is not None:
                    yield g
        elif isinstance(self.head, CardinalityBound):
            for e in self.head.elements:
                yield from e
        yield from self.pos
        yield from self.naf


def rule(head: Head, pos: Iterable[Lit] = (), naf: Iterable[Lit] = ()) -> Rule:
    return Rule(head, frozenset(pos), frozenset(naf))


def fact(lit: Lit) -> Rule:
    return Rule(lit)


def constraint(pos: Iterable[Lit] = (), naf: Iterable[Lit] = ()) -> Rule:
    return Rule(None, frozenset(pos), frozenset(naf))


class Signature:
    """Sort declarations (sort name -> ground terms) and optional predicate arities."""

    def __init__(
        self,
        sorts: Mapping[str, Iterable[Term]] | None = None,
        preds: Mapping[str, int] | None = None,
    ):
        self._sorts = {
            name: tuple(sorted(values, key=term_key))
            for name, values in (sorts or {}).items()
        }
        self.preds = dict(preds or {})

    def sort(self, name: str) -> tuple[Term, ...]:
        return self._sorts[name]

    def has_sort(self, name: str) -> bool:
        return name in self._sorts

    @property
    def sorts(self) -> dict[str, tuple[Term, ...]]:
        return dict(self._sorts)

    def merged(self, other: "Signature") -> "Signature":
        sorts = dict(self._sorts)
        sorts.update(other._sorts)
        preds = dict(self.preds)
        preds.update(other.preds)
        return Signature(sorts, preds)


@dataclass(frozen=True)
class Guard:
    """Arithmetic guard over integer-valued variables: lt, le, eq, succ."""

    op: str
    args: tuple[Var | int, ...]

    _OPS = {
        "lt": lambda a, b: a < b,
        "le": lambda a, b: a <= b,
        "eq": lambda a, b: a == b,
        "succ": lambda a, b: b == a + 1,
    }

    def __post_init__(self):
        if self.op not in self._OPS:
            raise ValueError("unknown guard op %r" % self.op)

    def holds(self, binding: Mapping[Var, Term]) -> bool:
        vals = []
        for a in self.args:
            v = binding[a] if isinstance(a, Var) else a
            if not isinstance(v, int):
                return False
            vals.append(v)
        return self._OPS[self.op](*vals)

    def vars(self) -> Iterator[Var]:
        for a in self.args:
            if isinstance(a, Var):
                yield a


@dataclass(frozen=True)
class SchematicRule:
    """A rule whose terms may contain sorted variables, plus arithmetic guards.

    Body literal order is kept as written; it fixes the deterministic
    variable-enumeration order used by the grounder.
    """

    head: Head
    pos: tuple[Lit, ...] = ()
    naf: tuple[Lit, ...] = ()
    guards: tuple[Guard, ...] = ()
    label: str | None = None

    def literals(self) -> Iterator[Lit]:
        if isinstance(self.head, Lit):
            yield self.head
        elif isinstance(self.head, Choice):
            for a, g in self.head.elements:
                yield Lit(a)
                if g is not None:
                    yield g
        elif isinstance(self.head, CardinalityBound):
            for e in self.head.elements:
                yield from e
        yield from self.pos
        yield from self.naf


@dataclass(frozen=True)
class Program:
    """A ground program: rules in a fixed, deterministic order."""

    rules: tuple[Rule, ...]
    signature: Signature | None = field(default=None, compare=False, hash=False)

    def __iter__(self) -> Iterator[Rule]:
        return iter(self.rules)

    def __len__(self) -> int:
        return len(self.rules)

    def literals(self) -> frozenset[Lit]:
        """lit(P): atoms occurring in P together with their strong negations."""
        out = set()
        for r in self.rules:
            for l in r.literals():
                out.add(l)
                out.add(l.complement)
        return frozenset(out)

    def head_literals(self) -> frozenset[Lit]:
        out = set()
        for r in self.rules:
            if isinstance(r.head, Lit):
                out.add(r.head)
            elif isinstance(r.head, Choice):
                for a, _ in r.head.elements:
                    out.add(Lit(a))
                    out.add(companion(a))
        return frozenset(out)

    def extended(self, extra: Sequence[Rule]) -> "Program":
        return Program(self.rules + tuple(extra), self.signature)


AnswerSet = frozenset  # of Lit


def answer_set_key(x: frozenset[Lit]):
    return tuple(sorted(l.key() for l in x))


def is_consistent(x: Iterable[Lit]) -> bool:
    xs = set(x)
    return not any(l.complement in xs for l in xs)


def validate_ground(r: Rule) -> None:
    for l in r.literals():
        for t in l.atom.args:
            if not is_ground(t):
                raise ValueError("non-ground literal %r in ground rule" % (l,))


def validate_program(p: Program) -> None:
    """Every literal ground; predicate arities consistent and, when the
    signature declares them, as declared."""
    seen: dict[str, int] = {}
    declared = p.signature.preds if p.signature is not None else {}
    for r in p.rules:
        validate_ground(r)
        for l in r.literals():
            arity = len(l.atom.args)
            prev = seen.setdefault(l.atom.pred, arity)
            if prev != arity:
                raise ValueError(
                    "predicate %s used with arities %d and %d" % (l.atom.pred, prev, arity)
                )
            if l.atom.pred in declared and declared[l.atom.pred] != arity:
                raise ValueError(
                    "predicate %s declared with arity %d, used with %d"
                    % (l.atom.pred, declared[l.atom.pred], arity)
                )
