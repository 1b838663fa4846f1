"""Textual A-Prolog syntax.

One rule per statement, ``:-`` (or ``<-``) between head and body, ``not``
for default negation, ``-`` prefix for strong negation, ``.`` terminator,
``%`` comments.  Choice rules are written ``lo { a : g; ... } hi`` and the
count constraint ``:- k { l1, ..., ln }.`` rejects sets holding at least k
of the listed literals.  Variables (capitalized) range over every ground
term occurring in the parsed program; the canonical printer inverts the
parser on this fragment.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable

from ..terms import Func, STerm, Term, Var, format_term, subterms, term_key
from .grounder import ground
from .syntax import (
    Atom,
    CardinalityBound,
    Choice,
    Lit,
    Program,
    Rule,
    SchematicRule,
    Signature,
)

UNIVERSAL_SORT = "const"


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__("%s (line %d, column %d)" % (message, line, col))
        self.line = line
        self.col = col


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>%[^\n]*)
  | (?P<arrow>:-|<-|←)
  | (?P<int>-?\d+)
  | (?P<name>[a-z][A-Za-z0-9_]*)
  | (?P<var>[A-Z_][A-Za-z0-9_]*)
  | (?P<punct>[()\[\]{},;:.\-])
    """,
    re.VERBOSE,
)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    line, col = 1, 1
    i = 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        if m is None:
            raise ParseError("unexpected character %r" % text[i], line, col)
        kind = m.lastgroup or ""
        s = m.group(0)
        if kind not in ("ws", "comment"):
            toks.append(_Tok(kind, s, line, col))
        nl = s.count("\n")
        if nl:
            line += nl
            col = len(s) - s.rfind("\n")
        else:
            col += len(s)
        i = m.end()
    toks.append(_Tok("eof", "", line, col))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def next(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg: str):
        t = self.peek()
        raise ParseError(msg, t.line, t.col)

    def expect(self, text: str) -> _Tok:
        t = self.peek()
        if t.text != text:
            self.error("expected %r, found %r" % (text, t.text or "end of input"))
        return self.next()

    def at(self, text: str) -> bool:
        return self.peek().text == text

    # -- grammar -------------------------------------------------------

    def term(self) -> STerm:
        t = self.peek()
        if t.kind == "int":
            self.next()
            return int(t.text)
        if t.text == "-":  # negative fluent literal in term position
            self.next()
            inner = self.term()
            return Func("neg", (inner,))
        if t.kind == "var":
            self.next()
            return Var(t.text, UNIVERSAL_SORT)
        if t.kind == "name":
            self.next()
            if self.at("("):
                self.next()
                args = [self.term()]
                while self.at(","):
                    self.next()
                    args.append(self.term())
                self.expect(")")
                return Func(t.text, tuple(args))
            return t.text
        self.error("expected a term")
        raise AssertionError

    def atom(self) -> Atom:
        t = self.peek()
        if t.kind != "name":
            self.error("expected a predicate name")
        self.next()
        args: tuple[STerm, ...] = ()
        if self.at("("):
            self.next()
            out = [self.term()]
            while self.at(","):
                self.next()
                out.append(self.term())
            self.expect(")")
            args = tuple(out)
        return Atom(t.text, args)

    def literal(self) -> Lit:
        if self.at("-"):
            self.next()
            return Lit(self.atom(), False)
        return Lit(self.atom())

    def choice(self, lower: int) -> Choice:
        self.expect("{")
        elements = []
        while True:
            a = self.atom()
            guard = None
            if self.at(":"):
                self.next()
                guard = self.literal()
            elements.append((a, guard))
            if self.at(";") or self.at(","):
                self.next()
                continue
            break
        self.expect("}")
        upper = None
        if self.peek().kind == "int":
            upper = int(self.next().text)
        return Choice(tuple(elements), lower, upper)

    def card(self, bound: int) -> CardinalityBound:
        self.expect("{")
        lits = [self.literal()]
        while self.at(",") or self.at(";"):
            self.next()
            lits.append(self.literal())
        self.expect("}")
        return CardinalityBound(tuple(frozenset((l,)) for l in lits), None, bound - 1)

    def body(self) -> tuple[tuple[Lit, ...], tuple[Lit, ...]]:
        pos, naf = [], []
        while True:
            if self.peek().text == "not":
                self.next()
                naf.append(self.literal())
            else:
                pos.append(self.literal())
            if self.at(","):
                self.next()
                continue
            break
        return tuple(pos), tuple(naf)

    def statement(self) -> SchematicRule:
        head: object = None
        pos: tuple[Lit, ...] = ()
        naf: tuple[Lit, ...] = ()
        t = self.peek()
        if t.kind == "arrow":  # constraint, possibly a count constraint
            self.next()
            if self.peek().kind == "int":
                bound = int(self.next().text)
                head = self.card(bound)
                if self.at(","):
                    self.next()
                    pos, naf = self.body()
            else:
                pos, naf = self.body()
        elif t.text == "{" or t.kind == "int":
            lower = 0
            if t.kind == "int":
                lower = int(self.next().text)
            head = self.choice(lower)
            if self.peek().kind == "arrow":
                self.next()
                pos, naf = self.body()
        else:
            head = self.literal()
            if self.peek().kind == "arrow":
                self.next()
                pos, naf = self.body()
        self.expect(".")
        return SchematicRule(head, pos, naf)  # type: ignore[arg-type]

    def program(self) -> list[SchematicRule]:
        out = []
        while self.peek().kind != "eof":
            out.append(self.statement())
        return out


def _ground_pool(rules: Iterable[SchematicRule]) -> tuple[Term, ...]:
    pool: set[Term] = set()
    for r in rules:
        for l in r.literals():
            for arg in l.atom.args:
                for t in subterms(arg):  # type: ignore[arg-type]
                    if not isinstance(t, Var) and not _has_var(t):
                        pool.add(t)
    return tuple(sorted(pool, key=term_key))


def _has_var(t) -> bool:
    if isinstance(t, Var):
        return True
    if isinstance(t, Func):
        return any(_has_var(a) for a in t.args)
    return False


def parse_rules(text: str) -> list[SchematicRule]:
    return _Parser(text).program()


def parse_program(text: str) -> Program:
    """Parse and ground; variables range over the program's ground terms."""
    rules = parse_rules(text)
    signature = Signature({UNIVERSAL_SORT: _ground_pool(rules)})
    return ground(rules, signature)


def parse_literal(text: str) -> Lit:
    p = _Parser(text)
    l = p.literal()
    if p.peek().kind != "eof":
        p.error("trailing input after literal")
    return l


# -- canonical printing -------------------------------------------------


def format_literal(l: Lit) -> str:
    base = l.atom.pred
    if l.atom.args:
        base = "%s(%s)" % (base, ",".join(format_term(a) for a in l.atom.args))
    return base if l.positive else "-" + base


def _format_body(r: Rule) -> str:
    parts = [format_literal(l) for l in sorted(r.pos, key=lambda l: l.key())]
    parts += ["not " + format_literal(l) for l in sorted(r.naf, key=lambda l: l.key())]
    return ", ".join(parts)


def format_rule(r: Rule) -> str:
    body = _format_body(r)
    if isinstance(r.head, Lit):
        head = format_literal(r.head)
        return "%s :- %s." % (head, body) if body else head + "."
    if r.head is None:
        return ":- %s." % body
    if isinstance(r.head, Choice):
        elems = []
        for a, g in r.head.elements:
            s = format_literal(Lit(a))
            if g is not None:
                s += " : " + format_literal(g)
            elems.append(s)
        head = "{%s}" % "; ".join(elems)
        if r.head.lower:
            head = "%d %s" % (r.head.lower, head)
        if r.head.upper is not None:
            head = "%s %d" % (head, r.head.upper)
        return "%s :- %s." % (head, body) if body else head + "."
    if isinstance(r.head, CardinalityBound):
        if r.head.lower is not None or r.head.upper is None or any(
            len(e) != 1 for e in r.head.elements
        ):
            raise ValueError("count constraint not representable in the textual fragment")
        lits = sorted((next(iter(e)) for e in r.head.elements), key=lambda l: l.key())
        inner = ", ".join(format_literal(l) for l in lits)
        text = ":- %d {%s}" % (r.head.upper + 1, inner)
        if body:
            text += ", " + body
        return text + "."
    raise TypeError("unknown head %r" % (r.head,))


def format_program(p: Program) -> str:
    return "\n".join(format_rule(r) for r in p.rules) + ("\n" if p.rules else "")


def format_answer_set(x: frozenset[Lit]) -> str:
    return "{%s}" % ", ".join(format_literal(l) for l in sorted(x, key=lambda l: l.key()))
