"""Ground terms and schematic variables shared by the logic and action layers.

A ground term is an ``int``, a ``str`` constant, or a :class:`Func`
application whose arguments are ground terms.  Schematic rules may also
contain :class:`Var` occurrences; grounding replaces them by the ground
terms of their declared sort.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Union


@dataclass(frozen=True)
class Func:
    """A function application, e.g. ``close(s1)`` or ``neg(on(b))``."""

    name: str
    args: tuple["Term", ...]

    def __repr__(self) -> str:
        return format_term(self)


@dataclass(frozen=True)
class Var:
    """A sorted variable; ``sort`` names a sort in the grounding signature."""

    name: str
    sort: str | None = None

    def __repr__(self) -> str:
        return self.name


Term = Union[int, str, Func]
STerm = Union[Term, Var]


def func(name: str, *args: STerm) -> Func:
    return Func(name, tuple(args))


def term_key(t: STerm):
    """Total order key over heterogeneous terms (ints < names < applications)."""
    if isinstance(t, int):
        return (0, t)
    if isinstance(t, str):
        return (1, t)
    if isinstance(t, Var):
        return (2, t.name)
    return (3, t.name, tuple(term_key(a) for a in t.args))


def format_term(t: STerm) -> str:
    if isinstance(t, Func):
        if not t.args:
            return t.name
        return "%s(%s)" % (t.name, ",".join(format_term(a) for a in t.args))
    if isinstance(t, Var):
        return t.name
    return str(t)


def substitute(t: STerm, binding: Mapping[Var, Term]) -> Term:
    if isinstance(t, Var):
        return binding[t]
    if isinstance(t, Func) and t.args:
        return Func(t.name, tuple(substitute(a, binding) for a in t.args))
    return t  # type: ignore[return-value]


def term_vars(t: STerm) -> Iterator[Var]:
    if isinstance(t, Var):
        yield t
    elif isinstance(t, Func):
        for a in t.args:
            yield from term_vars(a)


def is_ground(t: STerm) -> bool:
    return not any(True for _ in term_vars(t))


def subterms(t: Term) -> Iterator[Term]:
    """The term itself and all of its argument subterms."""
    yield t
    if isinstance(t, Func):
        for a in t.args:
            yield from subterms(a)
