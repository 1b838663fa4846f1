"""Sort-driven grounding of schematic rules.

Every variable must carry a sort declared in the signature; the ground
instances of a rule are the sort products that pass the rule's arithmetic
guards.  Output order is deterministic: rules in input order, instances in
lexicographic order of the variable values (variables ordered by first
occurrence: head, then positive body, then naf body, then guards).
"""
from __future__ import annotations

from itertools import product
from typing import Iterable, Mapping, Sequence

from ..terms import Term, Var, substitute, term_vars
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


class GroundingError(ValueError):
    pass


def _sub_lit(l: Lit, binding: Mapping[Var, Term]) -> Lit:
    if not l.atom.args:
        return l
    return Lit(Atom(l.atom.pred, tuple(substitute(a, binding) for a in l.atom.args)), l.positive)


def _lit_vars(l: Lit):
    for t in l.atom.args:
        yield from term_vars(t)


def _ordered_vars(rule: SchematicRule) -> tuple[list[Var], list[Var]]:
    """Variables in deterministic first-occurrence order.

    Returns (global variables, choice-local variables).  A variable is
    choice-local when it occurs only inside the choice head's elements.
    """
    seen: dict[Var, None] = {}
    local_seen: dict[Var, None] = {}

    def visit(v: Var, store: dict[Var, None]):
        if v not in store:
            store[v] = None

    if isinstance(rule.head, Lit):
        for v in _lit_vars(rule.head):
            visit(v, seen)
    elif isinstance(rule.head, Choice):
        for a, g in rule.head.elements:
            for v in _lit_vars(Lit(a)):
                visit(v, local_seen)
            if g is not None:
                for v in _lit_vars(g):
                    visit(v, local_seen)
    elif isinstance(rule.head, CardinalityBound):
        for e in rule.head.elements:
            for l in e:
                for v in _lit_vars(l):
                    visit(v, seen)
    for l in rule.pos:
        for v in _lit_vars(l):
            visit(v, seen)
    for l in rule.naf:
        for v in _lit_vars(l):
            visit(v, seen)
    for g in rule.guards:
        for v in g.vars():
            visit(v, seen)
    local = [v for v in local_seen if v not in seen]
    return list(seen), local


def _values(rule_name: str, v: Var, signature: Signature) -> tuple[Term, ...]:
    if v.sort is None:
        raise GroundingError("rule %s: variable %s has no sort" % (rule_name, v.name))
    if not signature.has_sort(v.sort):
        raise GroundingError(
            "rule %s: variable %s has undeclared sort %r" % (rule_name, v.name, v.sort)
        )
    return signature.sort(v.sort)


def _ground_head(head, binding: Mapping[Var, Term], local: Sequence[Var],
                 rule_name: str, signature: Signature):
    if head is None or isinstance(head, Lit):
        return head if head is None else _sub_lit(head, binding)
    if isinstance(head, CardinalityBound):
        return CardinalityBound(
            tuple(frozenset(_sub_lit(l, binding) for l in e) for e in head.elements),
            head.lower,
            head.upper,
        )
    # Choice: expand element schemas over the local variables.
    elements = []
    local_values = [_values(rule_name, v, signature) for v in local]
    for combo in product(*local_values):
        b = dict(binding)
        b.update(zip(local, combo))
        for a, g in head.elements:
            ga = _sub_lit(Lit(a), b).atom
            gg = None if g is None else _sub_lit(g, b)
            if (ga, gg) not in elements:
                elements.append((ga, gg))
    return Choice(tuple(elements), head.lower, head.upper)


def ground_rule(rule: SchematicRule, signature: Signature, index: int = 0) -> list[Rule]:
    name = rule.label or ("#%d" % index)
    global_vars, local_vars = _ordered_vars(rule)
    value_lists = [_values(name, v, signature) for v in global_vars]
    out = []
    for combo in product(*value_lists):
        binding = dict(zip(global_vars, combo))
        if not all(g.holds(binding) for g in rule.guards):
            continue
        out.append(
            Rule(
                _ground_head(rule.head, binding, local_vars, name, signature),
                frozenset(_sub_lit(l, binding) for l in rule.pos),
                frozenset(_sub_lit(l, binding) for l in rule.naf),
            )
        )
    return out


def ground(rules: Iterable[SchematicRule | Rule], signature: Signature) -> Program:
    """Ground a mixed sequence of schematic and already-ground rules."""
    out: list[Rule] = []
    for i, r in enumerate(rules):
        if isinstance(r, Rule):
            out.append(r)
        else:
            out.extend(ground_rule(r, signature, i))
    return Program(tuple(out), signature)
