"""Action-language domain descriptions and recorded histories.

A system description consists of a domain signature (components, fluents,
observable fluents, agent and exogenous actions) and three kinds of laws:

* dynamic:        ``causes(a, l0, [l1, ..., lm])``
* static:         ``caused(l0, [l1, ..., lm])``
* impossibility:  ``impossible_if(a, [l1, ..., lm])``

Recorded histories collect ``obs(l, t)`` and ``hpd(a, t)`` statements up
to a horizon.  All values here are immutable and hashable.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable

from .terms import Func, Term, format_term, term_key

DYNAMIC = "dynamic"
STATIC = "static"
IMPOSSIBILITY = "impossibility"


@dataclass(frozen=True)
class FLit:
    """A fluent literal: a fluent term or its negation."""

    fluent: Term
    positive: bool = True

    def __neg__(self) -> "FLit":
        return FLit(self.fluent, not self.positive)

    @property
    def complement(self) -> "FLit":
        return FLit(self.fluent, not self.positive)

    def key(self):
        return (term_key(self.fluent), 0 if self.positive else 1)

    def __repr__(self) -> str:
        return format_term(self.fluent) if self.positive else "-" + format_term(self.fluent)


def flit(fluent: Term, positive: bool = True) -> FLit:
    return FLit(fluent, positive)


def ab(component: Term) -> Term:
    return Func("ab", (component,))


def flit_term(l: FLit) -> Term:
    """Encode a fluent literal as a ground term (negatives wrapped in neg/1)."""
    return l.fluent if l.positive else Func("neg", (l.fluent,))


def term_to_flit(t: Term) -> FLit:
    if isinstance(t, Func) and t.name == "neg" and len(t.args) == 1:
        return FLit(t.args[0], False)
    return FLit(t, True)


class DomainError(ValueError):
    pass


@dataclass(frozen=True)
class Law:
    kind: str
    name: str
    head: FLit | None
    preconditions: tuple[FLit, ...]
    action: Term | None = None

    def __post_init__(self):
        if self.kind not in (DYNAMIC, STATIC, IMPOSSIBILITY):
            raise DomainError("unknown law kind %r" % self.kind)
        if self.kind == DYNAMIC and (self.action is None or self.head is None):
            raise DomainError("dynamic law %s needs an action and a head" % self.name)
        if self.kind == STATIC and (self.action is not None or self.head is None):
            raise DomainError("static law %s has no action and needs a head" % self.name)
        if self.kind == IMPOSSIBILITY and (self.action is None or self.head is not None):
            raise DomainError("impossibility law %s needs an action and no head" % self.name)


def dynamic_law(name: str, action: Term, head: FLit, pre: Iterable[FLit] = ()) -> Law:
    return Law(DYNAMIC, name, head, tuple(pre), action)


def static_law(name: str, head: FLit, pre: Iterable[FLit] = ()) -> Law:
    return Law(STATIC, name, head, tuple(pre))


def impossibility(name: str, action: Term, pre: Iterable[FLit] = ()) -> Law:
    return Law(IMPOSSIBILITY, name, None, tuple(pre), action)


@dataclass(frozen=True)
class DomainSignature:
    components: tuple[Term, ...]
    fluents: tuple[Term, ...]
    observable: tuple[Term, ...]
    agent_actions: tuple[Term, ...]
    exogenous_actions: tuple[Term, ...]

    def __post_init__(self):
        comps, fl = set(self.components), set(self.fluents)
        ag, ex = set(self.agent_actions), set(self.exogenous_actions)
        if ag & ex:
            raise DomainError("agent and exogenous actions overlap: %r" % (ag & ex))
        if (comps & fl) or (comps & (ag | ex)) or (fl & (ag | ex)):
            raise DomainError("components, fluents, and actions must be disjoint")
        obs = set(self.observable)
        if not obs <= fl:
            raise DomainError("observable fluents not declared: %r" % (obs - fl))
        for c in self.components:
            if ab(c) not in fl:
                raise DomainError("missing fluent ab(%s)" % format_term(c))
            if ab(c) not in obs:
                raise DomainError("fluent ab(%s) must be observable" % format_term(c))

    @property
    def actions(self) -> tuple[Term, ...]:
        return self.agent_actions + self.exogenous_actions

    def fluent_literals(self) -> tuple[FLit, ...]:
        out = []
        for f in sorted(self.fluents, key=term_key):
            out.append(FLit(f))
            out.append(FLit(f, False))
        return tuple(out)


def signature(
    components: Iterable[Term] = (),
    fluents: Iterable[Term] = (),
    observable: Iterable[Term] = (),
    agent_actions: Iterable[Term] = (),
    exogenous_actions: Iterable[Term] = (),
) -> DomainSignature:
    """Build a signature; ab(c) fluents are always observable."""
    comps = tuple(sorted(set(components), key=term_key))
    obs = set(observable) | {ab(c) for c in comps}
    return DomainSignature(
        comps,
        tuple(sorted(set(fluents), key=term_key)),
        tuple(sorted(obs, key=term_key)),
        tuple(sorted(set(agent_actions), key=term_key)),
        tuple(sorted(set(exogenous_actions), key=term_key)),
    )


@dataclass(frozen=True)
class ActionDescription:
    signature: DomainSignature
    laws: tuple[Law, ...]

    def __post_init__(self):
        names = [l.name for l in self.laws]
        if len(set(names)) != len(names):
            dupes = sorted({n for n in names if names.count(n) > 1})
            raise DomainError("duplicate law names: %s" % ", ".join(dupes))
        declared_f = set(self.signature.fluents)
        declared_a = set(self.signature.actions)
        for law in self.laws:
            for l in (law.preconditions + ((law.head,) if law.head else ())):
                if l.fluent not in declared_f:
                    raise DomainError(
                        "law %s mentions undeclared fluent %s" % (law.name, format_term(l.fluent))
                    )
            if law.action is not None and law.action not in declared_a:
                raise DomainError(
                    "law %s mentions undeclared action %s" % (law.name, format_term(law.action))
                )

    @property
    def dynamic_laws(self) -> tuple[Law, ...]:
        return tuple(l for l in self.laws if l.kind == DYNAMIC)

    @property
    def static_laws(self) -> tuple[Law, ...]:
        return tuple(l for l in self.laws if l.kind == STATIC)

    @property
    def impossibility_laws(self) -> tuple[Law, ...]:
        return tuple(l for l in self.laws if l.kind == IMPOSSIBILITY)

    @property
    def breakage_laws(self) -> tuple[Law, ...]:
        """Laws with ab(.) in the head or positive body (the fault model)."""
        return tuple(l for l in self.laws if _is_breakage(l))

    @property
    def normal_laws(self) -> tuple[Law, ...]:
        return tuple(l for l in self.laws if not _is_breakage(l))

    def with_repair_actions(self) -> "ActionDescription":
        """Add repair(c) agent actions and their causal laws (idempotent)."""
        sig = self.signature
        new_actions = []
        new_laws = list(self.laws)
        declared = set(sig.actions)
        existing_heads = {
            (l.action, l.head) for l in self.laws if l.kind == DYNAMIC
        }
        for c in sig.components:
            act = Func("repair", (c,))
            if act not in declared:
                new_actions.append(act)
            if (act, FLit(ab(c), False)) not in existing_heads:
                new_laws.append(
                    dynamic_law("repair_%s" % format_term(c), act, FLit(ab(c), False))
                )
        if not new_actions and len(new_laws) == len(self.laws):
            return self
        new_sig = replace(
            sig,
            agent_actions=tuple(sorted(set(sig.agent_actions) | set(new_actions), key=term_key)),
        )
        return ActionDescription(new_sig, tuple(new_laws))


def _is_breakage(law: Law) -> bool:
    if law.head is not None and isinstance(law.head.fluent, Func) and law.head.fluent.name == "ab":
        return True
    return any(
        l.positive and isinstance(l.fluent, Func) and l.fluent.name == "ab"
        for l in law.preconditions
    )


@dataclass(frozen=True)
class Trajectory:
    """An alternating path sigma_0, a_0, sigma_1, ..., a_{n-1}, sigma_n."""

    states: tuple[frozenset[FLit], ...]
    actions: tuple[frozenset[Term], ...]

    def __post_init__(self):
        if len(self.states) != len(self.actions) + 1:
            raise ValueError("trajectory needs one more state than actions")

    @property
    def length(self) -> int:
        return len(self.actions)

    def state(self, t: int) -> frozenset[FLit]:
        return self.states[t]

    def key(self):
        return (
            tuple(tuple(sorted(l.key() for l in s)) for s in self.states),
            tuple(tuple(sorted(term_key(a) for a in acts)) for acts in self.actions),
        )


class HistoryError(ValueError):
    pass


@dataclass(frozen=True)
class RecordedHistory:
    """obs/hpd records up to a horizon: obs at t in [0, n], hpd at t in [0, n)."""

    horizon: int
    observations: frozenset[tuple[FLit, int]] = frozenset()
    occurrences: frozenset[tuple[Term, int]] = frozenset()

    def __post_init__(self):
        if self.horizon < 0:
            raise HistoryError("horizon must be non-negative")
        for _, t in self.observations:
            if not 0 <= t <= self.horizon:
                raise HistoryError("observation at time %d outside [0, %d]" % (t, self.horizon))
        for _, t in self.occurrences:
            if not 0 <= t < self.horizon:
                raise HistoryError("occurrence at time %d outside [0, %d)" % (t, self.horizon))

    def actions_at(self, t: int) -> frozenset[Term]:
        return frozenset(a for a, s in self.occurrences if s == t)

    def observed_at(self, t: int) -> frozenset[FLit]:
        return frozenset(l for l, s in self.observations if s == t)

    def with_occurrences(self, extra: Iterable[tuple[Term, int]]) -> "RecordedHistory":
        return RecordedHistory(
            self.horizon, self.observations, self.occurrences | frozenset(extra)
        )

    def merged(
        self,
        horizon: int,
        observations: Iterable[tuple[FLit, int]] = (),
        occurrences: Iterable[tuple[Term, int]] = (),
    ) -> "RecordedHistory":
        return RecordedHistory(
            max(horizon, self.horizon),
            self.observations | frozenset(observations),
            self.occurrences | frozenset(occurrences),
        )

    def initial_is_complete(self, sig: DomainSignature) -> bool:
        seen = {l.fluent for l, t in self.observations if t == 0}
        return set(sig.fluents) <= seen


def history(
    horizon: int,
    observations: Iterable[tuple[FLit, int]] = (),
    occurrences: Iterable[tuple[Term, int]] = (),
) -> RecordedHistory:
    return RecordedHistory(horizon, frozenset(observations), frozenset(occurrences))
