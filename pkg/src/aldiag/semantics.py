"""Direct transition-diagram semantics for action descriptions.

States are complete, consistent fluent-literal sets closed under the
static laws; a transition ``<s, a, s'>`` exists when no impossibility law
applies to an elementary action of ``a`` in ``s`` and

    s' = Cn_Z( E(a, s)  union  (s & s') )

Successor states are found by exhaustive enumeration of the (finite)
state space, which is capped at ``MAX_ENUM_FLUENTS`` fluents; this module
is the non-ASP oracle the logic-program translation is checked against.
"""
from __future__ import annotations

from itertools import product
from typing import Iterable
from weakref import WeakKeyDictionary

from .action import ActionDescription, FLit, RecordedHistory, Trajectory
from .terms import Term, format_term

MAX_ENUM_FLUENTS = 16


class DomainTooLargeError(RuntimeError):
    def __init__(self, n: int):
        super().__init__(
            "state enumeration supports at most %d fluents, got %d"
            % (MAX_ENUM_FLUENTS, n)
        )


class InconsistentHistoryError(ValueError):
    """The recorded history has no model; entailment is undefined."""


def closure(literals: Iterable[FLit], sd: ActionDescription) -> frozenset[FLit]:
    """Cn_Z: least superset of ``literals`` closed under the static laws."""
    out = set(literals)
    statics = sd.static_laws
    changed = True
    while changed:
        changed = False
        for law in statics:
            if law.head not in out and all(p in out for p in law.preconditions):
                out.add(law.head)
                changed = True
    return frozenset(out)


def is_complete(s: Iterable[FLit], sd: ActionDescription) -> bool:
    seen = {l.fluent for l in s}
    return set(sd.signature.fluents) <= seen


def is_consistent_lits(s: Iterable[FLit]) -> bool:
    ss = set(s)
    return not any(l.complement in ss for l in ss)


def is_state(s: Iterable[FLit], sd: ActionDescription) -> bool:
    ss = frozenset(s)
    return (
        is_complete(ss, sd)
        and is_consistent_lits(ss)
        and closure(ss, sd) == ss
    )


_DIAGRAMS: "WeakKeyDictionary[ActionDescription, _Diagram]" = WeakKeyDictionary()


class _Diagram:
    def __init__(self, sd: ActionDescription):
        self.sd = sd
        self._states: tuple[frozenset[FLit], ...] | None = None
        self._succ: dict[tuple[frozenset[FLit], frozenset[Term]], tuple[frozenset[FLit], ...]] = {}

    def states(self) -> tuple[frozenset[FLit], ...]:
        if self._states is None:
            fluents = sorted(self.sd.signature.fluents, key=format_term)
            if len(fluents) > MAX_ENUM_FLUENTS:
                raise DomainTooLargeError(len(fluents))
            found = []
            for signs in product((True, False), repeat=len(fluents)):
                s = frozenset(FLit(f, v) for f, v in zip(fluents, signs))
                if closure(s, self.sd) == s:
                    found.append(s)
            found.sort(key=lambda s: tuple(sorted(l.key() for l in s)))
            self._states = tuple(found)
        return self._states

    def successors(
        self, s: frozenset[FLit], a: frozenset[Term]
    ) -> tuple[frozenset[FLit], ...]:
        key = (s, a)
        cached = self._succ.get(key)
        if cached is not None:
            return cached
        sd = self.sd
        result: tuple[frozenset[FLit], ...]
        if any(
            law.action in a and all(p in s for p in law.preconditions)
            for law in sd.impossibility_laws
        ):
            result = ()
        else:
            effects = direct_effects(a, s, sd)
            out = []
            for cand in self.states():
                if closure(effects | (s & cand), sd) == cand:
                    out.append(cand)
            result = tuple(out)
        self._succ[key] = result
        return result


def _diagram(sd: ActionDescription) -> _Diagram:
    d = _DIAGRAMS.get(sd)
    if d is None:
        d = _Diagram(sd)
        _DIAGRAMS[sd] = d
    return d


def states(sd: ActionDescription) -> tuple[frozenset[FLit], ...]:
    return _diagram(sd).states()


def direct_effects(
    a: Iterable[Term], s: Iterable[FLit], sd: ActionDescription
) -> frozenset[FLit]:
    """E(a, s): heads of dynamic laws triggered by elementary actions of a."""
    aa, ss = frozenset(a), frozenset(s)
    declared = set(sd.signature.actions)
    for act in aa:
        if act not in declared:
            raise ValueError("undeclared action %s" % format_term(act))
    return frozenset(
        law.head
        for law in sd.dynamic_laws
        if law.action in aa and all(p in ss for p in law.preconditions)
    )


def successors(
    s: Iterable[FLit], a: Iterable[Term], sd: ActionDescription
) -> tuple[frozenset[FLit], ...]:
    aa = frozenset(a)
    declared = set(sd.signature.actions)
    for act in aa:
        if act not in declared:
            raise ValueError("undeclared action %s" % format_term(act))
    return _diagram(sd).successors(frozenset(s), aa)


def models_of_history(sd: ActionDescription, g: RecordedHistory) -> tuple[Trajectory, ...]:
    """All diagram paths matching g's occurrences and observations, in canonical order."""
    diagram = _diagram(sd)
    n = g.horizon
    starts = [
        s for s in diagram.states() if g.observed_at(0) <= s
    ]
    found: list[Trajectory] = []

    def extend(prefix_states, t):
        if t == n:
            found.append(
                Trajectory(
                    tuple(prefix_states),
                    tuple(g.actions_at(i) for i in range(n)),
                )
            )
            return
        a = g.actions_at(t)
        for nxt in diagram.successors(prefix_states[-1], a):
            if g.observed_at(t + 1) <= nxt:
                extend(prefix_states + [nxt], t + 1)

    for s0 in starts:
        extend([s0], 0)
    found.sort(key=lambda m: m.key())
    return tuple(found)


def entails(sd: ActionDescription, g: RecordedHistory, l: FLit, t: int) -> bool:
    """g |= h(l, t): l holds at t in every model of g."""
    models = models_of_history(sd, g)
    if not models:
        raise InconsistentHistoryError(
            "history has no model; entailment is undefined"
        )
    return all(l in m.state(t) for m in models)


def is_sound_history(g: RecordedHistory, w: Trajectory) -> bool:
    """Every record of g is realized by the trajectory w."""
    if w.length < g.horizon:
        raise ValueError("trajectory shorter than the history horizon")
    for l, t in g.observations:
        if l not in w.state(t):
            return False
    for a, t in g.occurrences:
        if a not in w.actions[t]:
            return False
    return True
