"""Symptom detection, candidate diagnoses, and the test-and-repair loops.

A configuration pairs the recorded history up to the symptom time n with
the observations (and repair records) gathered afterwards, up to the
current time m.  Candidate diagnoses are read off answer sets of the
diagnostic program; ``enumerate_candidates_direct`` recomputes them from
the transition semantics and serves as the independent oracle.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Iterable, Sequence

from .action import (
    ActionDescription,
    FLit,
    RecordedHistory,
    ab,
)
from .logic import Lit, enumerate_answer_sets
from .semantics import models_of_history
from .terms import Func, Term, format_term, term_key
from .translate import diagnostic_program
from .world import WorldOracle

TraceFn = Callable[[str], None]


class HistoryInconsistentError(ValueError):
    def __init__(self):
        super().__init__(
            "history inconsistent - not a symptom; modeling error or missed past events"
        )


@dataclass(frozen=True)
class ObservationSet:
    """O_n^m: records gathered after the symptom time, up to time m."""

    m: int
    observations: frozenset[tuple[FLit, int]] = frozenset()
    occurrences: frozenset[tuple[Term, int]] = frozenset()

    def with_observation(self, l: FLit, t: int) -> "ObservationSet":
        return replace(self, observations=self.observations | {(l, t)})

    def with_occurrences(self, occ: Iterable[tuple[Term, int]]) -> "ObservationSet":
        return replace(self, occurrences=self.occurrences | frozenset(occ))

    def advanced(self) -> "ObservationSet":
        return replace(self, m=self.m + 1)


@dataclass
class Configuration:
    """A pair <Gamma_n, O_n^m>; the observation set is updated during diagnosis.

    ``explanation`` is the repair loop's running explanation E: the
    hypothesized past occurrences behind the latest accepted diagnosis.
    """

    history: RecordedHistory
    observations: ObservationSet
    explanation: frozenset[tuple[Term, int]] = frozenset()

    def __post_init__(self):
        n, m = self.n, self.m
        if m < n:
            raise ValueError("observation horizon m=%d before history horizon n=%d" % (m, n))
        for _, t in self.observations.observations:
            if not n <= t <= m:
                raise ValueError("post-symptom observation at time %d outside [%d, %d]" % (t, n, m))
        for _, t in self.observations.occurrences:
            if not n <= t < m:
                raise ValueError("post-symptom occurrence at time %d outside [%d, %d)" % (t, n, m))

    @property
    def n(self) -> int:
        return self.history.horizon

    @property
    def m(self) -> int:
        return self.observations.m

    def combined_history(self) -> RecordedHistory:
        return self.history.merged(
            self.m, self.observations.observations, self.observations.occurrences
        )

    def guard_configuration(self) -> "Configuration":
        """<Gamma_n union E, O>: the repair loop's termination guard."""
        return Configuration(
            self.history.with_occurrences(self.explanation), self.observations
        )


def configuration(
    history: RecordedHistory,
    observations: Iterable[tuple[FLit, int]] = (),
    occurrences: Iterable[tuple[Term, int]] = (),
    m: int | None = None,
) -> Configuration:
    obs = frozenset(observations)
    occ = frozenset(occurrences)
    if m is None:
        m = max(
            [history.horizon]
            + [t for _, t in obs]
            + [t + 1 for _, t in occ]
        )
    return Configuration(history, ObservationSet(m, obs, occ))


@dataclass(frozen=True)
class CandidateDiagnosis:
    """An explanation (hypothesized exogenous occurrences) plus its suspects."""

    explanation: frozenset[tuple[Term, int]]
    suspects: frozenset[Term]

    @property
    def is_empty(self) -> bool:
        return not self.explanation

    def key(self):
        return (
            tuple(sorted((term_key(a), t) for a, t in self.explanation)),
            tuple(sorted(term_key(c) for c in self.suspects)),
        )

    def __repr__(self) -> str:
        es = ",".join(
            "%s@%d" % (format_term(a), t)
            for a, t in sorted(self.explanation, key=lambda p: (p[1], term_key(p[0])))
        )
        ds = ",".join(format_term(c) for c in sorted(self.suspects, key=term_key))
        return "<{%s},{%s}>" % (es, ds)


EMPTY_DIAGNOSIS = CandidateDiagnosis(frozenset(), frozenset())


def determined_by(
    x: frozenset[Lit], m: int, sd: ActionDescription
) -> CandidateDiagnosis:
    """Extract <E, Delta> from an answer set: E from exogenous o-atoms,
    Delta from the components faulty at time m."""
    exo = set(sd.signature.exogenous_actions)
    comps = set(sd.signature.components)
    explanation = set()
    suspects = set()
    for l in x:
        if not l.positive:
            continue
        if l.atom.pred == "o" and len(l.atom.args) == 2:
            a, t = l.atom.args
            if a in exo and isinstance(t, int):
                explanation.add((a, t))
        elif l.atom.pred == "h" and len(l.atom.args) == 2:
            f, t = l.atom.args
            if t == m and isinstance(f, Func) and f.name == "ab" and f.args[0] in comps:
                suspects.add(f.args[0])
    return CandidateDiagnosis(frozenset(explanation), frozenset(suspects))


def is_symptom(
    sd: ActionDescription,
    config: Configuration,
    engine: str = "search",
    cross_check: bool = True,
) -> bool:
    """True iff the history alone is consistent but the configuration is not."""
    if not models_of_history(sd, config.history):
        raise HistoryInconsistentError()
    confprog = _conf_only(sd, config)
    by_program = not enumerate_answer_sets(confprog, engine=engine, limit=1)
    if cross_check:
        by_semantics = not models_of_history(sd, config.combined_history())
        if by_program != by_semantics:
            raise AssertionError(
                "symptom decision mismatch: program=%s direct=%s"
                % (by_program, by_semantics)
            )
    return by_program


def _conf_only(sd: ActionDescription, config: Configuration):
    from .translate import conf

    return conf(
        sd,
        config.history,
        config.observations.observations,
        config.observations.occurrences,
        m=config.m,
        include_awareness=True,
    )


def _order_key(order):
    if callable(order):
        return order, False
    if order == "lex":
        return (lambda d: d.key()), False
    if order == "revlex":
        return (lambda d: d.key()), True
    raise ValueError("unknown candidate order %r" % order)


def all_candidate_diags(
    sd: ActionDescription,
    config: Configuration,
    module: str = "d0",
    window: int = 1,
    max_actions: int | None = None,
    engine: str = "search",
    order="lex",
) -> tuple[CandidateDiagnosis, ...]:
    """Every candidate diagnosis determined by some answer set, deduplicated."""
    program = diagnostic_program(
        sd,
        config.history,
        config.observations.observations,
        config.observations.occurrences,
        m=config.m,
        module=module,
        window=window,
        max_actions=max_actions,
    )
    key, rev = _order_key(order)
    seen = set()
    out = []
    for x in enumerate_answer_sets(program, engine=engine):
        d = determined_by(x, config.m, sd)
        if d not in seen:
            seen.add(d)
            out.append(d)
    out.sort(key=key, reverse=rev)
    return tuple(out)


def candidate_diag(
    sd: ActionDescription,
    config: Configuration,
    module: str = "d0",
    window: int = 1,
    max_actions: int | None = None,
    engine: str = "search",
    order="lex",
) -> CandidateDiagnosis:
    """The first candidate in canonical order, or the empty pair."""
    diags = all_candidate_diags(
        sd, config, module=module, window=window,
        max_actions=max_actions, engine=engine, order=order,
    )
    return diags[0] if diags else EMPTY_DIAGNOSIS


def enumerate_candidates_direct(
    sd: ActionDescription, config: Configuration
) -> frozenset[CandidateDiagnosis]:
    """Reference candidate enumeration over the transition semantics.

    Every subset of possible exogenous occurrences before n is tried as an
    explanation; each model of the extended history contributes its faulty
    components at m.  Independent of the logic-program route.
    """
    n, m = config.n, config.m
    exo = sorted(sd.signature.exogenous_actions, key=term_key)
    pairs = [(a, t) for a in exo for t in range(n)]
    recorded = frozenset(
        (a, t) for a, t in config.history.occurrences if a in set(exo)
    )
    comps = set(sd.signature.components)
    out = set()
    for bits in range(1 << len(pairs)):
        hypo = frozenset(p for i, p in enumerate(pairs) if bits >> i & 1)
        extended = config.combined_history().with_occurrences(hypo)
        for model in models_of_history(sd, extended):
            suspects = frozenset(
                f.fluent.args[0]
                for f in model.state(m)
                if f.positive
                and isinstance(f.fluent, Func)
                and f.fluent.name == "ab"
                and f.fluent.args[0] in comps
            )
            out.add(CandidateDiagnosis(hypo | recorded, suspects))
    return frozenset(out)


def find_diag(
    sd: ActionDescription,
    config: Configuration,
    world: WorldOracle,
    module: str = "d0",
    window: int = 1,
    max_actions: int | None = None,
    engine: str = "search",
    order="lex",
    trace: TraceFn | None = None,
) -> CandidateDiagnosis:
    """Test candidate suspects against the world until one pans out.

    Each suspect is checked with ``observe(m, ab(c))``; the outcome is
    appended to the configuration's observation set (which this function
    updates in place).  Returns the surviving candidate, or the empty pair
    when every candidate has been refuted.
    """
    note = trace or (lambda s: None)
    m = config.m
    limit = len(sd.signature.components) + 1
    rounds = 0
    while True:
        rounds += 1
        assert rounds <= limit, "candidate testing exceeded |C|+1 iterations"
        diag = candidate_diag(
            sd, config, module=module, window=window,
            max_actions=max_actions, engine=engine, order=order,
        )
        if diag.is_empty:
            note("no-candidate remaining=none")
            return EMPTY_DIAGNOSIS
        note("candidate %r" % (diag,))
        confirmed = True
        for c in sorted(diag.suspects, key=term_key):
            seen = world.observe(m, ab(c))
            faulty = seen.positive
            note(
                "test component=%s time=%d result=%s"
                % (format_term(c), m, "ab" if faulty else "ok")
            )
            config.observations = config.observations.with_observation(seen, m)
            note("observe add=obs(%r,%d)" % (seen, m))
            if not faulty:
                confirmed = False
                break
        if confirmed:
            return diag


def diagnose(
    sd: ActionDescription,
    config: Configuration,
    world: WorldOracle,
    post_repair_fluents: Sequence[Term] | None = None,
    module: str = "d0",
    window: int = 1,
    max_actions: int | None = None,
    engine: str = "search",
    order="lex",
    max_rounds: int = 8,
    trace: TraceFn | None = None,
) -> bool:
    """Repair loop: find a diagnosis, repair its suspects, observe, repeat.

    Returns False when no diagnosis can be found (a modeling error is then
    suspected); on True the final configuration is no longer a symptom.
    """
    note = trace or (lambda s: None)
    if post_repair_fluents is None:
        post_repair_fluents = sorted(sd.signature.observable, key=term_key)
    rounds = 0
    while _need_diag(sd, config, engine):
        rounds += 1
        if rounds > max_rounds:
            note("round-limit max_rounds=%d" % max_rounds)
            return False
        note("round n=%d" % rounds)
        diag = find_diag(
            sd, config, world, module=module, window=window,
            max_actions=max_actions, engine=engine, order=order, trace=trace,
        )
        if diag.is_empty:
            note("diagnosis status=modeling-error-suspected")
            return False
        config.explanation = diag.explanation
        m = config.m
        suspects = sorted(diag.suspects, key=term_key)
        world.repair(suspects)
        note("repair components=%s time=%d" % (",".join(map(format_term, suspects)), m))
        config.observations = config.observations.with_occurrences(
            (Func("repair", (c,)), m) for c in suspects
        ).advanced()
        m = config.m
        for f in post_repair_fluents:
            seen = world.observe(m, f)
            config.observations = config.observations.with_observation(seen, m)
            note("observe add=obs(%r,%d)" % (seen, m))
    note("resolved rounds=%d" % rounds)
    return True


def _need_diag(sd: ActionDescription, config: Configuration, engine: str) -> bool:
    return is_symptom(sd, config.guard_configuration(), engine=engine, cross_check=False)


def fold_into_history(
    sd: ActionDescription, config: Configuration, engine: str = "search"
) -> tuple[RecordedHistory, bool]:
    """Fold the resolved configuration back into the recorded history.

    Only safe when a single candidate survives: the history absorbs the
    explanation and every post-symptom record.  Otherwise the history is
    returned unchanged and the caller keeps the configuration split.
    """
    survivors = all_candidate_diags(sd, config, engine=engine)
    if len(survivors) != 1:
        return config.history, False
    (diag,) = survivors
    merged = config.combined_history().with_occurrences(diag.explanation)
    return merged, True


# -- relevance ---------------------------------------------------------------


@dataclass(frozen=True)
class RelevanceIndex:
    """Fixpoints of the action/literal relevance relations for one observation set."""

    observed: frozenset[FLit]
    pairs: frozenset[tuple[Term, FLit]]
    fluents: frozenset[FLit]

    def action_relevant(self, a: Term) -> bool:
        return any((a, l) in self.pairs for l in self.observed)

    def compound_relevant(self, actions: Iterable[Term]) -> bool:
        return all(self.action_relevant(a) for a in actions)

    def rank(self, sequence: Sequence[Iterable[Term]]) -> int:
        """Number of elementary actions in the sequence not relevant to O."""
        return sum(
            1 for step in sequence for a in step if not self.action_relevant(a)
        )

    def reduce_sequence(
        self, sequence: Sequence[Iterable[Term]], exogenous: Iterable[Term]
    ) -> tuple[frozenset[Term], ...]:
        """red_O: drop irrelevant exogenous elementary actions from each step."""
        exo = set(exogenous)
        return tuple(
            frozenset(
                a for a in step if self.action_relevant(a) or a not in exo
            )
            for step in sequence
        )

    def reduce_explanation(
        self, explanation: frozenset[tuple[Term, int]]
    ) -> frozenset[tuple[Term, int]]:
        return frozenset((a, t) for a, t in explanation if self.action_relevant(a))


def relevance_index(
    sd: ActionDescription, observed: Iterable[FLit]
) -> RelevanceIndex:
    obs = frozenset(observed)
    pairs: set[tuple[Term, FLit]] = set()
    for law in sd.dynamic_laws:
        pairs.add((law.action, law.head))
    changed = True
    while changed:
        changed = False
        for law in sd.laws:
            if law.kind == "impossibility":
                continue
            for p in law.preconditions:
                for a in sd.signature.actions:
                    if (a, p) in pairs and (a, law.head) not in pairs:
                        pairs.add((a, law.head))
                        changed = True
        for law in sd.impossibility_laws:
            for p in law.preconditions:
                for a2 in sd.signature.actions:
                    if (a2, p.complement) not in pairs:
                        continue
                    for l in {lit for _, lit in pairs}:
                        if (law.action, l) in pairs and (a2, l) not in pairs:
                            pairs.add((a2, l))
                            changed = True
    fluents = set(obs)
    changed = True
    while changed:
        changed = False
        for law in sd.laws:
            if law.kind == "impossibility":
                relevant = any((law.action, l) in pairs for l in obs)
                for p in law.preconditions:
                    if relevant and p.complement not in fluents:
                        fluents.add(p.complement)
                        changed = True
            elif law.head in fluents:
                for p in law.preconditions:
                    if p not in fluents:
                        fluents.add(p)
                        changed = True
    return RelevanceIndex(obs, frozenset(pairs), frozenset(fluents))
