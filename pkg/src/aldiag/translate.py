"""Compilation of system descriptions and histories into ground programs.

The main encoding names every causal law, reifies its preconditions as
indexed ``prec`` facts, and pairs them with the domain-independent rules
(effect application, inertia, the reality check).  ``conf`` assembles the
program whose answer sets are the possible pasts compatible with a
configuration; the ``dm*`` builders add the exogenous-occurrence
generators used for diagnosis.  ``alpha_d_program`` is the simplified
per-law direct encoding used by the equivalence instrumentation.

Law-structure rules (effect rules, precondition chains, relevance
propagation) are instantiated only over combinations consistent with the
emitted law facts; the remaining sort-product instances would carry
permanently false guards and are omitted without changing any answer set.
"""
from __future__ import annotations

from typing import Iterable, Sequence

from .action import (
    ActionDescription,
    FLit,
    Law,
    RecordedHistory,
    Trajectory,
    flit_term,
    term_to_flit,
)
from .logic import (
    CardinalityBound,
    Lit,
    Program,
    Rule,
    Signature,
    constraint,
    fact,
    pos,
    rule,
    sneg,
)
from .terms import Term, term_key

NIL = "nil"


def h(l: FLit, t: int) -> Lit:
    return pos("h", flit_term(l), t)


def o(a: Term, t: int) -> Lit:
    return pos("o", a, t)


def obs_fact(l: FLit, t: int) -> Rule:
    return fact(pos("obs", flit_term(l), t))


def hpd_fact(a: Term, t: int) -> Rule:
    return fact(pos("hpd", a, t))


def _causal_laws(sd: ActionDescription) -> tuple[Law, ...]:
    return tuple(l for l in sd.laws if l.kind in ("dynamic", "static"))


def _imp_name(law: Law) -> str:
    return "imp_" + law.name


def alpha(sd: ActionDescription, horizon: int) -> list[Rule]:
    """The law encoding: named d_law/s_law facts plus ground impossibility
    constraints over occurrence times [0, horizon)."""
    out: list[Rule] = []
    for a in sd.signature.agent_actions:
        out.append(fact(pos("a_act", a)))
    for a in sd.signature.exogenous_actions:
        out.append(fact(pos("x_act", a)))
    for law in _causal_laws(sd):
        d = law.name
        out.append(fact(pos("d_law" if law.kind == "dynamic" else "s_law", d)))
        out.append(fact(pos("head", d, flit_term(law.head))))
        if law.kind == "dynamic":
            out.append(fact(pos("action", d, law.action)))
        for i, p in enumerate(law.preconditions, start=1):
            out.append(fact(pos("prec", d, i, flit_term(p))))
        out.append(fact(pos("prec", d, len(law.preconditions) + 1, NIL)))
    for law in sd.impossibility_laws:
        for t in range(horizon):
            body = [h(p, t) for p in law.preconditions] + [o(law.action, t)]
            out.append(constraint(body))
    return out


def alpha_i(sd: ActionDescription) -> list[Rule]:
    """Impossibility conditions re-encoded as imp/action/prec facts."""
    out: list[Rule] = []
    for law in sd.impossibility_laws:
        d = _imp_name(law)
        out.append(fact(pos("imp", d)))
        out.append(fact(pos("action", d, law.action)))
        for i, p in enumerate(law.preconditions, start=1):
            out.append(fact(pos("prec", d, i, flit_term(p))))
        out.append(fact(pos("prec", d, len(law.preconditions) + 1, NIL)))
    return out


def build_pi(sd: ActionDescription, horizon: int) -> list[Rule]:
    """The domain-independent program over [0, horizon].

    Effect rules fire heads of triggered laws, the all_h/prec_h chain
    checks preconditions index by index, inertia carries fluents forward
    unless defeated, and the reality check rejects answer sets that
    contradict recorded observations.
    """
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    laws = _causal_laws(sd)
    flits = sd.signature.fluent_literals()
    actions = sorted(sd.signature.actions, key=term_key)
    out: list[Rule] = []
    # (1) dynamic effects
    for law in laws:
        if law.kind != "dynamic":
            continue
        d = law.name
        for t in range(horizon):
            out.append(
                rule(
                    h(law.head, t + 1),
                    pos=[
                        pos("d_law", d),
                        pos("head", d, flit_term(law.head)),
                        pos("action", d, law.action),
                        o(law.action, t),
                        pos("prec_h", d, t),
                    ],
                )
            )
    # (2) static effects
    for law in laws:
        if law.kind != "static":
            continue
        d = law.name
        for t in range(horizon + 1):
            out.append(
                rule(
                    h(law.head, t),
                    pos=[pos("s_law", d), pos("head", d, flit_term(law.head)), pos("prec_h", d, t)],
                )
            )
    # (3) the nil terminator starts the precondition chain
    for law in laws:
        i = len(law.preconditions) + 1
        for t in range(horizon + 1):
            out.append(rule(pos("all_h", law.name, i, t), pos=[pos("prec", law.name, i, NIL)]))
    # (4) chain through indexed preconditions
    for law in laws:
        for i, p in enumerate(law.preconditions, start=1):
            for t in range(horizon + 1):
                out.append(
                    rule(
                        pos("all_h", law.name, i, t),
                        pos=[
                            pos("prec", law.name, i, flit_term(p)),
                            h(p, t),
                            pos("all_h", law.name, i + 1, t),
                        ],
                    )
                )
    # (5) all preconditions hold from index 1 on
    for law in laws:
        for t in range(horizon + 1):
            out.append(rule(pos("prec_h", law.name, t), pos=[pos("all_h", law.name, 1, t)]))
    # (6) inertia
    for l in flits:
        for t in range(horizon):
            out.append(rule(h(l, t + 1), pos=[h(l, t)], naf=[h(l.complement, t + 1)]))
    # (7) state consistency
    for f in sd.signature.fluents:
        for t in range(horizon + 1):
            out.append(constraint([h(FLit(f), t), h(FLit(f, False), t)]))
    # (8) recorded occurrences happened
    for a in actions:
        for t in range(horizon):
            out.append(rule(o(a, t), pos=[pos("hpd", a, t)]))
    # (9) initial observations hold initially
    for l in flits:
        out.append(rule(h(l, 0), pos=[pos("obs", flit_term(l), 0)]))
    # (10) reality check
    for l in flits:
        for t in range(horizon + 1):
            out.append(constraint([pos("obs", flit_term(l), t)], naf=[h(l, t)]))
    return out


def awareness_axioms(sd: ActionDescription) -> list[Rule]:
    """Generate every complete initial valuation of the domain fluents."""
    out = []
    for f in sd.signature.fluents:
        pos_l, neg_l = FLit(f), FLit(f, False)
        out.append(rule(h(pos_l, 0), naf=[h(neg_l, 0)]))
        out.append(rule(h(neg_l, 0), naf=[h(pos_l, 0)]))
    return out


def history_facts(g: RecordedHistory) -> list[Rule]:
    out = [obs_fact(l, t) for l, t in sorted(g.observations, key=lambda p: (p[1], p[0].key()))]
    out += [hpd_fact(a, t) for a, t in sorted(g.occurrences, key=lambda p: (p[1], term_key(p[0])))]
    return out


def _signature_for(sd: ActionDescription, horizon: int) -> Signature:
    return Signature(
        {
            "time": tuple(range(horizon + 1)),
            "fluent_literal": tuple(flit_term(l) for l in sd.signature.fluent_literals()),
            "action": sd.signature.actions,
            "law": tuple(l.name for l in _causal_laws(sd)),
        }
    )


def alpha_program(
    sd: ActionDescription,
    g: RecordedHistory,
    horizon: int | None = None,
    include_awareness: bool = False,
) -> Program:
    """alpha(SD, Gamma): the program whose answer sets define the models of g."""
    n = g.horizon if horizon is None else horizon
    rules = alpha(sd, n) + build_pi(sd, n) + history_facts(g)
    if include_awareness:
        rules += awareness_axioms(sd)
    return Program(tuple(rules), _signature_for(sd, n))


def conf(
    sd: ActionDescription,
    g: RecordedHistory,
    observations: Iterable[tuple[FLit, int]] = (),
    occurrences: Iterable[tuple[Term, int]] = (),
    m: int | None = None,
    horizon: int | None = None,
    include_awareness: bool = True,
) -> Program:
    """The configuration program: alpha(SD, Gamma) + post-symptom records + awareness."""
    obs = sorted(observations, key=lambda p: (p[1], p[0].key()))
    occ = sorted(occurrences, key=lambda p: (p[1], term_key(p[0])))
    top = max(
        [g.horizon if m is None else m]
        + [t for _, t in obs]
        + [t + 1 for _, t in occ]
    )
    n = max(top, 1) if horizon is None else horizon
    rules = alpha(sd, n) + build_pi(sd, n) + history_facts(g)
    rules += [obs_fact(l, t) for l, t in obs]
    rules += [hpd_fact(a, t) for a, t in occ]
    if include_awareness:
        rules += awareness_axioms(sd)
    return Program(tuple(rules), _signature_for(sd, n))


def dm0(sd: ActionDescription, from_t: int, to_t: int) -> list[Rule]:
    """The basic explanation generator over exogenous occurrences in [from_t, to_t)."""
    out = []
    for a in sd.signature.exogenous_actions:
        for t in range(from_t, to_t):
            out.append(rule(o(a, t), pos=[pos("x_act", a)], naf=[sneg("o", a, t)]))
            out.append(rule(sneg("o", a, t), pos=[pos("x_act", a)], naf=[o(a, t)]))
    return out


def rel_rules(sd: ActionDescription, n: int, horizon: int) -> list[Rule]:
    """Relevance propagation and the constraint barring unrelated hypotheses."""
    actions = sorted(sd.signature.actions, key=term_key)
    flits = sd.signature.fluent_literals()
    laws = _causal_laws(sd)
    out: list[Rule] = []
    # (1) a dynamic law makes its action relevant to its head
    for law in laws:
        if law.kind != "dynamic":
            continue
        d = law.name
        out.append(
            rule(
                pos("rel", law.action, flit_term(law.head)),
                pos=[pos("d_law", d), pos("head", d, flit_term(law.head)),
                     pos("action", d, law.action)],
            )
        )
    # (2) relevance propagates from preconditions to heads, through both law kinds
    for law in laws:
        tag = "d_law" if law.kind == "dynamic" else "s_law"
        for i, p in enumerate(law.preconditions, start=1):
            for a in actions:
                out.append(
                    rule(
                        pos("rel", a, flit_term(law.head)),
                        pos=[
                            pos(tag, law.name),
                            pos("head", law.name, flit_term(law.head)),
                            pos("prec", law.name, i, flit_term(p)),
                            pos("rel", a, flit_term(p)),
                        ],
                    )
                )
    # (3) relevance propagates through impossibility conditions
    for law in sd.impossibility_laws:
        d = _imp_name(law)
        for i, p in enumerate(law.preconditions, start=1):
            for l in flits:
                for a2 in actions:
                    out.append(
                        rule(
                            pos("rel", a2, flit_term(l)),
                            pos=[
                                pos("rel", law.action, flit_term(l)),
                                pos("imp", d),
                                pos("action", d, law.action),
                                pos("prec", d, i, flit_term(p)),
                                pos("rel", a2, flit_term(p.complement)),
                            ],
                        )
                    )
    # (4) actions relevant to a post-symptom observation are relevant outright
    for a in actions:
        for l in flits:
            for t in range(n, horizon + 1):
                out.append(
                    rule(
                        pos("rel", a),
                        pos=[pos("obs", flit_term(l), t), pos("rel", a, flit_term(l))],
                    )
                )
    # (5) never hypothesize an unrecorded, unrelated exogenous occurrence
    for a in sd.signature.exogenous_actions:
        for t in range(n):
            out.append(
                constraint(
                    [o(a, t), pos("x_act", a)],
                    naf=[pos("hpd", a, t), pos("rel", a)],
                )
            )
    return out


def k_cut(k: int, time: int, exo_actions: Sequence[Term]) -> Rule:
    """Reject answer sets hypothesizing at least k occurrences at the given time."""
    if k < 1:
        raise ValueError("k must be at least 1")
    elements = tuple(
        frozenset((o(a, time),)) for a in sorted(exo_actions, key=term_key)
    )
    return Rule(CardinalityBound(elements, None, k - 1))


def dm(
    sd: ActionDescription,
    module: str,
    n: int,
    horizon: int,
    window: int = 1,
    max_actions: int | None = None,
) -> list[Rule]:
    """The diagnostic module: D0 generator, D1 relevance, or D2 window."""
    module = module.lower()
    if module == "d0":
        out = dm0(sd, 0, n)
    elif module == "d1":
        out = dm0(sd, 0, n) + alpha_i(sd) + rel_rules(sd, n, horizon)
    elif module == "d2":
        if window < 1:
            raise ValueError("window must be at least 1")
        out = dm0(sd, max(0, n - window), n)
    else:
        raise ValueError("unknown diagnostic module %r (expected d0, d1 or d2)" % module)
    if max_actions is not None:
        out.append(k_cut(max_actions, n - 1, sd.signature.exogenous_actions))
    return out


def diagnostic_program(
    sd: ActionDescription,
    g: RecordedHistory,
    observations: Iterable[tuple[FLit, int]] = (),
    occurrences: Iterable[tuple[Term, int]] = (),
    m: int | None = None,
    module: str = "d0",
    window: int = 1,
    max_actions: int | None = None,
    include_awareness: bool = True,
) -> Program:
    base = conf(sd, g, observations, occurrences, m=m, include_awareness=include_awareness)
    horizon = len(base.signature.sort("time")) - 1
    extra = dm(sd, module, g.horizon, horizon, window=window, max_actions=max_actions)
    return base.extended(extra)


# -- the direct per-law encoding ------------------------------------------


def alpha_d(sd: ActionDescription, horizon: int) -> list[Rule]:
    out: list[Rule] = []
    for law in sd.laws:
        if law.kind == "dynamic":
            for t in range(horizon):
                out.append(
                    rule(
                        h(law.head, t + 1),
                        pos=[h(p, t) for p in law.preconditions] + [o(law.action, t)],
                    )
                )
        elif law.kind == "static":
            for t in range(horizon + 1):
                out.append(rule(h(law.head, t), pos=[h(p, t) for p in law.preconditions]))
        else:
            for t in range(horizon):
                out.append(
                    constraint([h(p, t) for p in law.preconditions] + [o(law.action, t)])
                )
    return out


def alpha_d_program(
    sd: ActionDescription,
    g: RecordedHistory,
    horizon: int | None = None,
    include_awareness: bool = False,
) -> Program:
    """The simplified encoding: per-law rules, inertia/consistency, obs/hpd glue."""
    n = g.horizon if horizon is None else horizon
    flits = sd.signature.fluent_literals()
    rules = alpha_d(sd, n)
    for l in flits:
        for t in range(n):
            rules.append(rule(h(l, t + 1), pos=[h(l, t)], naf=[h(l.complement, t + 1)]))
    for f in sd.signature.fluents:
        for t in range(n + 1):
            rules.append(constraint([h(FLit(f), t), h(FLit(f, False), t)]))
    for a in sorted(sd.signature.actions, key=term_key):
        for t in range(n):
            rules.append(rule(o(a, t), pos=[pos("hpd", a, t)]))
    for l in flits:
        rules.append(rule(h(l, 0), pos=[pos("obs", flit_term(l), 0)]))
    for l in flits:
        for t in range(n + 1):
            rules.append(constraint([pos("obs", flit_term(l), t)], naf=[h(l, t)]))
    rules += history_facts(g)
    if include_awareness:
        rules += awareness_axioms(sd)
    return Program(tuple(rules), _signature_for(sd, n))


# -- reading trajectories off answer sets -----------------------------------


def defined_trajectory(answer_set: frozenset[Lit], horizon: int) -> Trajectory:
    """The sequence defined by an answer set: sigma_k from h, a_k from o."""
    states = [set() for _ in range(horizon + 1)]
    actions = [set() for _ in range(horizon)]
    for l in answer_set:
        if not l.positive:
            continue
        if l.atom.pred == "h" and len(l.atom.args) == 2:
            term, t = l.atom.args
            if isinstance(t, int) and 0 <= t <= horizon:
                states[t].add(term_to_flit(term))
        elif l.atom.pred == "o" and len(l.atom.args) == 2:
            a, t = l.atom.args
            if isinstance(t, int) and 0 <= t < horizon:
                actions[t].add(a)
    return Trajectory(
        tuple(frozenset(s) for s in states), tuple(frozenset(a) for a in actions)
    )
