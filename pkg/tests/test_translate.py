"""Translator tests, cross-checked against the direct semantics oracle."""
from __future__ import annotations

import random

import pytest

from aldiag.action import (
    ActionDescription,
    FLit,
    ab,
    dynamic_law,
    flit,
    history,
    impossibility,
    signature,
    static_law,
)
from aldiag.logic import (
    CardinalityBound,
    constraint,
    enumerate_answer_sets,
    fact,
    pos,
    rule,
    sneg,
)
from aldiag.semantics import models_of_history
from aldiag.translate import (
    alpha,
    alpha_d_program,
    alpha_program,
    awareness_axioms,
    build_pi,
    conf,
    defined_trajectory,
    diagnostic_program,
    dm,
    h,
    k_cut,
    o,
)
from aldiag.terms import func

from conftest import CLOSE_S1, CLOSED_S1, ON_B, PROT_B, sigma0


def exo_occurrences(x):
    return frozenset(
        (l.atom.args[0], l.atom.args[1])
        for l in x
        if l.positive and l.atom.pred == "o" and str(l.atom.args[0]) in ("brk", "srg", "a")
    )


def suspects_at(x, m):
    from aldiag.terms import Func

    out = set()
    for l in x:
        if l.positive and l.atom.pred == "h" and l.atom.args[1] == m:
            t = l.atom.args[0]
            if isinstance(t, Func) and t.name == "ab":
                out.add(t.args[0])
    return frozenset(out)


# -- alpha ------------------------------------------------------------------


def test_alpha_encodes_a_precondition_free_dynamic_law():
    sig = signature(components=["b"], fluents=[ab("b")], exogenous_actions=["brk"])
    sd = ActionDescription(sig, (dynamic_law("law_1", "brk", flit(ab("b"))),))
    rules = alpha(sd, 1)
    assert fact(pos("d_law", "law_1")) in rules
    assert fact(pos("head", "law_1", ab("b"))) in rules
    assert fact(pos("action", "law_1", "brk")) in rules
    assert fact(pos("prec", "law_1", 1, "nil")) in rules


def test_alpha_encodes_static_laws_with_indexed_preconditions():
    sig = signature(components=["b"], fluents=[ab("b"), ON_B], exogenous_actions=["brk"])
    sd = ActionDescription(sig, (static_law("law_1", flit(ON_B, False), [flit(ab("b"))]),))
    rules = alpha(sd, 1)
    assert fact(pos("s_law", "law_1")) in rules
    assert fact(pos("head", "law_1", func("neg", ON_B))) in rules
    assert fact(pos("prec", "law_1", 1, ab("b"))) in rules
    assert fact(pos("prec", "law_1", 2, "nil")) in rules


def test_alpha_turns_impossibility_into_ground_constraints():
    sig = signature(fluents=[CLOSED_S1], agent_actions=[CLOSE_S1])
    sd = ActionDescription(
        sig, (impossibility("law_1", CLOSE_S1, [flit(CLOSED_S1)]),)
    )
    rules = alpha(sd, 2)
    expected = constraint([h(flit(CLOSED_S1), 0), o(CLOSE_S1, 0)])
    assert expected in rules
    assert constraint([h(flit(CLOSED_S1), 1), o(CLOSE_S1, 1)]) in rules


def test_duplicate_law_names_rejected_before_translation():
    from aldiag.action import DomainError

    sig = signature(fluents=["f"], agent_actions=["go"])
    with pytest.raises(DomainError):
        ActionDescription(
            sig,
            (dynamic_law("d", "go", flit("f")), dynamic_law("d", "go", flit("f", False))),
        )


# -- build_pi ----------------------------------------------------------------


def test_pi_contains_the_occurrence_rule_instances(circuit):
    rules = build_pi(circuit, 1)
    assert rule(o(CLOSE_S1, 0), pos=[pos("hpd", CLOSE_S1, 0)]) in rules
    assert rule(o("brk", 0), pos=[pos("hpd", "brk", 0)]) in rules


def test_pi_zero_precondition_laws_fire_via_the_nil_fact(circuit):
    rules = build_pi(circuit, 1)
    assert rule(pos("all_h", "close_s1", 1, 0), pos=[pos("prec", "close_s1", 1, "nil")]) in rules


def test_pi_does_not_use_the_defeasible_precondition_encoding(circuit):
    # The rejected alternative defines prec_h through its strong negation.
    for r in build_pi(circuit, 2):
        for l in r.literals():
            assert not (l.atom.pred == "prec_h" and not l.positive)


def test_pi_inertia_instance_count_matches_sorts(circuit):
    rules = [
        r
        for r in build_pi(circuit, 2)
        if isinstance(r.head, type(h(flit(ON_B), 0))) and r.head.atom.pred == "h" and r.naf
    ]
    # 7 fluents -> 14 literals, at 2 transitions each
    assert len(rules) == 2 * (2 * 7)


def test_pi_requires_a_positive_horizon(circuit):
    with pytest.raises(ValueError):
        build_pi(circuit, 0)


# -- conf and the model correspondence ----------------------------------------


def test_awareness_axioms_for_each_fluent(circuit):
    rules = awareness_axioms(circuit)
    assert rule(h(flit(PROT_B), 0), naf=[h(flit(PROT_B, False), 0)]) in rules
    assert rule(h(flit(PROT_B, False), 0), naf=[h(flit(PROT_B), 0)]) in rules


def test_conf_of_the_symptom_has_no_answer_sets(circuit, gamma1):
    p = conf(circuit, gamma1, observations=[(flit(ON_B, False), 1)])
    assert enumerate_answer_sets(p) == []


def test_conf_without_observations_defines_the_unique_model(circuit, gamma1):
    p = conf(circuit, gamma1)
    asets = enumerate_answer_sets(p)
    assert len(asets) == 1
    traj = defined_trajectory(asets[0], 1)
    assert models_of_history(circuit, gamma1) == (traj,)


def test_theorem_correspondence_on_complete_initial_state(circuit):
    g = history(1, [(l, 0) for l in sigma0()], [(CLOSE_S1, 0)])
    asets = enumerate_answer_sets(alpha_program(circuit, g))
    defined = {defined_trajectory(x, 1) for x in asets}
    assert defined == set(models_of_history(circuit, g))


def test_corollary_correspondence_with_awareness_on_incomplete_state(circuit, gamma1):
    p = alpha_program(circuit, gamma1, include_awareness=True)
    defined = {defined_trajectory(x, 1) for x in enumerate_answer_sets(p)}
    assert defined == set(models_of_history(circuit, gamma1))


# -- diagnostic modules ---------------------------------------------------------


def circuit_symptom_candidates(sd, g, module="d0", **kw):
    p = diagnostic_program(sd, g, observations=[(flit(ON_B, False), 1)], module=module, **kw)
    return {
        (exo_occurrences(x), suspects_at(x, 1)) for x in enumerate_answer_sets(p)
    }


def test_d0_finds_the_three_circuit_diagnoses(circuit, gamma1):
    got = circuit_symptom_candidates(circuit, gamma1)
    assert got == {
        (frozenset({("brk", 0)}), frozenset({"b"})),
        (frozenset({("srg", 0)}), frozenset({"r"})),
        (frozenset({("brk", 0), ("srg", 0)}), frozenset({"b", "r"})),
    }


def test_d1_prunes_actions_unrelated_to_the_symptom(circuit_extended):
    from conftest import gamma_1

    g = gamma_1(extra_comp_ok="c")
    d0 = circuit_symptom_candidates(circuit_extended, g, module="d0")
    d1 = circuit_symptom_candidates(circuit_extended, g, module="d1")
    three = {
        (frozenset({("brk", 0)}), frozenset({"b"})),
        (frozenset({("srg", 0)}), frozenset({"r"})),
        (frozenset({("brk", 0), ("srg", 0)}), frozenset({"b", "r"})),
    }
    assert d1 == three
    assert d0 > three
    extras = d0 - three
    assert extras and all(("a", 0) in e for e, _ in extras)


def test_d2_with_window_one_equals_d0_at_horizon_one(circuit, gamma1):
    assert circuit_symptom_candidates(circuit, gamma1, module="d2", window=1) == (
        circuit_symptom_candidates(circuit, gamma1, module="d0")
    )


def test_unknown_module_rejected(circuit):
    with pytest.raises(ValueError):
        dm(circuit, "d9", 1, 1)


# -- the k-cardinality cut ------------------------------------------------------


def test_k_cut_two_removes_only_the_two_action_diagnosis(circuit, gamma1):
    got = circuit_symptom_candidates(circuit, gamma1, max_actions=2)
    assert got == {
        (frozenset({("brk", 0)}), frozenset({"b"})),
        (frozenset({("srg", 0)}), frozenset({"r"})),
    }


def test_k_cut_one_removes_every_diagnosis(circuit, gamma1):
    assert circuit_symptom_candidates(circuit, gamma1, max_actions=1) == set()


def test_k_cut_above_the_action_count_changes_nothing(circuit, gamma1):
    assert circuit_symptom_candidates(circuit, gamma1, max_actions=5) == (
        circuit_symptom_candidates(circuit, gamma1)
    )


def test_k_cut_shape():
    r = k_cut(2, 0, ("brk", "srg"))
    assert isinstance(r.head, CardinalityBound)
    assert r.head.upper == 1 and r.head.lower is None
    assert r.head.elements == (frozenset((o("brk", 0),)), frozenset((o("srg", 0),)))
    with pytest.raises(ValueError):
        k_cut(0, 0, ("brk",))


# -- the direct encoding ---------------------------------------------------------


def test_alpha_d_dynamic_law_shape():
    sig = signature(fluents=[CLOSED_S1], agent_actions=[CLOSE_S1])
    sd = ActionDescription(sig, (dynamic_law("law_1", CLOSE_S1, flit(CLOSED_S1)),))
    p = alpha_d_program(sd, history(1))
    assert rule(h(flit(CLOSED_S1), 1), pos=[o(CLOSE_S1, 0)]) in p.rules


def test_alpha_d_unconditional_static_law():
    sig = signature(fluents=["f"], agent_actions=["go"])
    sd = ActionDescription(sig, (static_law("law_1", flit("f")),))
    p = alpha_d_program(sd, history(1))
    assert fact(h(flit("f"), 0)) in p.rules
    assert fact(h(flit("f"), 1)) in p.rules


def _ho_projection(x):
    return frozenset(l for l in x if l.atom.pred in ("h", "o"))


def test_alpha_and_alpha_d_agree_on_h_and_o(circuit, gamma1):
    a = enumerate_answer_sets(alpha_program(circuit, gamma1, include_awareness=True))
    d = enumerate_answer_sets(alpha_d_program(circuit, gamma1, include_awareness=True))
    assert {_ho_projection(x) for x in a} == {_ho_projection(x) for x in d}


# -- randomized correspondence (small corpus; the acceptance suite scales it up) --


def random_domain(rng: random.Random):
    n_fluents = rng.randint(1, 3)
    fluents = ["f%d" % i for i in range(n_fluents)]
    comps = ["c0"] if rng.random() < 0.5 else []
    fluents_all = fluents + [ab(c) for c in comps]
    agent = ["go"]
    exo = ["x%d" % i for i in range(rng.randint(0, 2))]
    sig = signature(
        components=comps,
        fluents=fluents_all,
        observable=fluents,
        agent_actions=agent,
        exogenous_actions=exo,
    )
    lits = [FLit(f, v) for f in fluents_all for v in (True, False)]
    laws = []
    for i in range(rng.randint(1, 4)):
        kind = rng.random()
        pre = rng.sample(lits, rng.randint(0, 2))
        if kind < 0.5:
            laws.append(
                dynamic_law("law_%d" % i, rng.choice(agent + exo), rng.choice(lits), pre)
            )
        elif kind < 0.85:
            laws.append(static_law("law_%d" % i, rng.choice(lits), pre))
        else:
            laws.append(impossibility("law_%d" % i, rng.choice(agent + exo), pre))
    return ActionDescription(sig, tuple(laws))


def random_history(rng: random.Random, sd, complete_initial: bool):
    from aldiag.semantics import states

    n = rng.randint(1, 2)
    all_states = states(sd)
    if not all_states:
        init = [(FLit(f, rng.random() < 0.5), 0) for f in sd.signature.fluents]
    elif complete_initial:
        init = [(l, 0) for l in rng.choice(all_states)]
    else:
        s = rng.choice(all_states)
        init = [(l, 0) for l in rng.sample(sorted(s, key=lambda x: x.key()), rng.randint(0, len(s)))]
    occ = []
    for t in range(n):
        for a in sd.signature.actions:
            if rng.random() < 0.4:
                occ.append((a, t))
    return history(n, init, occ)


@pytest.mark.parametrize("seed", range(30))
def test_random_model_correspondence(seed):
    rng = random.Random(seed)
    sd = random_domain(rng)
    complete = seed % 2 == 0
    g = random_history(rng, sd, complete_initial=complete)
    p = alpha_program(sd, g, include_awareness=not complete)
    defined = {defined_trajectory(x, g.horizon) for x in enumerate_answer_sets(p)}
    assert defined == set(models_of_history(sd, g))
