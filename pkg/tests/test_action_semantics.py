from __future__ import annotations

import random
from itertools import combinations

import pytest

from aldiag.action import (
    ActionDescription,
    DomainError,
    FLit,
    ab,
    dynamic_law,
    flit,
    history,
    signature,
    static_law,
)
from aldiag.semantics import (
    InconsistentHistoryError,
    closure,
    direct_effects,
    entails,
    is_sound_history,
    is_state,
    models_of_history,
    states,
    successors,
)
from aldiag.terms import func

from conftest import (
    AB_B,
    AB_R,
    ACTIVE_R,
    CLOSE_S1,
    CLOSED_S1,
    CLOSED_S2,
    ON_B,
    PROT_B,
    sigma0,
    sigma1,
)

# -- closure ---------------------------------------------------------------


def test_closure_chains_through_static_laws(circuit):
    got = closure({flit(CLOSED_S1), flit(AB_R, False)}, circuit)
    assert got == {
        flit(CLOSED_S1),
        flit(AB_R, False),
        flit(ACTIVE_R),
        flit(CLOSED_S2),
    }


def test_closure_adds_s2_after_activation(circuit):
    got = closure({flit(CLOSED_S1), flit(AB_R, False), flit(ACTIVE_R)}, circuit)
    assert flit(CLOSED_S2) in got


def test_closure_fixes_states_and_empty_set(circuit):
    assert closure(sigma0(), circuit) == sigma0()
    assert closure(set(), circuit) == set()


def test_closure_monotone_and_idempotent(circuit):
    rng = random.Random(7)
    lits = list(circuit.signature.fluent_literals())
    for _ in range(40):
        s = frozenset(rng.sample(lits, rng.randint(0, 6)))
        c = closure(s, circuit)
        assert s <= c
        assert closure(c, circuit) == c


# -- direct effects ----------------------------------------------------------


def test_close_s1_causes_closed_s1(circuit):
    assert direct_effects({CLOSE_S1}, sigma0(), circuit) == {flit(CLOSED_S1)}


def test_surge_spares_protected_bulb(circuit):
    assert direct_effects({"srg"}, sigma0(protected=True), circuit) == {flit(AB_R)}
    assert direct_effects({"srg"}, sigma0(protected=False), circuit) == {
        flit(AB_R),
        flit(AB_B),
    }


def test_empty_action_has_no_effects(circuit):
    assert direct_effects(set(), sigma0(), circuit) == frozenset()


def test_undeclared_action_rejected(circuit):
    with pytest.raises(ValueError):
        direct_effects({"explode"}, sigma0(), circuit)


# -- successors --------------------------------------------------------------


def test_close_s1_turns_the_bulb_on(circuit):
    got = successors(sigma0(), {CLOSE_S1}, circuit)
    assert got == (sigma1(),)
    s1 = got[0]
    assert flit(CLOSED_S1) in s1 and flit(ACTIVE_R) in s1
    assert flit(CLOSED_S2) in s1 and flit(ON_B) in s1


def test_reclosing_a_closed_switch_is_impossible(circuit):
    assert successors(sigma1(), {CLOSE_S1}, circuit) == ()


def test_empty_action_is_inertia(circuit):
    assert successors(sigma0(), set(), circuit) == (sigma0(),)


def test_every_successor_satisfies_the_fixpoint_equation(circuit):
    rng = random.Random(3)
    acts = list(circuit.signature.actions)
    for s in states(circuit):
        for _ in range(3):
            a = frozenset(rng.sample(acts, rng.randint(0, 2)))
            for nxt in successors(s, a, circuit):
                assert is_state(nxt, circuit)
                eff = direct_effects(a, s, circuit)
                assert closure(eff | (s & nxt), circuit) == nxt


def test_circuit_description_is_deterministic(circuit):
    """Every (state, compound action) pair has at most one successor."""
    acts = list(circuit.signature.actions)
    compounds = [
        frozenset(c) for k in range(len(acts) + 1) for c in combinations(acts, k)
    ]
    for s in states(circuit):
        for a in compounds:
            assert len(successors(s, a, circuit)) <= 1


# -- models of a history -----------------------------------------------------


def test_gamma1_has_exactly_one_model(circuit, gamma1):
    models = models_of_history(circuit, gamma1)
    assert len(models) == 1
    m = models[0]
    assert m.states == (sigma0(), sigma1())
    assert m.actions == (frozenset({CLOSE_S1}),)


def test_contradictory_observations_have_no_model(circuit):
    g = history(0, [(flit(ON_B), 0), (flit(ON_B, False), 0)])
    assert models_of_history(circuit, g) == ()


def test_unexpected_darkness_has_no_model(circuit, gamma1):
    g = gamma1.merged(1, observations=[(flit(ON_B, False), 1)])
    assert models_of_history(circuit, g) == ()


def test_models_satisfy_the_history_by_recheck(circuit, gamma1):
    for m in models_of_history(circuit, gamma1):
        for l, t in gamma1.observations:
            assert l in m.state(t)
        for t in range(gamma1.horizon):
            assert m.actions[t] == gamma1.actions_at(t)


# -- entailment ---------------------------------------------------------------


def test_gamma1_entails_the_bulb_turning_on(circuit, gamma1):
    assert entails(circuit, gamma1, flit(ON_B), 1)
    assert not entails(circuit, gamma1, flit(AB_B), 1)


def test_observed_literals_are_entailed(circuit, gamma1):
    assert entails(circuit, gamma1, flit(PROT_B), 0)


def test_entailment_on_inconsistent_history_raises(circuit):
    g = history(0, [(flit(ON_B), 0), (flit(ON_B, False), 0)])
    with pytest.raises(InconsistentHistoryError):
        entails(circuit, g, flit(ON_B), 0)


# -- soundness ----------------------------------------------------------------


def test_gamma1_is_sound_for_the_faultless_world(circuit, gamma1):
    (m,) = models_of_history(circuit, gamma1)
    assert is_sound_history(gamma1, m)


def test_empty_history_is_vacuously_sound(circuit, gamma1):
    (m,) = models_of_history(circuit, gamma1)
    assert is_sound_history(history(0), m)


def test_unrecorded_claim_is_unsound(circuit, gamma1):
    (m,) = models_of_history(circuit, gamma1)
    claimed = gamma1.with_occurrences([("brk", 0)])
    assert not is_sound_history(claimed, m)


# -- domain validation ----------------------------------------------------------


def test_signature_requires_observable_ab_fluents():
    with pytest.raises(DomainError):
        # ab(c) missing from the fluents entirely
        signature(components=["c"], fluents=[func("f")])


def test_duplicate_law_names_rejected():
    sig = signature(components=["c"], fluents=[ab("c"), "f"], exogenous_actions=["x"])
    laws = (
        dynamic_law("d", "x", flit(ab("c"))),
        static_law("d", flit("f"), [flit(ab("c"))]),
    )
    with pytest.raises(DomainError):
        ActionDescription(sig, laws)


def test_undeclared_fluent_in_law_rejected():
    sig = signature(components=["c"], fluents=[ab("c")], exogenous_actions=["x"])
    with pytest.raises(DomainError):
        ActionDescription(sig, (dynamic_law("d", "x", flit("ghost")),))


def test_repair_augmentation_is_idempotent(circuit):
    full = circuit.with_repair_actions()
    assert full.with_repair_actions() is full
    assert func("repair", "b") in full.signature.agent_actions
    heads = {(l.action, l.head) for l in full.dynamic_laws}
    assert (func("repair", "b"), flit(AB_B, False)) in heads
    assert (func("repair", "r"), flit(AB_R, False)) in heads


def test_breakage_partition_matches_the_fault_model(circuit):
    breakage = {l.name for l in circuit.breakage_laws}
    assert breakage == {
        "brk_bulb",
        "srg_relay",
        "srg_bulb",
        "bulb_off_ab",
        "relay_inactive_ab",
    }
    assert {l.name for l in circuit.normal_laws} == {
        "close_s1",
        "relay_active",
        "relay_closes_s2",
        "bulb_on",
        "bulb_off_open",
        "no_reclose",
    }
