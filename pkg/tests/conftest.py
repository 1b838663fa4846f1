"""Shared fixtures: the relay-and-bulb circuit domain used across the suite."""
from __future__ import annotations

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
from aldiag.terms import func

CLOSE_S1 = func("close", "s1")
CLOSED_S1 = func("closed", "s1")
CLOSED_S2 = func("closed", "s2")
ACTIVE_R = func("active", "r")
ON_B = func("on", "b")
PROT_B = func("prot", "b")
AB_R = ab("r")
AB_B = ab("b")


def circuit_signature(extra_comp=None, extra_action=None):
    comps = ["r", "b"] + ([extra_comp] if extra_comp else [])
    fluents = [ACTIVE_R, ON_B, PROT_B, CLOSED_S1, CLOSED_S2] + [ab(c) for c in comps]
    exo = ["brk", "srg"] + ([extra_action] if extra_action else [])
    return signature(
        components=comps,
        fluents=fluents,
        observable=[ON_B, PROT_B, CLOSED_S1, CLOSED_S2],
        agent_actions=[CLOSE_S1],
        exogenous_actions=exo,
    )


def circuit_laws():
    return [
        dynamic_law("close_s1", CLOSE_S1, flit(CLOSED_S1)),
        static_law("relay_active", flit(ACTIVE_R), [flit(CLOSED_S1), flit(AB_R, False)]),
        static_law("relay_closes_s2", flit(CLOSED_S2), [flit(ACTIVE_R)]),
        static_law("bulb_on", flit(ON_B), [flit(CLOSED_S2), flit(AB_B, False)]),
        static_law("bulb_off_open", flit(ON_B, False), [flit(CLOSED_S2, False)]),
        impossibility("no_reclose", CLOSE_S1, [flit(CLOSED_S1)]),
        dynamic_law("brk_bulb", "brk", flit(AB_B)),
        dynamic_law("srg_relay", "srg", flit(AB_R)),
        dynamic_law("srg_bulb", "srg", flit(AB_B), [flit(PROT_B, False)]),
        static_law("bulb_off_ab", flit(ON_B, False), [flit(AB_B)]),
        static_law("relay_inactive_ab", flit(ACTIVE_R, False), [flit(AB_R)]),
    ]


@pytest.fixture(scope="session")
def circuit():
    """The circuit system description (no repair actions)."""
    return ActionDescription(circuit_signature(), tuple(circuit_laws()))


@pytest.fixture(scope="session")
def circuit_extended():
    """The circuit extended by an unrelated component c and breaking action a."""
    sig = circuit_signature(extra_comp="c", extra_action="a")
    laws = circuit_laws() + [dynamic_law("a_breaks_c", "a", flit(ab("c")))]
    return ActionDescription(sig, tuple(laws))


def gamma_1(protected=True, extra_comp_ok=None):
    """The initial recorded history: switches open, components fine, close(s1)."""
    obs = [
        (flit(CLOSED_S1, False), 0),
        (flit(CLOSED_S2, False), 0),
        (flit(AB_B, False), 0),
        (flit(AB_R, False), 0),
        (flit(PROT_B, protected), 0),
    ]
    if extra_comp_ok:
        obs.append((flit(ab(extra_comp_ok), False), 0))
    return history(1, obs, [(CLOSE_S1, 0)])


@pytest.fixture(scope="session")
def gamma1():
    return gamma_1(protected=True)


@pytest.fixture(scope="session")
def gamma1_unprotected():
    return gamma_1(protected=False)


def sigma0(protected=True):
    return frozenset(
        {
            flit(CLOSED_S1, False),
            flit(CLOSED_S2, False),
            flit(AB_B, False),
            flit(AB_R, False),
            flit(PROT_B, protected),
            flit(ON_B, False),
            flit(ACTIVE_R, False),
        }
    )


def sigma1(protected=True):
    return frozenset(
        {
            flit(CLOSED_S1),
            flit(CLOSED_S2),
            flit(AB_B, False),
            flit(AB_R, False),
            flit(PROT_B, protected),
            flit(ON_B),
            flit(ACTIVE_R),
        }
    )
