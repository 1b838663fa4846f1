"""Solver tests against a definition-level reference oracle.

The reference checker below implements the semantics literally: build the
reduct by deleting naf-blocked rules, then test minimality among closed
sets by enumerating every subset.  It shares no code with the solver's
fixpoint machinery.
"""
from __future__ import annotations

import random
from itertools import chain, combinations

import pytest

from aldiag.logic import (
    BruteForceCapError,
    CardinalityBound,
    Choice,
    Lit,
    Program,
    Rule,
    answer_set_key,
    atom,
    constraint,
    enumerate_answer_sets,
    expand_extended_rules,
    fact,
    is_answer_set,
    is_consistent,
    parse_program,
    pos,
    reduct,
    rule,
    sneg,
)

# -- reference oracle ----------------------------------------------------


def _subsets(items):
    items = list(items)
    return chain.from_iterable(combinations(items, k) for k in range(len(items) + 1))


def reference_is_answer_set(program: Program, x: frozenset[Lit]) -> bool:
    program = expand_extended_rules(program)
    for r in program.rules:
        if isinstance(r.head, CardinalityBound):
            if r.pos <= x and not (r.naf & x) and r.head.violated_by(x):
                return False
    red = [
        (r.head, r.pos)
        for r in program.rules
        if not isinstance(r.head, CardinalityBound) and not (r.naf & x)
    ]

    def closed(y: frozenset[Lit]) -> bool:
        for head, body in red:
            if body <= y:
                if head is None or head not in y:
                    return False
        return True

    if not closed(x):
        return False
    return not any(
        closed(frozenset(y)) for y in _subsets(x) if len(y) < len(x)
    )


def reference_answer_sets(program: Program) -> list[frozenset[Lit]]:
    from aldiag.logic.syntax import is_hidden

    expanded = expand_extended_rules(program)
    lits = sorted(expanded.literals(), key=lambda l: l.key())
    out = []
    for sub in _subsets(lits):
        x = frozenset(sub)
        if is_consistent(x) and reference_is_answer_set(expanded, x):
            visible = frozenset(l for l in x if not is_hidden(l))
            if visible not in out:
                out.append(visible)
    out.sort(key=answer_set_key)
    return out


def random_program(rng: random.Random, n_atoms=4, n_rules=6, naf_p=0.5,
                   strong_p=0.3, constraint_p=0.15) -> Program:
    lits = []
    for i in range(n_atoms):
        lits.append(pos("p%d" % i))
        if rng.random() < strong_p:
            lits.append(sneg("p%d" % i))
    rules = []
    for _ in range(n_rules):
        body_pos = frozenset(rng.sample(lits, rng.randint(0, min(2, len(lits)))))
        body_naf = frozenset(rng.sample(lits, rng.randint(0, min(2, len(lits)))))
        head = None if rng.random() < constraint_p else rng.choice(lits)
        rules.append(Rule(head, body_pos, body_naf))
    return Program(tuple(rules))


# -- reduct --------------------------------------------------------------


def test_reduct_keeps_rule_when_naf_literal_absent():
    p = Program((rule(pos("p"), naf=[pos("q")]),))
    r = reduct(p, {pos("p")})
    assert r.rules == (rule(pos("p")),)


def test_reduct_deletes_rule_when_naf_literal_present():
    p = Program((rule(pos("p"), naf=[pos("q")]),))
    assert reduct(p, {pos("q")}).rules == ()


def test_reduct_is_identity_on_naf_free_programs():
    p = Program((fact(pos("q", "a")), rule(pos("p"), pos=[pos("q", "a")])))
    for x in (frozenset(), frozenset({pos("q", "a")})):
        assert reduct(p, x).rules == p.rules


def test_reduct_rejects_unexpanded_choice():
    p = Program((Rule(Choice(((atom("p"), None),))),))
    with pytest.raises(ValueError):
        reduct(p, frozenset())


# -- is_answer_set -------------------------------------------------------


def test_facts_are_their_own_answer_set():
    p = Program((fact(pos("q", "a")),))
    assert is_answer_set(p, {pos("q", "a")})
    assert not is_answer_set(p, set())


def test_choice_program_has_both_answer_sets():
    p = parse_program("{p(X) : q(X)}. q(a).")
    assert is_answer_set(p, {pos("q", "a")})
    assert is_answer_set(p, {pos("p", "a"), pos("q", "a")})
    assert not is_answer_set(p, {pos("p", "a")})


def test_odd_negation_loop_has_no_answer_set():
    p = Program((rule(pos("p"), naf=[pos("p")]),))
    assert reference_answer_sets(p) == []
    for x in (frozenset(), frozenset({pos("p")})):
        assert not is_answer_set(p, x)


def test_inconsistent_candidate_is_a_contract_violation():
    p = Program((fact(pos("q")),))
    with pytest.raises(ValueError):
        is_answer_set(p, {pos("q"), sneg("q")})


# -- enumerate_answer_sets ----------------------------------------------


def test_empty_program_has_the_empty_answer_set():
    for engine in ("brute", "search"):
        assert enumerate_answer_sets(Program(()), engine=engine) == [frozenset()]


def test_choice_program_enumeration_matches_paper():
    p = parse_program("{p(X) : q(X)}. q(a).")
    expected = [
        frozenset({pos("p", "a"), pos("q", "a")}),
        frozenset({pos("q", "a")}),
    ]
    for engine in ("brute", "search"):
        got = enumerate_answer_sets(p, engine=engine)
        assert sorted(got, key=answer_set_key) == sorted(expected, key=answer_set_key)


def test_brute_cap_error_suggests_search():
    rules = tuple(fact(pos("p%d" % i)) for i in range(30))
    with pytest.raises(BruteForceCapError) as e:
        enumerate_answer_sets(Program(rules), engine="brute")
    assert "search" in str(e.value)


def test_unknown_engine_rejected():
    with pytest.raises(ValueError):
        enumerate_answer_sets(Program(()), engine="magic")


@pytest.mark.parametrize("seed", range(60))
def test_engines_agree_and_match_reference(seed):
    rng = random.Random(seed)
    p = random_program(rng, n_atoms=4 if seed % 3 else 6, n_rules=6 if seed % 3 else 8)
    ref = reference_answer_sets(p)
    brute = enumerate_answer_sets(p, engine="brute")
    search = enumerate_answer_sets(p, engine="search")
    assert brute == search == ref
    for x in search:
        assert is_consistent(x)
        # Closure: rules with satisfied bodies have their heads in x.
        for r in p.rules:
            if r.pos <= x and not (r.naf & x):
                assert r.head is not None and r.head in x


@pytest.mark.parametrize("seed", range(25))
def test_naf_free_programs_have_at_most_one_answer_set(seed):
    rng = random.Random(1000 + seed)
    p = random_program(rng, naf_p=0.0)
    p = Program(tuple(Rule(r.head, r.pos, frozenset()) for r in p.rules))
    assert len(enumerate_answer_sets(p, engine="search")) <= 1


# -- expand_extended_rules ------------------------------------------------


def test_choice_expansion_produces_the_defeasible_pair():
    from aldiag.logic.syntax import companion

    p = Program((Rule(Choice(((atom("o", "a", 0), pos("x_act", "a")),))),))
    expanded = expand_extended_rules(p)
    c = companion(atom("o", "a", 0))
    assert rule(pos("o", "a", 0), pos=[pos("x_act", "a")], naf=[c]) in expanded.rules
    assert rule(c, pos=[pos("x_act", "a")], naf=[pos("o", "a", 0)]) in expanded.rules


def test_choice_with_no_elements_generates_nothing():
    p = Program((Rule(Choice(())),))
    assert expand_extended_rules(p).rules == ()


def test_count_constraint_filters_exactly_the_large_sets():
    # :- 2 {o(a,0), o(b,0)} on top of a free choice over both atoms.
    oa, ob = pos("o", "a", 0), pos("o", "b", 0)
    base = Program(
        (
            Rule(Choice(((oa.atom, None), (ob.atom, None)))),
            Rule(CardinalityBound((frozenset((oa,)), frozenset((ob,))), None, 1)),
        )
    )
    free = Program(base.rules[:1])
    with_cut = enumerate_answer_sets(base, engine="brute")
    all_four = enumerate_answer_sets(free, engine="brute")
    assert len(all_four) == 4
    expected = [x for x in all_four if not (oa in x and ob in x)]
    assert with_cut == sorted(expected, key=answer_set_key)
    assert len(with_cut) == 3


def test_bounded_choice_respects_bounds():
    oa, ob = atom("o", "a", 0), atom("o", "b", 0)
    p = Program((Rule(Choice(((oa, None), (ob, None)), lower=1, upper=1)),))
    got = enumerate_answer_sets(p, engine="search")
    assert got == enumerate_answer_sets(p, engine="brute")
    assert sorted(len(x & {Lit(oa), Lit(ob)}) for x in got) == [1, 1]
