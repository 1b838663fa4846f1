"""Stable-model computation for ground programs.

``enumerate_answer_sets`` offers two engines that must agree:

* ``brute``  — enumerate every consistent subset of the head-literal
  universe and keep the stable ones; guarded by a size cap.
* ``search`` — complete backtracking search: branch on undecided head
  literals, propagate closure/support/consistency ("Clark-style" unit
  rules), and verify every full assignment with ``is_answer_set``.

Choice rules are expanded into their defeasible rule pairs before solving;
cardinality bounds are kept and evaluated semantically against candidate
literal sets.
"""
from __future__ import annotations

from itertools import product
from typing import Iterable

from .syntax import (
    AnswerSet,
    CardinalityBound,
    Choice,
    Lit,
    Program,
    Rule,
    answer_set_key,
    companion,
    is_consistent,
    is_hidden,
)

DEFAULT_BRUTE_CAP = 24


class BruteForceCapError(RuntimeError):
    def __init__(self, size: int, cap: int):
        super().__init__(
            "brute-force universe has %d candidate literals (cap %d); "
            "use the search engine" % (size, cap)
        )
        self.size = size
        self.cap = cap


def expand_extended_rules(program: Program) -> Program:
    """Compile choice rules into defeasible pairs plus bound constraints.

    ``{p(t) : q(t)} <- body`` becomes, per element,
    ``p(t) <- body, q(t), not c`` and ``c <- body, q(t), not p(t)`` where
    ``c`` is a fresh strong-negative companion literal (hidden from
    reported answer sets); bounds become a :class:`CardinalityBound`
    constraint over the guarded elements, gated by the same body.
    """
    out: list[Rule] = []
    for r in program.rules:
        if not isinstance(r.head, Choice):
            out.append(r)
            continue
        ch = r.head
        for a, g in ch.elements:
            guard = frozenset() if g is None else frozenset((g,))
            c = companion(a)
            out.append(Rule(Lit(a), r.pos | guard, r.naf | frozenset((c,))))
            out.append(Rule(c, r.pos | guard, r.naf | frozenset((Lit(a),))))
        if ch.lower > 0 or ch.upper is not None:
            elements = tuple(
                frozenset((Lit(a),)) if g is None else frozenset((Lit(a), g))
                for a, g in ch.elements
            )
            bound = CardinalityBound(elements, ch.lower or None, ch.upper)
            out.append(Rule(bound, r.pos, r.naf))
    return Program(tuple(out), program.signature)


def reduct(program: Program, x: Iterable[Lit]) -> Program:
    """The naf-free reduct of a basic program relative to x."""
    xs = frozenset(x)
    out = []
    for r in program.rules:
        if isinstance(r.head, (Choice, CardinalityBound)):
            raise ValueError("reduct is defined on basic rules; expand extended rules first")
        if any(l in xs for l in r.naf):
            continue
        out.append(Rule(r.head, r.pos, frozenset()))
    return Program(tuple(out), program.signature)


class _Compiled:
    """Integer-encoded program: literal ids, complements, occurrence indexes."""

    def __init__(self, program: Program):
        program = expand_extended_rules(program)
        self.program = program
        self.index: dict[Lit, int] = {}
        self.lits: list[Lit] = []
        for r in program.rules:
            for l in r.literals():
                self._intern(l)
        self.compl = [-1] * len(self.lits)
        for i, l in enumerate(self.lits):
            j = self.index.get(l.complement)
            if j is not None:
                self.compl[i] = j
        # Basic rules: (head, pos, naf); head == -1 encodes falsum.
        self.rules: list[tuple[int, tuple[int, ...], tuple[int, ...]]] = []
        # Cardinality rules: (lower, upper, elements, pos, naf).
        self.cards: list[tuple[int | None, int | None, tuple[tuple[int, ...], ...],
                               tuple[int, ...], tuple[int, ...]]] = []
        for r in program.rules:
            posb = tuple(sorted(self.index[l] for l in r.pos))
            nafb = tuple(sorted(self.index[l] for l in r.naf))
            if isinstance(r.head, CardinalityBound):
                elems = tuple(
                    tuple(sorted(self.index[l] for l in e)) for e in r.head.elements
                )
                self.cards.append((r.head.lower, r.head.upper, elems, posb, nafb))
            else:
                head = -1 if r.head is None else self.index[r.head]
                self.rules.append((head, posb, nafb))
        n = len(self.lits)
        self.head_rules: list[list[int]] = [[] for _ in range(n)]
        self.pos_occ: list[list[int]] = [[] for _ in range(n)]
        self.naf_occ: list[list[int]] = [[] for _ in range(n)]
        for ri, (h, posb, nafb) in enumerate(self.rules):
            if h >= 0:
                self.head_rules[h].append(ri)
            for l in posb:
                self.pos_occ[l].append(ri)
            for l in nafb:
                self.naf_occ[l].append(ri)
        self.heads = sorted(
            {h for h, _, _ in self.rules if h >= 0}, key=lambda i: self.lits[i].key()
        )

    def _intern(self, l: Lit) -> int:
        i = self.index.get(l)
        if i is None:
            i = len(self.lits)
            self.index[l] = i
            self.lits.append(l)
        return i

    def decode(self, ids: Iterable[int]) -> frozenset[Lit]:
        return frozenset(self.lits[i] for i in ids)

    # -- stable-model check against a candidate set (of literal ids) -----

    def card_violated(self, xset: frozenset[int]) -> bool:
        for lower, upper, elems, posb, nafb in self.cards:
            if not all(l in xset for l in posb):
                continue
            if any(l in xset for l in nafb):
                continue
            n = sum(1 for e in elems if all(l in xset for l in e))
            if lower is not None and n < lower:
                return True
            if upper is not None and n > upper:
                return True
        return False

    def is_stable(self, xset: frozenset[int]) -> bool:
        """xset is the least set closed under the reduct and violates nothing."""
        if self.card_violated(xset):
            return False
        remaining: list[int] = []
        queue: list[int] = []
        active: list[bool] = []
        derived = [False] * len(self.lits)
        nderived = 0
        for ri, (h, posb, nafb) in enumerate(self.rules):
            act = not any(l in xset for l in nafb)
            active.append(act)
            remaining.append(len(posb))
            if not act:
                continue
            if h == -1:
                # Constraint of the reduct: body must not hold in xset.
                if all(l in xset for l in posb):
                    return False
                continue
            if not posb and not derived[h]:
                if h not in xset:
                    return False
                derived[h] = True
                nderived += 1
                queue.append(h)
        while queue:
            l = queue.pop()
            for ri in self.pos_occ[l]:
                if not active[ri]:
                    continue
                remaining[ri] -= 1
                if remaining[ri] == 0:
                    h = self.rules[ri][0]
                    if h == -1:
                        continue  # already checked against xset above
                    if not derived[h]:
                        if h not in xset:
                            return False
                        derived[h] = True
                        nderived += 1
                        queue.append(h)
        return nderived == len(xset)


def is_answer_set(program: Program, x: Iterable[Lit]) -> bool:
    """Check Gelfond-Lifschitz stability of a consistent literal set.

    Choice rules are expanded internally; when ``x`` omits the expansion's
    hidden companion literals their (uniquely determined) values are
    filled in before checking.
    """
    xs = frozenset(x)
    if not is_consistent(xs):
        raise ValueError("candidate answer set is inconsistent")
    comp = _Compiled(program)
    ids = set()
    for l in xs:
        i = comp.index.get(l)
        if i is None:
            return False  # a literal foreign to the program is never derivable
        ids.add(i)
    if not any(is_hidden(l) for l in xs):
        # Companion bodies mention only visible literals, so their values
        # are determined by x.
        for h, posb, nafb in comp.rules:
            if h >= 0 and is_hidden(comp.lits[h]):
                if all(p in ids for p in posb) and not any(n in ids for n in nafb):
                    ids.add(h)
    return comp.is_stable(frozenset(ids))


UNKNOWN, IN, OUT = -1, 1, 0


class _Search:
    """Backtracking enumeration with unit propagation over compiled rules."""

    def __init__(self, comp: _Compiled):
        self.c = comp
        n = len(comp.lits)
        self.assign = [UNKNOWN] * n
        self.dead = [False] * len(comp.rules)
        self.alive = [len(comp.head_rules[i]) for i in range(n)]
        self.trail: list[tuple[str, int]] = []
        self.queue: list[int] = []
        self.models: list[frozenset[int]] = []
        head_set = set(comp.heads)
        self.branch_order = [i for i in comp.heads]
        self.non_heads = [i for i in range(n) if i not in head_set]

    # -- assignment with trail ---------------------------------------

    def _set(self, lit: int, value: int) -> bool:
        cur = self.assign[lit]
        if cur != UNKNOWN:
            return cur == value
        self.assign[lit] = value
        self.trail.append(("a", lit))
        self.queue.append(lit)
        return True

    def _kill(self, ri: int) -> bool:
        """Mark a rule dead (its body can no longer hold). False on conflict."""
        if self.dead[ri]:
            return True
        self.dead[ri] = True
        self.trail.append(("d", ri))
        h = self.c.rules[ri][0]
        if h >= 0:
            self.alive[h] -= 1
            self.trail.append(("s", h))
            if self.alive[h] == 0 and self.assign[h] == IN:
                return False
            if self.alive[h] == 0 and self.assign[h] == UNKNOWN:
                return self._set(h, OUT)
            if self.alive[h] == 1 and self.assign[h] == IN:
                return self._force_sole_support(h)
        return True

    def _rule_state(self, ri: int):
        """(satisfied, unassigned positive ids, unassigned naf ids, dead)."""
        h, posb, nafb = self.c.rules[ri]
        up, un = [], []
        for l in posb:
            v = self.assign[l]
            if v == OUT:
                return None
            if v == UNKNOWN:
                up.append(l)
        for l in nafb:
            v = self.assign[l]
            if v == IN:
                return None
            if v == UNKNOWN:
                un.append(l)
        return up, un

    def _force_sole_support(self, h: int) -> bool:
        for ri in self.c.head_rules[h]:
            if self.dead[ri]:
                continue
            state = self._rule_state(ri)
            if state is None:
                continue  # will be killed by pending propagation
            up, un = state
            for l in up:
                if not self._set(l, IN):
                    return False
            for l in un:
                if not self._set(l, OUT):
                    return False
            return True
        return True

    def _check_rule(self, ri: int) -> bool:
        if self.dead[ri]:
            return True
        state = self._rule_state(ri)
        if state is None:
            return self._kill(ri)
        up, un = state
        h = self.c.rules[ri][0]
        if not up and not un:
            # Body holds: fire the head / reject the constraint.
            if h == -1:
                return False
            if self.assign[h] == OUT:
                return False
            return self._set(h, IN)
        must_block = h == -1 or (h >= 0 and self.assign[h] == OUT)
        if must_block and len(up) + len(un) == 1:
            if up:
                return self._set(up[0], OUT)
            return self._set(un[0], IN)
        return True

    def _propagate(self) -> bool:
        while True:
            if not self._drain():
                self.queue.clear()  # stale entries must not leak into siblings
                return False
            outs = self._atmost()
            if outs is None:
                self.queue.clear()
                return False
            if not outs:
                return True
            for l in outs:
                if not self._set(l, OUT):
                    self.queue.clear()
                    return False

    def _atmost(self) -> list[int] | None:
        """Upper bound on derivable literals under optimistic assumptions.

        A literal outside the bound can be in no stable model extending the
        current assignment: force it OUT.  An IN literal outside the bound
        is a conflict (its support would be unfounded); returns None then.
        """
        c = self.c
        remaining = [0] * len(c.rules)
        derived = [False] * len(c.lits)
        queue: list[int] = []
        for ri, (h, posb, nafb) in enumerate(c.rules):
            if h < 0 or self.dead[ri]:
                remaining[ri] = -1
                continue
            if any(self.assign[l] == OUT for l in posb) or any(
                self.assign[l] == IN for l in nafb
            ):
                remaining[ri] = -1
                continue
            remaining[ri] = len(posb)
            if not posb and not derived[h]:
                derived[h] = True
                queue.append(h)
        while queue:
            l = queue.pop()
            for ri in c.pos_occ[l]:
                if remaining[ri] <= 0:
                    continue
                remaining[ri] -= 1
                if remaining[ri] == 0:
                    h = c.rules[ri][0]
                    if not derived[h]:
                        derived[h] = True
                        queue.append(h)
        outs = []
        for l in self.branch_order:
            if not derived[l]:
                v = self.assign[l]
                if v == IN:
                    return None
                if v == UNKNOWN:
                    outs.append(l)
        return outs

    def _drain(self) -> bool:
        while self.queue:
            l = self.queue.pop()
            v = self.assign[l]
            cl = self.c.compl[l]
            if v == IN:
                if cl >= 0 and not self._set(cl, OUT):
                    return False
                if self.alive[l] == 0 and self.c.head_rules[l]:
                    return False
                if not self.c.head_rules[l]:
                    return False  # literal without any defining rule
                if self.alive[l] == 1 and not self._force_sole_support(l):
                    return False
                for ri in self.c.naf_occ[l]:
                    if not self._kill(ri):
                        return False
                for ri in self.c.pos_occ[l]:
                    if not self._check_rule(ri):
                        return False
                for ri in self.c.head_rules[l]:
                    if not self._check_rule(ri):
                        return False
            else:
                for ri in self.c.pos_occ[l]:
                    if not self._kill(ri):
                        return False
                for ri in self.c.naf_occ[l]:
                    if not self._check_rule(ri):
                        return False
                for ri in self.c.head_rules[l]:
                    if not self._check_rule(ri):
                        return False
        return True

    def _card_conflict(self) -> bool:
        """Early reject when an upper bound is already exceeded for sure."""
        for lower, upper, elems, posb, nafb in self.c.cards:
            if upper is None:
                continue
            if any(self.assign[l] == OUT for l in posb):
                continue
            if any(self.assign[l] == IN for l in nafb):
                continue
            if not all(self.assign[l] == IN for l in posb):
                continue
            if not all(self.assign[l] == OUT for l in nafb):
                continue
            n = sum(1 for e in elems if all(self.assign[l] == IN for l in e))
            if n > upper:
                return True
        return False

    def _undo_to(self, mark: int):
        while len(self.trail) > mark:
            kind, i = self.trail.pop()
            if kind == "a":
                self.assign[i] = UNKNOWN
            elif kind == "d":
                self.dead[i] = False
            else:
                self.alive[i] += 1

    def run(self, limit: int | None = None) -> list[frozenset[int]]:
        for l in self.non_heads:
            self.assign[l] = OUT  # nothing can ever derive these
        self.queue.extend(self.non_heads)
        self.trail.clear()
        # Evaluate every rule once so facts fire; the queue carries on from there.
        for ri in range(len(self.c.rules)):
            if not self._check_rule(ri):
                self.queue.clear()
                return self.models
        if self._propagate():
            self._explore(limit)
        return self.models

    def _pick_decision(self) -> int | None:
        """Prefer naf literals of rules whose positive body already holds:
        these are the genuine sources of nondeterminism; everything else
        follows by propagation once they are fixed."""
        for ri, (h, posb, nafb) in enumerate(self.c.rules):
            if self.dead[ri] or not nafb:
                continue
            if h >= 0 and self.assign[h] != UNKNOWN:
                continue
            if any(self.assign[l] != IN for l in posb):
                continue
            for l in nafb:
                if self.assign[l] == UNKNOWN:
                    return l
        for l in self.branch_order:
            if self.assign[l] == UNKNOWN:
                return l
        return None

    def _explore(self, limit: int | None) -> bool:
        """Depth-first enumeration; returns False when the limit is reached."""
        if limit is not None and len(self.models) >= limit:
            return False
        if self._card_conflict():
            return True
        decision = self._pick_decision()
        if decision is None:
            xset = frozenset(
                l for l in range(len(self.assign)) if self.assign[l] == IN
            )
            if self.c.is_stable(xset):
                self.models.append(xset)
                if limit is not None and len(self.models) >= limit:
                    return False
            return True
        for value in (IN, OUT):
            mark = len(self.trail)
            ok = self._set(decision, value) and self._propagate()
            if ok and not self._explore(limit):
                return False
            self._undo_to(mark)
        return True


def _brute(comp: _Compiled, cap: int) -> list[frozenset[int]]:
    universe = comp.heads
    if len(universe) > cap:
        raise BruteForceCapError(len(universe), cap)
    # Enumerate consistent subsets only: complementary head pairs are
    # three-valued (neither / positive / negative), loners two-valued.
    uset = set(universe)
    pairs, singles, seen = [], [], set()
    for l in universe:
        if l in seen:
            continue
        seen.add(l)
        cl = comp.compl[l]
        if cl >= 0 and cl in uset and cl not in seen:
            seen.add(cl)
            pairs.append((l, cl))
        else:
            singles.append(l)
    options = [((), (a,), (b,)) for a, b in pairs] + [((), (a,)) for a in singles]
    models = []
    for combo in product(*options):
        xset = frozenset(l for group in combo for l in group)
        if comp.is_stable(xset):
            models.append(xset)
    return models


def enumerate_answer_sets(
    program: Program,
    engine: str = "search",
    brute_cap: int = DEFAULT_BRUTE_CAP,
    limit: int | None = None,
) -> list[AnswerSet]:
    """All answer sets, canonically ordered (lexicographic literal sets)."""
    comp = _Compiled(program)
    if engine == "brute":
        raw = _brute(comp, brute_cap)
    elif engine == "search":
        raw = _Search(comp).run(limit)
    else:
        raise ValueError("unknown engine %r (expected 'brute' or 'search')" % engine)
    seen = set()
    models = []
    for xset in raw:
        m = frozenset(l for l in comp.decode(xset) if not is_hidden(l))
        if m not in seen:
            seen.add(m)
            models.append(m)
    models.sort(key=answer_set_key)
    if limit is not None:
        models = models[:limit]
    return models


def has_answer_set(program: Program, engine: str = "search") -> bool:
    return bool(enumerate_answer_sets(program, engine=engine, limit=1))
