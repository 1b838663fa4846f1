"""The simulated device: the actual trajectory behind the agent's back.

The world holds the full system description (repair actions included), the
trajectory so far, and a script of exogenous occurrences that fire when
the corresponding time step is executed.  Scripted events are invisible to
the agent unless the scenario marks them observed.
"""
from __future__ import annotations

from typing import Iterable, Mapping

from .action import ActionDescription, FLit, Trajectory
from .semantics import closure, is_state, successors
from .terms import Func, Term, format_term, term_key


class WorldError(RuntimeError):
    pass


class WorldOracle:
    def __init__(
        self,
        sd: ActionDescription,
        initial: Iterable[FLit],
        script: Mapping[int, Iterable[Term]] | None = None,
        observed_exo: Iterable[tuple[Term, int]] = (),
    ):
        self.sd = sd.with_repair_actions()
        state = closure(initial, self.sd)
        if not is_state(state, self.sd):
            raise WorldError(
                "initial world state is not complete, consistent, and closed"
            )
        self._states: list[frozenset[FLit]] = [state]
        self._actions: list[frozenset[Term]] = []
        self.script = {int(t): frozenset(a) for t, a in (script or {}).items()}
        self.observed_exo = frozenset(observed_exo)
        self.nondeterministic_steps: list[int] = []

    @property
    def now(self) -> int:
        return len(self._states) - 1

    @property
    def trajectory(self) -> Trajectory:
        return Trajectory(tuple(self._states), tuple(self._actions))

    def state(self, t: int) -> frozenset[FLit]:
        return self._states[t]

    def observe(self, t: int, fluent: Term) -> FLit:
        """The value of an observable fluent in the t'th actual state."""
        if fluent not in self.sd.signature.observable:
            raise WorldError("fluent %s is not observable" % format_term(fluent))
        if not 0 <= t <= self.now:
            raise WorldError(
                "cannot observe time %d; world is at time %d" % (t, self.now)
            )
        return FLit(fluent, FLit(fluent) in self._states[t])

    def step(self, agent_action: Iterable[Term] = (), include_script: bool = True) -> None:
        """Execute one transition: the agent's action plus any scripted events."""
        combined = frozenset(agent_action)
        if include_script:
            combined |= self.script.get(self.now, frozenset())
        current = self._states[-1]
        nxt = successors(current, combined, self.sd)
        if not nxt:
            for law in self.sd.impossibility_laws:
                if law.action in combined and all(
                    p in current for p in law.preconditions
                ):
                    raise WorldError(
                        "action %s violates impossibility law %s"
                        % (format_term(law.action), law.name)
                    )
            raise WorldError(
                "no successor state for action {%s}"
                % ",".join(format_term(a) for a in sorted(combined, key=term_key))
            )
        if len(nxt) > 1:
            self.nondeterministic_steps.append(self.now)
        chosen = nxt[0]
        assert is_state(chosen, self.sd)
        self._actions.append(combined)
        self._states.append(chosen)

    def repair(self, components: Iterable[Term]) -> None:
        """One step executing the repairs, with the exogenous script suppressed."""
        comps = sorted(set(components), key=term_key)
        declared = set(self.sd.signature.components)
        for c in comps:
            if c not in declared:
                raise WorldError("cannot repair unknown component %s" % format_term(c))
        self.step(
            (Func("repair", (c,)) for c in comps), include_script=False
        )

    def replay_history(self, agent_actions_by_time: Mapping[int, Iterable[Term]], upto: int) -> None:
        """Advance the world to time ``upto`` by executing recorded agent actions."""
        while self.now < upto:
            self.step(agent_actions_by_time.get(self.now, ()))
