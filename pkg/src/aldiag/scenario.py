"""Scenario files: a system description, a history, and a scripted world.

Sections are introduced by ``%% name`` headers::

    %% system        declarations and causal laws
    %% history       obs(l,t). / hpd(a,t). records up to the horizon
    %% observations  post-symptom obs/hpd records
    %% world         actual_init(l). actual_occurs(a,t). observed_exo(a,t).
    %% config        key = value lines

System statements: ``comp(c).``, ``fluent(f).``, ``observable(f).``,
``a_act(a).``, ``x_act(a).``, ``causes(a, l, [l1, ...]).``,
``caused(l, [l1, ...]).``, ``impossible_if(a, [l1, ...]).``  Negative
fluent literals are written ``-f`` or ``neg(f)``.  Laws are named law_1,
law_2, ... in declaration order.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .action import (
    ActionDescription,
    FLit,
    Law,
    RecordedHistory,
    ab,
    dynamic_law,
    impossibility,
    signature,
    static_law,
    term_to_flit,
)
from .diagnose import Configuration, ObservationSet
from .logic.text import ParseError, _Parser
from .terms import Term, format_term, term_key
from .world import WorldOracle

SECTIONS = ("system", "history", "observations", "world", "config")


class ScenarioError(ValueError):
    pass


@dataclass
class ScenarioConfig:
    horizon: int = 1
    module: str = "d0"
    window: int = 1
    max_actions: int | None = None
    engine: str = "search"
    order: str = "lex"
    post_repair_obs: tuple[Term, ...] | None = None
    max_rounds: int = 8
    seed: int = 0


@dataclass
class Scenario:
    description: ActionDescription
    history: RecordedHistory
    observations: frozenset[tuple[FLit, int]]
    extra_occurrences: frozenset[tuple[Term, int]]
    world_init: frozenset[FLit]
    script: dict[int, frozenset[Term]]
    observed_exo: frozenset[tuple[Term, int]]
    config: ScenarioConfig = field(default_factory=ScenarioConfig)
    name: str = "scenario"

    def configuration(self) -> Configuration:
        m = max(
            [self.config.horizon]
            + [t for _, t in self.observations]
            + [t + 1 for _, t in self.extra_occurrences]
        )
        return Configuration(
            self.history,
            ObservationSet(m, self.observations, self.extra_occurrences),
        )

    def world(self) -> WorldOracle:
        w = WorldOracle(
            self.description,
            self.world_init,
            script=self.script,
            observed_exo=self.observed_exo,
        )
        agent = set(self.description.with_repair_actions().signature.agent_actions)
        by_time: dict[int, list[Term]] = {}
        for a, t in self.history.occurrences:
            if a in agent:
                by_time.setdefault(t, []).append(a)
        w.replay_history(by_time, self.history.horizon)
        m = self.configuration().m
        while w.now < m:
            w.step(())
        return w


def _split_sections(text: str) -> dict[str, tuple[str, int]]:
    sections: dict[str, list[str]] = {}
    starts: dict[str, int] = {}
    current: str | None = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if stripped.startswith("%%"):
            name = stripped[2:].strip().lower()
            if name not in SECTIONS:
                raise ScenarioError(
                    "unknown section %r (line %d); expected one of %s"
                    % (name, lineno, ", ".join(SECTIONS))
                )
            current = name
            sections.setdefault(name, [])
            starts.setdefault(name, lineno)
        elif current is None:
            if stripped and not stripped.startswith("%"):
                raise ScenarioError("statement before any %%%% section (line %d)" % lineno)
        else:
            sections[current].append(line)
    return {k: ("\n".join(v), starts[k]) for k, v in sections.items()}


class _ALParser(_Parser):
    """Statement-level parser for system/history/world sections."""

    def flit(self) -> FLit:
        return term_to_flit(self.term())

    def flit_list(self) -> list[FLit]:
        self.expect("[")
        out = []
        if not self.at("]"):
            out.append(self.flit())
            while self.at(","):
                self.next()
                out.append(self.flit())
        self.expect("]")
        return out

    def statements(self):
        while self.peek().kind != "eof":
            t = self.peek()
            if t.kind != "name":
                self.error("expected a statement")
            name = self.next().text
            self.expect("(")
            yield name, self._args(name)
            self.expect(")")
            self.expect(".")

    def _args(self, name: str):
        if name == "causes":
            a = self.term()
            self.expect(",")
            l = self.flit()
            self.expect(",")
            return (a, l, tuple(self.flit_list()))
        if name == "caused":
            l = self.flit()
            self.expect(",")
            return (l, tuple(self.flit_list()))
        if name == "impossible_if":
            a = self.term()
            self.expect(",")
            return (a, tuple(self.flit_list()))
        if name in ("obs", "actual_init"):
            l = self.flit()
            if self.at(","):
                self.next()
                return (l, self._int())
            return (l,)
        if name in ("hpd", "actual_occurs", "observed_exo"):
            a = self.term()
            self.expect(",")
            return (a, self._int())
        if name in ("comp", "fluent", "observable", "a_act", "x_act"):
            return (self.term(),)
        self.error("unknown statement %r" % name)

    def _int(self) -> int:
        t = self.peek()
        if t.kind != "int":
            self.error("expected a time point")
        return int(self.next().text)


def _parse_statements(section: tuple[str, int], where: str):
    text, start = section
    try:
        yield from _ALParser(text).statements()
    except ParseError as e:
        raise ScenarioError(
            "%s section: %s [file line %d]" % (where, e, start + e.line)
        ) from e


def _parse_config(text: str) -> ScenarioConfig:
    cfg = ScenarioConfig()
    for raw in text.splitlines():
        line = raw.split("%")[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ScenarioError("config line %r is not 'key = value'" % line)
        key, _, value = (s.strip() for s in line.partition("="))
        if key == "k":
            key = "max_actions"
        if key in ("horizon", "window", "max_actions", "max_rounds", "seed"):
            try:
                setattr(cfg, key, int(value))
            except ValueError:
                raise ScenarioError("config %s needs an integer, got %r" % (key, value))
        elif key in ("module", "engine", "order"):
            setattr(cfg, key, value.lower())
        elif key == "post_repair_obs":
            terms = []
            for part in value.split(","):
                part = part.strip()
                if part:
                    terms.append(_parse_term(part))
            cfg.post_repair_obs = tuple(terms)
        else:
            raise ScenarioError("unknown config key %r" % key)
    if cfg.module not in ("d0", "d1", "d2"):
        raise ScenarioError("config module must be d0, d1, or d2")
    if cfg.engine not in ("search", "brute"):
        raise ScenarioError("config engine must be search or brute")
    if cfg.order not in ("lex", "revlex"):
        raise ScenarioError("config order must be lex or revlex")
    return cfg


def _parse_term(text: str) -> Term:
    p = _ALParser(text)
    t = p.term()
    if p.peek().kind != "eof":
        p.error("trailing input after term")
    return t


def parse_scenario(text: str, name: str = "scenario") -> Scenario:
    sections = _split_sections(text)
    if "system" not in sections:
        raise ScenarioError("missing %% system section")
    comps, fluents, observable = [], [], []
    agent, exo = [], []
    laws: list[Law] = []

    def next_law_name() -> str:
        return "law_%d" % (len(laws) + 1)

    for stmt, args in _parse_statements(sections["system"], "system"):
        if stmt == "comp":
            comps.append(args[0])
        elif stmt == "fluent":
            fluents.append(args[0])
        elif stmt == "observable":
            observable.append(args[0])
        elif stmt == "a_act":
            agent.append(args[0])
        elif stmt == "x_act":
            exo.append(args[0])
        elif stmt == "causes":
            laws.append(dynamic_law(next_law_name(), args[0], args[1], args[2]))
        elif stmt == "caused":
            laws.append(static_law(next_law_name(), args[0], args[1]))
        elif stmt == "impossible_if":
            laws.append(impossibility(next_law_name(), args[0], args[1]))
        else:
            raise ScenarioError("statement %s(...) not allowed in system section" % stmt)
    sig = signature(comps, fluents, observable, agent, exo)
    try:
        sd = ActionDescription(sig, tuple(laws))
    except ValueError as e:
        raise ScenarioError("system section: %s" % e) from e

    config = _parse_config(sections.get("config", ("", 0))[0])

    hist_obs: list[tuple[FLit, int]] = []
    hist_occ: list[tuple[Term, int]] = []
    for stmt, args in _parse_statements(sections.get("history", ("", 0)), "history"):
        if stmt == "obs" and len(args) == 2:
            hist_obs.append(args)
        elif stmt == "hpd":
            hist_occ.append(args)
        else:
            raise ScenarioError("history section accepts obs(l,t). and hpd(a,t). only")

    post_obs: list[tuple[FLit, int]] = []
    post_occ: list[tuple[Term, int]] = []
    for stmt, args in _parse_statements(
        sections.get("observations", ("", 0)), "observations"
    ):
        if stmt == "obs" and len(args) == 2:
            post_obs.append(args)
        elif stmt == "hpd":
            post_occ.append(args)
        else:
            raise ScenarioError("observations section accepts obs(l,t). and hpd(a,t). only")

    init: list[FLit] = []
    script: dict[int, set[Term]] = {}
    observed: list[tuple[Term, int]] = []
    for stmt, args in _parse_statements(sections.get("world", ("", 0)), "world"):
        if stmt == "actual_init" and len(args) == 1:
            init.append(args[0])
        elif stmt == "actual_occurs":
            script.setdefault(args[1], set()).add(args[0])
        elif stmt == "observed_exo":
            observed.append(args)
        else:
            raise ScenarioError(
                "world section accepts actual_init(l)., actual_occurs(a,t)., observed_exo(a,t)."
            )
    for a, t in observed:
        if a not in script.get(t, set()):
            raise ScenarioError(
                "observed_exo(%s,%d) has no matching actual_occurs" % (format_term(a), t)
            )
        if (a, t) not in hist_occ:
            hist_occ.append((a, t))

    try:
        hist = RecordedHistory(config.horizon, frozenset(hist_obs), frozenset(hist_occ))
    except ValueError as e:
        raise ScenarioError("history section: %s" % e) from e
    _check_declared(sd, hist_obs + post_obs, hist_occ + post_occ, init, script)

    scenario = Scenario(
        description=sd,
        history=hist,
        observations=frozenset(post_obs),
        extra_occurrences=frozenset(post_occ),
        world_init=frozenset(init),
        script={t: frozenset(s) for t, s in script.items()},
        observed_exo=frozenset(observed),
        config=config,
        name=name,
    )
    scenario.configuration()  # validate the record windows now
    return scenario


def _check_declared(sd, observations, occurrences, init, script):
    fl = set(sd.signature.fluents)
    acts = set(sd.with_repair_actions().signature.actions)
    for l, *_ in list(observations) + [(l,) for l in init]:
        if l.fluent not in fl:
            raise ScenarioError("undeclared fluent %s" % format_term(l.fluent))
    for a, _ in occurrences:
        if a not in acts:
            raise ScenarioError("undeclared action %s" % format_term(a))
    for t, actions in script.items():
        for a in actions:
            if a not in acts:
                raise ScenarioError("undeclared scripted action %s" % format_term(a))


# -- canonical pretty-printing ---------------------------------------------


def _fmt_flit(l: FLit) -> str:
    return format_term(l.fluent) if l.positive else "-" + format_term(l.fluent)


def _fmt_law(law: Law) -> str:
    pre = "[%s]" % ", ".join(_fmt_flit(p) for p in law.preconditions)
    if law.kind == "dynamic":
        return "causes(%s, %s, %s)." % (format_term(law.action), _fmt_flit(law.head), pre)
    if law.kind == "static":
        return "caused(%s, %s)." % (_fmt_flit(law.head), pre)
    return "impossible_if(%s, %s)." % (format_term(law.action), pre)


def format_scenario(s: Scenario) -> str:
    sig = s.description.signature
    lines = ["%% system"]
    lines += ["comp(%s)." % format_term(c) for c in sig.components]
    lines += ["fluent(%s)." % format_term(f) for f in sig.fluents]
    auto_obs = {ab(c) for c in sig.components}
    lines += [
        "observable(%s)." % format_term(f)
        for f in sig.observable
        if f not in auto_obs
    ]
    lines += ["a_act(%s)." % format_term(a) for a in sig.agent_actions]
    lines += ["x_act(%s)." % format_term(a) for a in sig.exogenous_actions]
    lines += [_fmt_law(law) for law in s.description.laws]

    def record_lines(obs, occ):
        out = [
            "obs(%s, %d)." % (_fmt_flit(l), t)
            for l, t in sorted(obs, key=lambda p: (p[1], p[0].key()))
        ]
        out += [
            "hpd(%s, %d)." % (format_term(a), t)
            for a, t in sorted(occ, key=lambda p: (p[1], term_key(p[0])))
        ]
        return out

    lines += ["", "%% history"] + record_lines(s.history.observations, s.history.occurrences)
    if s.observations or s.extra_occurrences:
        lines += ["", "%% observations"] + record_lines(s.observations, s.extra_occurrences)
    lines += ["", "%% world"]
    lines += [
        "actual_init(%s)." % _fmt_flit(l)
        for l in sorted(s.world_init, key=lambda l: l.key())
    ]
    for t in sorted(s.script):
        for a in sorted(s.script[t], key=term_key):
            lines.append("actual_occurs(%s, %d)." % (format_term(a), t))
    for a, t in sorted(s.observed_exo, key=lambda p: (p[1], term_key(p[0]))):
        lines.append("observed_exo(%s, %d)." % (format_term(a), t))
    cfg = s.config
    lines += ["", "%% config", "horizon = %d" % cfg.horizon, "module = %s" % cfg.module]
    if cfg.window != 1:
        lines.append("window = %d" % cfg.window)
    if cfg.max_actions is not None:
        lines.append("max_actions = %d" % cfg.max_actions)
    if cfg.engine != "search":
        lines.append("engine = %s" % cfg.engine)
    if cfg.order != "lex":
        lines.append("order = %s" % cfg.order)
    if cfg.post_repair_obs is not None:
        lines.append(
            "post_repair_obs = %s" % ", ".join(format_term(f) for f in cfg.post_repair_obs)
        )
    if cfg.max_rounds != 8:
        lines.append("max_rounds = %d" % cfg.max_rounds)
    if cfg.seed:
        lines.append("seed = %d" % cfg.seed)
    return "\n".join(lines) + "\n"
