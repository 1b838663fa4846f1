"""Scenario execution: symptom check, diagnosis loop, trace, exit status.

Exit codes: 0 when the run resolves (or there was nothing to diagnose),
2 when no diagnosis survives testing (a modeling error is suspected),
1 for input errors (raised as exceptions; the CLI maps them).

The trace is line-oriented ``key=value`` text with a versioned header;
identical scenario + flags + seed yield byte-identical traces.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from importlib import resources
from typing import Iterable

from .diagnose import (
    HistoryInconsistentError,
    all_candidate_diags,
    diagnose,
    fold_into_history,
    is_symptom,
)
from .scenario import Scenario, ScenarioConfig, parse_scenario
from .terms import format_term

TRACE_HEADER = "aldiag-trace v1"

EXIT_RESOLVED = 0
EXIT_INPUT_ERROR = 1
EXIT_NO_DIAGNOSIS = 2


@dataclass
class RunResult:
    exit_code: int
    trace: list[str]
    summary: dict

    def render(self) -> str:
        return "\n".join(self.trace) + "\n"


def bundled_scenario_names() -> list[str]:
    root = resources.files("aldiag").joinpath("scenarios")
    return sorted(p.name[: -len(".scn")] for p in root.iterdir() if p.name.endswith(".scn"))


def load_scenario(path_or_name: str) -> Scenario:
    """Load a scenario from a file path or a bundled scenario name."""
    import os

    if os.path.exists(path_or_name):
        with open(path_or_name) as fh:
            text = fh.read()
        name = os.path.splitext(os.path.basename(path_or_name))[0]
        return parse_scenario(text, name=name)
    bundled = resources.files("aldiag").joinpath("scenarios", path_or_name + ".scn")
    if bundled.is_file():
        return parse_scenario(bundled.read_text(), name=path_or_name)
    raise FileNotFoundError(
        "no scenario file %r and no bundled scenario of that name (have: %s)"
        % (path_or_name, ", ".join(bundled_scenario_names()))
    )


def apply_overrides(config: ScenarioConfig, **overrides) -> ScenarioConfig:
    updates = {k: v for k, v in overrides.items() if v is not None}
    return replace(config, **updates)


def _fmt_occurrences(occ: Iterable) -> str:
    items = sorted(occ, key=lambda p: (p[1], str(p[0])))
    return ",".join("%s@%d" % (format_term(a), t) for a, t in items) or "none"


def _fmt_components(comps) -> str:
    return ",".join(sorted(format_term(c) for c in comps)) or "none"


def run_scenario(
    scenario: Scenario,
    all_candidates: bool = False,
    **overrides,
) -> RunResult:
    cfg = apply_overrides(scenario.config, **overrides)
    sd = scenario.description.with_repair_actions()
    config = scenario.configuration()
    trace: list[str] = [
        TRACE_HEADER,
        "scenario=%s seed=%d module=%s engine=%s order=%s"
        % (scenario.name, cfg.seed, cfg.module, cfg.engine, cfg.order),
    ]
    kw = dict(
        module=cfg.module,
        window=cfg.window,
        max_actions=cfg.max_actions,
        engine=cfg.engine,
        order=cfg.order,
    )

    try:
        symptom = is_symptom(sd, config, engine=cfg.engine)
    except HistoryInconsistentError as e:
        trace.append("symptom=error detail=%s" % str(e).replace(" ", "-"))
        trace.append("result status=history-inconsistent")
        return RunResult(
            EXIT_NO_DIAGNOSIS,
            trace,
            {"status": "history-inconsistent", "scenario": scenario.name},
        )
    trace.append("symptom=%s n=%d m=%d" % (str(symptom).lower(), config.n, config.m))
    if not symptom:
        trace.append("result status=not-a-symptom")
        return RunResult(
            EXIT_RESOLVED, trace, {"status": "not-a-symptom", "scenario": scenario.name}
        )

    if all_candidates:
        candidates = all_candidate_diags(sd, config, **kw)
        trace.append("candidates count=%d" % len(candidates))
        for d in candidates:
            trace.append(
                "candidate explanation=%s suspects=%s"
                % (_fmt_occurrences(d.explanation), _fmt_components(d.suspects))
            )

    world = scenario.world()
    repairs_before = sum(1 for line in trace if line.startswith("repair "))
    ok = diagnose(
        sd,
        config,
        world,
        post_repair_fluents=cfg.post_repair_obs,
        max_rounds=cfg.max_rounds,
        trace=trace.append,
        **kw,
    )
    repairs = [line for line in trace if line.startswith("repair ")]
    observation_count = len(config.history.observations) + len(
        config.observations.observations
    )
    if not ok:
        trace.append("result status=no-diagnosis")
        return RunResult(
            EXIT_NO_DIAGNOSIS,
            trace,
            {
                "status": "no-diagnosis",
                "scenario": scenario.name,
                "repairs": len(repairs) - repairs_before,
                "observations": observation_count,
            },
        )
    _, folded = fold_into_history(sd, config, engine=cfg.engine)
    explanation = _fmt_occurrences(config.explanation)
    repaired = sorted(
        {
            part
            for line in repairs
            for part in line.split()[1].removeprefix("components=").split(",")
        }
    )
    trace.append(
        "result status=resolved explanation=%s repairs=%s observations=%d folded=%s"
        % (explanation, ",".join(repaired) or "none", observation_count, str(folded).lower())
    )
    return RunResult(
        EXIT_RESOLVED,
        trace,
        {
            "status": "resolved",
            "scenario": scenario.name,
            "explanation": explanation,
            "repairs": repaired,
            "observations": observation_count,
            "folded": folded,
        },
    )
