"""HTTP service exposing the toolchain: solve, translate, models, diagnose,
run, and transform.  All endpoints are stateless; scenario text travels in
the request and results come back as JSON.
"""
from __future__ import annotations

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import __version__
from .diagnose import (
    HistoryInconsistentError,
    all_candidate_diags,
    configuration,
    is_symptom,
)
from .logic import (
    BruteForceCapError,
    ParseError,
    enumerate_answer_sets,
    format_answer_set,
    format_program,
    parse_literal,
    parse_program,
)
from .runner import run_scenario
from .scenario import ScenarioError, parse_scenario
from .semantics import models_of_history
from .terms import format_term
from .transforms import (
    SplitError,
    check_conservative_extension,
    run_partial_eval,
    run_trim,
    solve_by_splitting,
    split,
)
from .translate import alpha_d_program, alpha_program, diagnostic_program


class SolveRequest(BaseModel):
    program: str
    engine: str = "search"
    brute_cap: int = 24


class SolveResponse(BaseModel):
    answer_sets: list[str]
    count: int
    unsatisfiable: bool


class TranslateRequest(BaseModel):
    scenario: str
    target: str = "d0"  # alpha | alpha_d | conf | d0 | d1 | d2
    window: int = 1
    max_actions: int | None = None
    awareness: bool = True
    horizon: int | None = None


class TranslateResponse(BaseModel):
    program: str
    rules: int


class ModelsRequest(BaseModel):
    scenario: str


class TrajectoryModel(BaseModel):
    states: list[list[str]]
    actions: list[list[str]]


class ModelsResponse(BaseModel):
    models: list[TrajectoryModel]
    count: int


class DiagnoseRequest(BaseModel):
    scenario: str
    module: str | None = None
    window: int | None = None
    max_actions: int | None = None
    engine: str | None = None
    order: str | None = None
    all_candidates: bool = False


class DiagnosisModel(BaseModel):
    explanation: list[str]
    suspects: list[str]


class DiagnoseResponse(BaseModel):
    symptom: bool
    candidates: list[DiagnosisModel] | None = None
    resolved: bool | None = None
    diagnosis: DiagnosisModel | None = None
    trace: list[str]


class RunRequest(BaseModel):
    scenario: str
    name: str = "scenario"
    module: str | None = None
    window: int | None = None
    max_actions: int | None = None
    engine: str | None = None
    order: str | None = None
    seed: int | None = None
    all_candidates: bool = False


class RunResponse(BaseModel):
    exit_code: int
    trace: list[str]
    summary: dict


class TransformRequest(BaseModel):
    program: str
    operation: str  # partial_eval | trim | conservative_extension | split
    literals: list[str] = Field(default_factory=list)
    program2: str | None = None
    engine: str = "search"


class TransformResponse(BaseModel):
    report: str
    equivalent: bool
    output_program: str


app = FastAPI(
    title="aldiag",
    version=__version__,
    description="Answer-set based diagnosis of action-language system descriptions",
)


def _bad_request(e: Exception) -> HTTPException:
    return HTTPException(status_code=400, detail=str(e))


def handle_solve(req: SolveRequest) -> SolveResponse:
    try:
        program = parse_program(req.program)
        sets = enumerate_answer_sets(program, engine=req.engine, brute_cap=req.brute_cap)
    except (ParseError, BruteForceCapError, ValueError) as e:
        raise _bad_request(e)
    return SolveResponse(
        answer_sets=[format_answer_set(x) for x in sets],
        count=len(sets),
        unsatisfiable=not sets,
    )


def handle_translate(req: TranslateRequest) -> TranslateResponse:
    try:
        sc = parse_scenario(req.scenario)
    except (ScenarioError, ParseError) as e:
        raise _bad_request(e)
    sd = sc.description.with_repair_actions()
    config = sc.configuration()
    target = req.target.lower()
    try:
        if target == "alpha":
            program = alpha_program(
                sc.description, sc.history, horizon=req.horizon,
                include_awareness=req.awareness,
            )
        elif target == "alpha_d":
            program = alpha_d_program(
                sc.description, sc.history, horizon=req.horizon,
                include_awareness=req.awareness,
            )
        elif target in ("conf", "d0", "d1", "d2"):
            from .translate import conf as conf_program

            if target == "conf":
                program = conf_program(
                    sd, sc.history, config.observations.observations,
                    config.observations.occurrences, m=config.m,
                    horizon=req.horizon, include_awareness=req.awareness,
                )
            else:
                program = diagnostic_program(
                    sd, sc.history, config.observations.observations,
                    config.observations.occurrences, m=config.m, module=target,
                    window=req.window, max_actions=req.max_actions,
                    include_awareness=req.awareness,
                )
        else:
            raise ValueError(
                "unknown target %r (expected alpha, alpha_d, conf, d0, d1, d2)" % target
            )
    except ValueError as e:
        raise _bad_request(e)
    return TranslateResponse(program=format_program(program), rules=len(program.rules))


def handle_models(req: ModelsRequest) -> ModelsResponse:
    try:
        sc = parse_scenario(req.scenario)
    except (ScenarioError, ParseError) as e:
        raise _bad_request(e)
    models = models_of_history(sc.description, sc.history)
    payload = [
        TrajectoryModel(
            states=[sorted(repr(l) for l in s) for s in m.states],
            actions=[sorted(format_term(a) for a in acts) for acts in m.actions],
        )
        for m in models
    ]
    return ModelsResponse(models=payload, count=len(payload))


def _diagnosis_model(d) -> DiagnosisModel:
    return DiagnosisModel(
        explanation=sorted(
            "%s@%d" % (format_term(a), t) for a, t in d.explanation
        ),
        suspects=sorted(format_term(c) for c in d.suspects),
    )


def handle_diagnose(req: DiagnoseRequest) -> DiagnoseResponse:
    from .diagnose import diagnose as run_diagnose

    try:
        sc = parse_scenario(req.scenario)
    except (ScenarioError, ParseError) as e:
        raise _bad_request(e)
    cfg = sc.config
    module = req.module or cfg.module
    window = req.window if req.window is not None else cfg.window
    max_actions = req.max_actions if req.max_actions is not None else cfg.max_actions
    engine = req.engine or cfg.engine
    order = req.order or cfg.order
    sd = sc.description.with_repair_actions()
    config = sc.configuration()
    trace: list[str] = []
    try:
        symptom = is_symptom(sd, config, engine=engine)
    except HistoryInconsistentError as e:
        raise _bad_request(e)
    if not symptom:
        return DiagnoseResponse(symptom=False, trace=trace)
    candidates = None
    kw = dict(module=module, window=window, max_actions=max_actions, engine=engine, order=order)
    if req.all_candidates:
        candidates = [_diagnosis_model(d) for d in all_candidate_diags(sd, config, **kw)]
    world = sc.world()
    resolved = run_diagnose(
        sd, config, world, post_repair_fluents=cfg.post_repair_obs,
        max_rounds=cfg.max_rounds, trace=trace.append, **kw,
    )
    final = None
    if resolved and config.explanation:
        from .diagnose import CandidateDiagnosis

        repaired = frozenset(
            a.args[0]
            for a, _ in config.observations.occurrences
            if getattr(a, "name", None) == "repair"
        )
        final = _diagnosis_model(CandidateDiagnosis(config.explanation, repaired))
    return DiagnoseResponse(
        symptom=True,
        candidates=candidates,
        resolved=resolved,
        diagnosis=final,
        trace=trace,
    )


def handle_run(req: RunRequest) -> RunResponse:
    try:
        sc = parse_scenario(req.scenario, name=req.name)
        result = run_scenario(
            sc,
            all_candidates=req.all_candidates,
            module=req.module,
            window=req.window,
            max_actions=req.max_actions,
            engine=req.engine,
            order=req.order,
            seed=req.seed,
        )
    except (ScenarioError, ParseError, HistoryInconsistentError) as e:
        raise _bad_request(e)
    return RunResponse(exit_code=result.exit_code, trace=result.trace, summary=result.summary)


def handle_transform(req: TransformRequest) -> TransformResponse:
    try:
        program = parse_program(req.program)
        lits = [parse_literal(s) for s in req.literals]
        op = req.operation.lower()
        if op == "partial_eval":
            report = run_partial_eval(program, lits, engine=req.engine)
            return TransformResponse(
                report=report.render(),
                equivalent=report.equivalent,
                output_program=format_program(report.output_program),
            )
        if op == "trim":
            report = run_trim(program, lits, engine=req.engine)
            return TransformResponse(
                report=report.render(),
                equivalent=report.equivalent,
                output_program=format_program(report.output_program),
            )
        if op == "conservative_extension":
            if req.program2 is None:
                raise ValueError("conservative_extension needs program2 (the smaller program)")
            small = parse_program(req.program2)
            q = lits or sorted(
                program.literals() - small.literals(), key=lambda l: l.key()
            )
            rep = check_conservative_extension(program, small, q, engine=req.engine)
            witness = "" if rep.witness is None else " witness=" + format_answer_set(rep.witness)
            return TransformResponse(
                report="operation=conservative_extension holds=%s detail=%s%s"
                % (str(rep.holds).lower(), rep.detail, witness),
                equivalent=rep.holds,
                output_program=format_program(small),
            )
        if op == "split":
            s = frozenset(lits) | frozenset(l.complement for l in lits)
            bottom, top = split(program, s)
            recomposed = solve_by_splitting(program, s, engine=req.engine)
            direct = enumerate_answer_sets(program, engine=req.engine)
            return TransformResponse(
                report="operation=split bottom_rules=%d top_rules=%d recomposition=%s"
                % (len(bottom.rules), len(top.rules), str(recomposed == direct).lower()),
                equivalent=recomposed == direct,
                output_program=format_program(bottom),
            )
        raise ValueError("unknown operation %r" % op)
    except (ParseError, SplitError, ValueError) as e:
        raise _bad_request(e)


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.post("/solve", response_model=SolveResponse)
def solve_endpoint(req: SolveRequest) -> SolveResponse:
    return handle_solve(req)


@app.post("/translate", response_model=TranslateResponse)
def translate_endpoint(req: TranslateRequest) -> TranslateResponse:
    return handle_translate(req)


@app.post("/models", response_model=ModelsResponse)
def models_endpoint(req: ModelsRequest) -> ModelsResponse:
    return handle_models(req)


@app.post("/diagnose", response_model=DiagnoseResponse)
def diagnose_endpoint(req: DiagnoseRequest) -> DiagnoseResponse:
    return handle_diagnose(req)


@app.post("/run", response_model=RunResponse)
def run_endpoint(req: RunRequest) -> RunResponse:
    return handle_run(req)


@app.post("/transform", response_model=TransformResponse)
def transform_endpoint(req: TransformRequest) -> TransformResponse:
    return handle_transform(req)
