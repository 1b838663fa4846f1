"""Command-line front end.

Each subcommand builds the same request model the HTTP service accepts and
either calls the handler in-process (the default) or posts it to a running
service given with ``--url``.  ``serve`` starts the service itself.
"""
from __future__ import annotations

import argparse
import json
import sys

from fastapi import HTTPException
from pydantic import BaseModel

from . import service
from .runner import bundled_scenario_names

EXIT_INPUT_ERROR = 1


def _read_source(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _read_scenario(path_or_name: str) -> str:
    import os

    if path_or_name == "-":
        return sys.stdin.read()
    if os.path.exists(path_or_name):
        return _read_source(path_or_name)
    from importlib import resources

    bundled = resources.files("aldiag").joinpath("scenarios", path_or_name + ".scn")
    if bundled.is_file():
        return bundled.read_text()
    raise FileNotFoundError(
        "no scenario %r; bundled scenarios: %s"
        % (path_or_name, ", ".join(bundled_scenario_names()))
    )


def _dispatch(args, path: str, request: BaseModel, handler, response_type):
    if args.url:
        import httpx

        resp = httpx.post(args.url.rstrip("/") + path, json=request.model_dump(), timeout=600)
        if resp.status_code != 200:
            detail = resp.json().get("detail", resp.text)
            raise SystemExit("error: %s" % detail)
        return response_type.model_validate(resp.json())
    try:
        return handler(request)
    except HTTPException as e:
        raise SystemExit("error: %s" % e.detail)


def cmd_solve(args) -> int:
    req = service.SolveRequest(
        program=_read_source(args.program),
        engine=args.engine,
        brute_cap=args.brute_cap,
    )
    resp = _dispatch(args, "/solve", req, service.handle_solve, service.SolveResponse)
    if resp.unsatisfiable:
        print("UNSAT")
    else:
        for line in resp.answer_sets:
            print(line)
    return 0


def cmd_translate(args) -> int:
    req = service.TranslateRequest(
        scenario=_read_scenario(args.scenario),
        target=args.target,
        window=args.window,
        max_actions=args.max_actions,
        awareness=not args.no_awareness,
        horizon=args.horizon,
    )
    resp = _dispatch(args, "/translate", req, service.handle_translate, service.TranslateResponse)
    sys.stdout.write(resp.program)
    return 0


def cmd_models(args) -> int:
    req = service.ModelsRequest(scenario=_read_scenario(args.scenario))
    resp = _dispatch(args, "/models", req, service.handle_models, service.ModelsResponse)
    if not resp.models:
        print("NO MODELS")
        return 0
    for i, m in enumerate(resp.models):
        print("model %d" % i)
        for t, state in enumerate(m.states):
            print("  state %d: %s" % (t, " ".join(state)))
            if t < len(m.actions):
                print("  action %d: {%s}" % (t, ",".join(m.actions[t])))
    return 0


def cmd_diagnose(args) -> int:
    req = service.DiagnoseRequest(
        scenario=_read_scenario(args.scenario),
        module=args.module,
        window=args.window,
        max_actions=args.max_actions,
        engine=args.engine,
        order=args.order,
        all_candidates=args.all_candidates,
    )
    resp = _dispatch(args, "/diagnose", req, service.handle_diagnose, service.DiagnoseResponse)
    print("symptom=%s" % str(resp.symptom).lower())
    if resp.candidates is not None:
        print("candidates count=%d" % len(resp.candidates))
        for d in resp.candidates:
            print(
                "candidate explanation=%s suspects=%s"
                % (",".join(d.explanation) or "none", ",".join(d.suspects) or "none")
            )
    if args.trace:
        for line in resp.trace:
            print(line)
    if resp.resolved is not None:
        print("resolved=%s" % str(resp.resolved).lower())
        if resp.diagnosis is not None:
            print(
                "diagnosis explanation=%s suspects=%s"
                % (
                    ",".join(resp.diagnosis.explanation) or "none",
                    ",".join(resp.diagnosis.suspects) or "none",
                )
            )
        if not resp.resolved:
            return 2
    return 0


def cmd_run(args) -> int:
    import os

    name = args.scenario
    if name == "-":
        name = "stdin"
    elif os.path.exists(name):
        name = os.path.splitext(os.path.basename(name))[0]
    req = service.RunRequest(
        scenario=_read_scenario(args.scenario),
        name=name,
        module=args.module,
        window=args.window,
        max_actions=args.max_actions,
        engine=args.engine,
        order=args.order,
        seed=args.seed,
        all_candidates=args.all_candidates,
    )
    resp = _dispatch(args, "/run", req, service.handle_run, service.RunResponse)
    for line in resp.trace:
        print(line)
    if args.summary_json:
        print(json.dumps(resp.summary, sort_keys=True))
    return resp.exit_code


def cmd_transform(args) -> int:
    req = service.TransformRequest(
        program=_read_source(args.program),
        operation=args.operation,
        literals=args.literal or [],
        program2=_read_source(args.program2) if args.program2 else None,
        engine=args.engine,
    )
    resp = _dispatch(args, "/transform", req, service.handle_transform, service.TransformResponse)
    print(resp.report)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run(service.app, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aldiag",
        description="Diagnose device malfunction from action-language descriptions.",
    )
    parser.add_argument("--url", help="address of a running aldiag service (default: in-process)")
    sub = parser.add_subparsers(dest="command", required=True)

    def common_scenario_flags(p, with_order=True):
        p.add_argument("scenario", help="scenario file, bundled name, or - for stdin")
        p.add_argument("--module", choices=["d0", "d1", "d2"], help="diagnostic module")
        p.add_argument("--window", type=int, help="look-back window for d2")
        p.add_argument("--max-actions", type=int, dest="max_actions",
                       help="reject explanations with at least this many occurrences")
        p.add_argument("--engine", choices=["search", "brute"], help="answer-set engine")
        if with_order:
            p.add_argument("--order", choices=["lex", "revlex"], help="candidate selection order")

    p = sub.add_parser("solve", help="enumerate answer sets of a logic program")
    p.add_argument("program", help="program file or - for stdin")
    p.add_argument("--engine", choices=["search", "brute"], default="search")
    p.add_argument("--brute-cap", type=int, default=24, dest="brute_cap")
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("translate", help="emit the ground program for a scenario")
    p.add_argument("scenario")
    p.add_argument("--target", default="d0",
                   choices=["alpha", "alpha_d", "conf", "d0", "d1", "d2"])
    p.add_argument("--window", type=int, default=1)
    p.add_argument("--max-actions", type=int, dest="max_actions")
    p.add_argument("--no-awareness", action="store_true",
                   help="omit the initial-state awareness axioms")
    p.add_argument("--horizon", type=int, help="grounding horizon override")
    p.set_defaults(fn=cmd_translate)

    p = sub.add_parser("models", help="direct-semantics models of the recorded history")
    p.add_argument("scenario")
    p.set_defaults(fn=cmd_models)

    p = sub.add_parser("diagnose", help="detect a symptom and run the diagnosis loop")
    common_scenario_flags(p)
    p.add_argument("--all-candidates", action="store_true", dest="all_candidates")
    p.add_argument("--trace", action="store_true", help="print the diagnosis event log")
    p.set_defaults(fn=cmd_diagnose)

    p = sub.add_parser("run", help="run a scenario end to end with trace and exit status")
    common_scenario_flags(p)
    p.add_argument("--all-candidates", action="store_true", dest="all_candidates")
    p.add_argument("--seed", type=int, help="recorded in the trace header")
    p.add_argument("--summary-json", action="store_true", dest="summary_json")
    p.set_defaults(fn=cmd_run)

    p = sub.add_parser("transform", help="apply a program transformation and verify it")
    p.add_argument("operation",
                   choices=["partial_eval", "trim", "conservative_extension", "split"])
    p.add_argument("program", help="program file or - for stdin")
    p.add_argument("--literal", action="append",
                   help="literal argument (repeatable; unfold sequence, trim set, or split set)")
    p.add_argument("--program2", help="smaller program for conservative_extension")
    p.add_argument("--engine", choices=["search", "brute"], default="search")
    p.set_defaults(fn=cmd_transform)

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(fn=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (FileNotFoundError, OSError) as e:
        print("error: %s" % e, file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
