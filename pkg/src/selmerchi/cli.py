"""Command-line client for the analysis service.

By default requests are routed through an in-process ASGI transport, so no
server needs to be running; `--server URL` (or SELMERCHI_SERVER) points the
same commands at a live instance.  `selmerchi serve` starts one.

Exit codes: 0 success, 2 hypothesis/domain failure, 3 input error.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import os
import sys

import httpx

from .reports import render_local_row, render_table, report_json

EXIT_OK = 0
EXIT_HYPOTHESIS = 2
EXIT_INPUT = 3

ENV_SERVER = "SELMERCHI_SERVER"


class CLIInputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on bad flags; we reserve 2 for hypothesis
    failures, so parse errors are rethrown and mapped to 3."""

    def error(self, message):
        raise CLIInputError(message)


def _post(path: str, payload: dict, server: str | None):
    async def go():
        if server:
            client = httpx.AsyncClient(base_url=server, timeout=600.0)
        else:
            from .service import build_app

            client = httpx.AsyncClient(
                transport=httpx.ASGITransport(app=build_app()),
                base_url="http://selmerchi.local",
                timeout=None,
            )
        async with client:
            response = await client.post(path, json=payload)
            return response.status_code, response.json()

    return asyncio.run(go())


def _http_input_error(body) -> str:
    if isinstance(body, dict) and "detail" in body:
        return json.dumps(body["detail"]) if not isinstance(body["detail"], str) else body["detail"]
    return str(body)


def _emit_report(body: dict, fmt: str) -> int:
    report = body["report"]
    for warning in body.get("warnings", []):
        print(f"warning: {warning}", file=sys.stderr)
    if fmt == "json":
        sys.stdout.write(report_json(report))
    else:
        sys.stdout.write(render_table(report))
    if body["status"] != "ok":
        print(f"hypothesis failure: {report['failure']}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    return EXIT_OK


def cmd_analyze(args) -> int:
    payload = {
        "curve": args.curve,
        "p": args.p,
        "signs": args.signs,
        "assert_selmer_finite": args.assert_selmer_finite,
        "override_hypotheses": args.override_hypotheses,
    }
    if args.label:
        payload["label"] = args.label
    if args.sha_p is not None:
        payload["sha_p"] = args.sha_p
    code, body = _post("/analyze", payload, args.server)
    if code != 200:
        print(f"input error: {_http_input_error(body)}", file=sys.stderr)
        return EXIT_INPUT
    return _emit_report(body, args.format)


def cmd_local(args) -> int:
    payload = {"curve": args.curve, "q": args.q, "p": args.p}
    code, body = _post("/local", payload, args.server)
    if code != 200:
        print(f"input error: {_http_input_error(body)}", file=sys.stderr)
        return EXIT_INPUT
    row = body["local"]
    if args.format == "json":
        sys.stdout.write(json.dumps(row, sort_keys=True, indent=2) + "\n")
    else:
        sys.stdout.write(render_local_row(row))
    return EXIT_OK


def cmd_batch(args) -> int:
    try:
        csv_text = open(args.input, "r", encoding="utf-8").read()
    except OSError as exc:
        print(f"input error: cannot read {args.input}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    payload = {
        "csv_text": csv_text,
        "p": args.p,
        "assert_selmer_finite": args.assert_selmer_finite,
        "jobs": args.jobs,
    }
    if args.sha_p is not None:
        payload["sha_p"] = args.sha_p
    code, body = _post("/batch", payload, args.server)
    if code != 200:
        print(f"input error: {_http_input_error(body)}", file=sys.stderr)
        return EXIT_INPUT
    out = {"reports": body["reports"], "summary": body["summary"]}
    try:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(json.dumps(out, sort_keys=True, indent=2) + "\n")
    except OSError as exc:
        print(f"input error: cannot write {args.output}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    s = body["summary"]
    print(
        f"analyzed {s['rows_analyzed']} rows: {s['passed']} passed,"
        f" {s['hypothesis_failures']} hypothesis failures, {s['skipped']} skipped"
    )
    for item in s["skipped_rows"]:
        print(f"  skipped row {item['row']}: {item['reason']}", file=sys.stderr)
    return EXIT_OK


def cmd_field(args) -> int:
    try:
        with open(args.local_data, "r", encoding="utf-8") as fh:
            local_payload = json.load(fh)
    except (OSError, ValueError) as exc:
        print(f"input error: cannot read {args.local_data}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    payload = {"local_data": local_payload, "signs": args.signs, "p": args.p}
    code, body = _post("/field", payload, args.server)
    if code != 200:
        print(f"input error: {_http_input_error(body)}", file=sys.stderr)
        return EXIT_INPUT
    return _emit_report(body, args.format)


def cmd_lambda(args) -> int:
    try:
        coeffs = [int(c) for c in args.coeffs.split(",")]
    except ValueError:
        print("input error: --coeffs must be comma-separated integers", file=sys.stderr)
        return EXIT_INPUT
    payload = {"p": args.p, "coeffs": coeffs, "precision": args.precision}
    code, body = _post("/lambda", payload, args.server)
    if code != 200:
        print(f"input error: {_http_input_error(body)}", file=sys.stderr)
        return EXIT_INPUT
    if body["status"] != "ok":
        print(f"undefined: {body['detail']}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    print(body["value"])
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("selmerchi.service:app", host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="selmerchi", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--server", default=os.environ.get(ENV_SERVER),
                       help="base URL of a running service (default: in-process)")

    p = sub.add_parser("analyze", help="full pipeline for one curve over Q")
    p.add_argument("--curve", required=True, help="a1,a2,a3,a4,a6")
    p.add_argument("--p", type=int, required=True, help="odd prime")
    p.add_argument("--signs", default="", help="sign vector, e.g. '+' or '-'")
    p.add_argument("--sha-p", dest="sha_p", default=None,
                   help="p-part of Sha as a decimal p-power (default 1, with a warning)")
    p.add_argument("--assert-selmer-finite", action="store_true")
    p.add_argument("--override-hypotheses", action="store_true")
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.add_argument("--label", default=None)
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("local", help="reduction data at a single prime")
    p.add_argument("--curve", required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--p", type=int, default=None, help="also report p-part columns")
    p.add_argument("--format", choices=("table", "json"), default="table")
    common(p)
    p.set_defaults(func=cmd_local)

    p = sub.add_parser("batch", help="process a CSV of curves")
    p.add_argument("--input", required=True, help="CSV: label,a1,a2,a3,a4,a6[,sha_p]")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--output", required=True, help="JSON results file")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--sha-p", dest="sha_p", default=None)
    p.add_argument("--assert-selmer-finite", action="store_true")
    common(p)
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("field", help="formula over user-supplied field data")
    p.add_argument("--local-data", dest="local_data", required=True,
                   help="JSON file with the field-local-data schema")
    p.add_argument("--p", type=int, default=None,
                   help="cross-checked against the p inside the data file")
    p.add_argument("--signs", default="")
    p.add_argument("--format", choices=("table", "json"), default="table")
    common(p)
    p.set_defaults(func=cmd_field)

    p = sub.add_parser("lambda", help="Euler characteristic of a characteristic series")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--coeffs", required=True, help="comma-separated integer coefficients")
    p.add_argument("--precision", type=int, default=64)
    common(p)
    p.set_defaults(func=cmd_lambda)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8764)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except CLIInputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except httpx.HTTPError as exc:
        print(f"input error: cannot reach service: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
