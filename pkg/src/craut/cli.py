"""Batch command-line client.

Subcommands mirror the service endpoints (validate, aut, check-field, jet)
and run the shared handlers in-process by default; with --server URL the
request is sent to a running service instead.  ``craut serve`` starts the
service.

Exit codes: 0 success, 1 domain failure, 2 input error, 3 inconclusive.

Example documents:

    model.json   {"n": 1, "blocks": [{"m": 2, "l": 1}], "p": ["z1*conj(z1)"]}
    field.json   {"f": ["i*z1"], "g": ["0"]}
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

from pydantic import BaseModel, ValidationError

from .service import handlers
from .service.schemas import (
    AutRequest,
    AutResponse,
    CheckFieldRequest,
    CheckFieldResponse,
    FieldDocument,
    JetRequest,
    JetResponse,
    ModelDocument,
    ValidateRequest,
    ValidateResponse,
)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2
EXIT_INCONCLUSIVE = 3

_STATUS_CODES = {"ok": EXIT_OK, "failed": EXIT_FAILED, "inconclusive": EXIT_INCONCLUSIVE}


class CliInputError(Exception):
    pass


def _load_json(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CliInputError(f"cannot read {path}: {exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliInputError(f"{path}: invalid JSON at offset {exc.pos}: {exc.msg}") from None


def _parse_document(path: str, schema):
    try:
        return schema.model_validate(_load_json(path))
    except ValidationError as exc:
        raise CliInputError(f"{path}: {exc.errors()[0]['msg']} at {exc.errors()[0]['loc']}") from None


def _post(server: str, endpoint: str, request: BaseModel, response_schema):
    import httpx

    url = server.rstrip("/") + endpoint
    reply = httpx.post(url, json=request.model_dump(), timeout=600.0)
    if reply.status_code == 422:
        detail = reply.json().get("detail", reply.text)
        raise CliInputError(f"server rejected the request: {detail}")
    reply.raise_for_status()
    return response_schema.model_validate(reply.json())


def _dispatch(endpoint: str, request: BaseModel, response_schema, handler, server: Optional[str]):
    if server:
        return _post(server, endpoint, request, response_schema)
    return handler(request)


# -- text renderers -------------------------------------------------------------


def _render_validate(resp: ValidateResponse) -> str:
    lines = [f"model {resp.model_fingerprint or '(unbuildable)'}"]
    for check in resp.checks:
        mark = "ok  " if check.ok else "FAIL"
        suffix = f"  [{check.details}]" if check.details else ""
        lines.append(f"  {mark} {check.condition}{suffix}")
    for diag in resp.diagnostics:
        if not resp.checks:
            lines.append(f"  FAIL {diag}")
    lines.append(f"status: {resp.status}")
    return "\n".join(lines)


def _render_field_doc(doc: FieldDocument) -> str:
    return "f = (" + ", ".join(doc.f) + "); g = (" + ", ".join(doc.g) + ")"


def _render_aut(resp: AutResponse) -> str:
    lines = [f"model {resp.model_fingerprint}"]
    if resp.degenerate:
        lines.append("WARNING: holomorphically degenerate; witness:")
        lines.append("  " + _render_field_doc(resp.degeneracy_witness))
    kind = "rigid basis" if resp.rigid else "basis"
    lines.append(f"{'mu':>8}  {'dim':>4}  {'dim_rigid':>9}")
    for row in resp.rows:
        lines.append(f"{row.mu:>8}  {row.dim:>4}  {row.dim_rigid:>9}")
    for row in resp.rows:
        if row.basis:
            lines.append(f"{kind} at mu = {row.mu}:")
            for doc in row.basis:
                lines.append("  " + _render_field_doc(doc))
    lines.append(f"status: {resp.status}")
    return "\n".join(lines)


def _render_check_field(resp: CheckFieldResponse) -> str:
    lines = [f"model {resp.model_fingerprint}"]
    if resp.weight == "inhomogeneous":
        lines.append(f"weight: inhomogeneous (parts at {', '.join(resp.weights)})")
    else:
        lines.append(f"weight: {resp.weight}")
    lines.append(f"rigid: {'yes' if resp.rigid else 'no'}")
    lines.append(f"in aut: {'yes' if resp.in_aut else 'no'}")
    for residual in resp.residuals:
        lines.append(f"  residual: {residual}")
    lines.append(f"status: {resp.status}")
    return "\n".join(lines)


def _render_jet(resp: JetResponse) -> str:
    lines = [f"model {resp.model_fingerprint}"]
    lines.append(f"{'mu':>8}  {'dim':>4}  {'dim_rigid':>9}")
    for row in resp.rows:
        lines.append(f"{row.mu:>8}  {row.dim:>4}  {row.dim_rigid:>9}")
    if resp.degenerate:
        lines.append("degenerate model: no finite determination weight")
    elif not resp.conclusive:
        lines.append("inconclusive: raise --mu-max to certify the grading")
    else:
        lines.append(f"determination weight mu0 = {resp.mu0}")
        lines.append(f"pure tangential derivatives: order <= {resp.n1_bound}")
        if resp.families is not None:
            lines.append("2-jet derivative families:")
            for fam in resp.families:
                lines.append(
                    f"  {fam.name}: {'needed' if fam.needed else 'not needed'}"
                )
    for diag in resp.diagnostics:
        lines.append(f"note: {diag}")
    lines.append(f"status: {resp.status}")
    return "\n".join(lines)


def _emit(resp: BaseModel, fmt: str, renderer) -> int:
    if fmt == "json":
        print(resp.model_dump_json(indent=2))
    else:
        print(renderer(resp))
    return _STATUS_CODES.get(resp.status, EXIT_FAILED)


# -- commands -----------------------------------------------------------------


def _cmd_validate(args) -> int:
    request = ValidateRequest(model=_parse_document(args.model, ModelDocument))
    resp = _dispatch("/validate", request, ValidateResponse, handlers.run_validate, args.server)
    return _emit(resp, args.format, _render_validate)


def _cmd_aut(args) -> int:
    request = AutRequest(
        model=_parse_document(args.model, ModelDocument),
        mu_min=args.mu_min,
        mu_max=args.mu_max,
        rigid=args.rigid,
    )
    resp = _dispatch("/aut", request, AutResponse, handlers.run_aut, args.server)
    return _emit(resp, args.format, _render_aut)


def _cmd_check_field(args) -> int:
    request = CheckFieldRequest(
        model=_parse_document(args.model, ModelDocument),
        field=_parse_document(args.field, FieldDocument),
    )
    resp = _dispatch(
        "/check-field", request, CheckFieldResponse, handlers.run_check_field, args.server
    )
    return _emit(resp, args.format, _render_check_field)


def _cmd_jet(args) -> int:
    request = JetRequest(
        model=_parse_document(args.model, ModelDocument),
        mu_max=args.mu_max,
    )
    resp = _dispatch("/jet", request, JetResponse, handlers.run_jet, args.server)
    return _emit(resp, args.format, _render_jet)


def _cmd_serve(args) -> int:
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def _add_common(sub):
    sub.add_argument("--format", choices=("text", "json"), default="text")
    sub.add_argument("--server", help="base URL of a running service", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="craut",
        description="Graded automorphism algebras of model submanifolds",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("validate", help="check a model document against the normal form")
    p.add_argument("model", help="model JSON document")
    _add_common(p)
    p.set_defaults(fn=_cmd_validate)

    p = subs.add_parser("aut", help="graded component dimensions and bases")
    p.add_argument("model")
    p.add_argument("--mu-min", help='lowest weight, e.g. "-1" or "-3/2"')
    p.add_argument("--mu-max", help='highest weight, e.g. "2"')
    p.add_argument("--rigid", action="store_true", help="restrict bases to rigid fields")
    _add_common(p)
    p.set_defaults(fn=_cmd_aut)

    p = subs.add_parser("check-field", help="test a field for tangency")
    p.add_argument("model")
    p.add_argument("field", help="field JSON document")
    _add_common(p)
    p.set_defaults(fn=_cmd_check_field)

    p = subs.add_parser("jet", help="determination weight and needed 2-jet families")
    p.add_argument("model")
    p.add_argument("--mu-max", help="sweep bound (defaults to twice the top block order)")
    _add_common(p)
    p.set_defaults(fn=_cmd_jet)

    p = subs.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(fn=_cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (CliInputError, handlers.DocumentError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
