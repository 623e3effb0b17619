"""Command handlers shared by the HTTP service and the CLI.

Each handler turns a request document into a response document.  Input
problems (bad JSON shape, unparseable polynomials, wrong-ring variables,
malformed rationals) raise DocumentError; domain outcomes (normalization
failures, fields that are not tangent, inconclusive sweeps) are reported in
the response's ``status`` field.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from typing import List, Optional

from ..exprs import ExprError, format_poly, parse_poly, parse_scalar
from ..fields import VectorField, tangency_residual
from ..grading import (
    nondegeneracy_for_search,
    compute_G_mu,
    default_mu_max,
    jet_report,
    mu0_search,
    weight_grid,
)
from ..model import (
    Model,
    ModelError,
    QuadricData,
    QuadricError,
    quadric_from_matrices,
    validate_normal_form,
)
from ..poly import REAL, VarTable
from .schemas import (
    AutRequest,
    AutResponse,
    AutRow,
    CheckFieldRequest,
    CheckFieldResponse,
    CheckRow,
    DimRow,
    FieldDocument,
    JetFamily,
    JetRequest,
    JetResponse,
    ModelDocument,
    ValidateRequest,
    ValidateResponse,
)


class DocumentError(ValueError):
    """Unusable input document; maps to exit code 2 / HTTP 422."""

    def __init__(self, message: str, offset: Optional[int] = None):
        super().__init__(message)
        self.offset = offset


def _parse_rational(text: Optional[str], default: Fraction) -> Fraction:
    if text is None:
        return default
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise DocumentError(f"bad rational {text!r}: {exc}") from None


def build_model(doc: ModelDocument) -> Model:
    """Parse and validate a model document; raises DocumentError / ModelError."""
    if (doc.p is None) == (doc.matrices is None):
        raise DocumentError("exactly one of 'p' and 'matrices' must be present")

    if doc.matrices is not None:
        try:
            matrices = tuple(
                tuple(tuple(parse_scalar(entry) for entry in row) for row in mat)
                for mat in doc.matrices
            )
        except ExprError as exc:
            raise DocumentError(f"bad matrix entry: {exc}", exc.offset) from None
        try:
            data = QuadricData(matrices)
        except QuadricError as exc:
            raise DocumentError(str(exc)) from None
        if doc.n is not None and doc.n != data.n:
            raise DocumentError(f"n={doc.n} disagrees with {data.n} x {data.n} matrices")
        if doc.blocks is not None and [(b.m, b.l) for b in doc.blocks] != [(2, data.d)]:
            raise DocumentError("matrix input requires the single block {m: 2, l: d}")
        return quadric_from_matrices(data)

    if doc.n is None or doc.blocks is None:
        raise DocumentError("'n' and 'blocks' are required with polynomial input")
    try:
        table = VarTable(doc.n, tuple((b.m, b.l) for b in doc.blocks), REAL)
    except ValueError as exc:
        raise DocumentError(f"bad variable shape: {exc}") from None
    if len(doc.p) != table.d:
        raise DocumentError(f"expected {table.d} polynomials in 'p', got {len(doc.p)}")
    polys = []
    for idx, src in enumerate(doc.p):
        try:
            polys.append(parse_poly(src, table))
        except ExprError as exc:
            raise DocumentError(f"p[{idx}]: {exc}", exc.offset) from None
    return Model(doc.n, table.blocks, polys)


def build_field(doc: FieldDocument, model: Model) -> VectorField:
    table = model.hol_table
    if len(doc.f) != model.n or len(doc.g) != model.d:
        raise DocumentError(
            f"field needs {model.n} f-strings and {model.d} g-strings"
        )
    try:
        f = [parse_poly(src, table) for src in doc.f]
        g = [parse_poly(src, table) for src in doc.g]
    except ExprError as exc:
        raise DocumentError(f"bad field coefficient: {exc}", exc.offset) from None
    return VectorField(table, tuple(f), tuple(g))


def fingerprint(model: Model) -> str:
    """Hash of the canonical form, stable across equivalent inputs."""
    payload = {
        "n": model.n,
        "blocks": [[m, l] for m, l in model.blocks],
        "p": [format_poly(p) for p in model.p],
    }
    digest = hashlib.sha256(json.dumps(payload, sort_keys=True).encode())
    return digest.hexdigest()[:16]


def field_document(x: VectorField) -> FieldDocument:
    return FieldDocument(
        f=[format_poly(q) for q in x.f], g=[format_poly(q) for q in x.g]
    )


def _fraction_str(value: Fraction) -> str:
    return str(Fraction(value))


# -- handlers -------------------------------------------------------------------


def run_validate(request: ValidateRequest) -> ValidateResponse:
    try:
        model = build_model(request.model)
    except ModelError as exc:
        return ValidateResponse(
            command="validate",
            model_fingerprint="",
            status="failed",
            diagnostics=exc.violations,
            checks=[
                CheckRow(condition="structural invariants", ok=False, details=v)
                for v in exc.violations
            ],
        )
    report = validate_normal_form(model)
    return ValidateResponse(
        command="validate",
        model_fingerprint=fingerprint(model),
        status="ok" if report.ok else "failed",
        diagnostics=[f"{c.condition}: {c.details}" for c in report.failures()],
        checks=[
            CheckRow(condition=c.condition, ok=c.ok, details=c.details)
            for c in report.checks
        ],
    )


def _build_model_or_fail(doc: ModelDocument, command: str):
    try:
        return build_model(doc), None
    except ModelError as exc:
        return None, ValidateResponse(
            command=command,
            model_fingerprint="",
            status="failed",
            diagnostics=exc.violations,
        )


def run_aut(request: AutRequest) -> AutResponse:
    try:
        model = build_model(request.model)
    except ModelError as exc:
        return AutResponse(
            command="aut",
            model_fingerprint="",
            status="failed",
            diagnostics=exc.violations,
        )
    mu_min = _parse_rational(request.mu_min, Fraction(-model.mk, model.m1))
    mu_max = _parse_rational(request.mu_max, default_mu_max(model))
    try:
        grid = weight_grid(model, mu_min, mu_max)
    except ValueError as exc:
        raise DocumentError(str(exc)) from None

    verdict = nondegeneracy_for_search(model, None)
    rows: List[AutRow] = []
    for mu in grid:
        full = compute_G_mu(model, mu, rigid=False)
        rig = compute_G_mu(model, mu, rigid=True)
        shown = rig if request.rigid else full
        rows.append(
            AutRow(
                mu=_fraction_str(mu),
                dim=full.dim,
                dim_rigid=rig.dim,
                basis=[field_document(x) for x in shown.fields],
            )
        )
    diagnostics = []
    if verdict.degenerate:
        diagnostics.append(
            "model is holomorphically degenerate up to the searched bound;"
            " the grading does not terminate"
        )
    return AutResponse(
        command="aut",
        model_fingerprint=fingerprint(model),
        status="ok",
        diagnostics=diagnostics,
        rigid=request.rigid,
        degenerate=verdict.degenerate,
        degeneracy_witness=field_document(verdict.witness) if verdict.degenerate else None,
        rows=rows,
    )


def run_check_field(request: CheckFieldRequest) -> CheckFieldResponse:
    try:
        model = build_model(request.model)
    except ModelError as exc:
        return CheckFieldResponse(
            command="check-field",
            model_fingerprint="",
            status="failed",
            diagnostics=exc.violations,
        )
    x = build_field(request.field, model)
    parts = x.graded_parts()
    if not parts:
        weight = "zero"
    elif len(parts) == 1:
        weight = _fraction_str(next(iter(parts)))
    else:
        weight = "inhomogeneous"
    residuals = tangency_residual(x, model)
    in_aut = all(r.is_zero() for r in residuals)
    return CheckFieldResponse(
        command="check-field",
        model_fingerprint=fingerprint(model),
        status="ok" if in_aut else "failed",
        diagnostics=[] if in_aut else ["field is not tangent to the model"],
        weight=weight,
        weights=[_fraction_str(mu) for mu in parts],
        rigid=x.is_rigid(),
        in_aut=in_aut,
        residuals=[] if in_aut else [format_poly(r) for r in residuals],
    )


def run_jet(request: JetRequest) -> JetResponse:
    try:
        model = build_model(request.model)
    except ModelError as exc:
        return JetResponse(
            command="jet",
            model_fingerprint="",
            status="failed",
            diagnostics=exc.violations,
        )
    mu_max = _parse_rational(request.mu_max, default_mu_max(model))
    try:
        table = mu0_search(model, mu_max)
    except ValueError as exc:
        raise DocumentError(str(exc)) from None

    rows = [
        DimRow(
            mu=_fraction_str(mu),
            dim=table.full[mu].dim,
            dim_rigid=table.rigid[mu].dim,
        )
        for mu in table.mu_values
    ]
    base = dict(
        command="jet",
        model_fingerprint=fingerprint(model),
        conclusive=table.conclusive,
        degenerate=table.degenerate,
        is_quadric=model.is_quadric(),
        rows=rows,
    )
    if table.degenerate:
        return JetResponse(
            status="failed",
            diagnostics=[
                "model is holomorphically degenerate up to the searched bound;"
                " no finite determination weight exists"
            ],
            **base,
        )
    if not table.conclusive:
        return JetResponse(
            status="inconclusive",
            diagnostics=[f"grading not certified below mu_max = {table.mu_max}"],
            **base,
        )
    report = jet_report(model, table)
    return JetResponse(
        status="ok",
        mu0=_fraction_str(report.mu0),
        n1_bound=report.n1_bound,
        families=(
            [JetFamily(name=k, needed=v) for k, v in report.families.items()]
            if report.families is not None
            else None
        ),
        notes=list(report.notes),
        **base,
    )
