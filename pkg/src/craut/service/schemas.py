"""Request/response models for the service and the CLI's JSON mode.

Polynomial payloads are grammar strings (see craut.exprs), rationals are
"p/q" strings, and field order is fixed by declaration so serialized output
is deterministic.
"""

from __future__ import annotations

from typing import List, Optional

from pydantic import BaseModel, ConfigDict


class BlockSpec(BaseModel):
    m: int
    l: int


class ModelDocument(BaseModel):
    """A model submanifold: defining polynomials or Hermitian matrices.

    Exactly one of ``p`` (REAL-ring polynomial strings, one per normal
    variable) and ``matrices`` (d Hermitian n x n matrices of scalar strings,
    the order-2 single-block shortcut) must be present.  ``n`` and ``blocks``
    may be omitted when ``matrices`` defines them.
    """

    n: Optional[int] = None
    blocks: Optional[List[BlockSpec]] = None
    p: Optional[List[str]] = None
    matrices: Optional[List[List[List[str]]]] = None


class FieldDocument(BaseModel):
    """A holomorphic field: n HOL-ring strings for f, d strings for g."""

    f: List[str]
    g: List[str]


class ValidateRequest(BaseModel):
    model: ModelDocument

    model_config = ConfigDict(protected_namespaces=())


class AutRequest(BaseModel):
    model: ModelDocument
    mu_min: Optional[str] = None
    mu_max: Optional[str] = None
    rigid: bool = False

    model_config = ConfigDict(protected_namespaces=())


class CheckFieldRequest(BaseModel):
    model: ModelDocument
    field: FieldDocument

    model_config = ConfigDict(protected_namespaces=())


class JetRequest(BaseModel):
    model: ModelDocument
    mu_max: Optional[str] = None

    model_config = ConfigDict(protected_namespaces=())


class CheckRow(BaseModel):
    condition: str
    ok: bool
    details: str = ""


class ResponseBase(BaseModel):
    command: str
    model_fingerprint: str
    status: str  # "ok" | "failed" | "inconclusive"
    diagnostics: List[str] = []

    model_config = ConfigDict(protected_namespaces=())


class ValidateResponse(ResponseBase):
    checks: List[CheckRow] = []


class AutRow(BaseModel):
    mu: str
    dim: int
    dim_rigid: int
    basis: List[FieldDocument]


class AutResponse(ResponseBase):
    rigid: bool = False
    degenerate: bool = False
    degeneracy_witness: Optional[FieldDocument] = None
    rows: List[AutRow] = []


class CheckFieldResponse(ResponseBase):
    weight: Optional[str] = None  # "p/q", "zero", or "inhomogeneous"
    weights: List[str] = []  # weights of the homogeneous parts
    rigid: bool = False
    in_aut: bool = False
    residuals: List[str] = []


class DimRow(BaseModel):
    mu: str
    dim: int
    dim_rigid: int


class JetFamily(BaseModel):
    name: str
    needed: bool


class JetResponse(ResponseBase):
    mu0: Optional[str] = None
    n1_bound: Optional[int] = None
    conclusive: bool = False
    degenerate: bool = False
    is_quadric: bool = False
    families: Optional[List[JetFamily]] = None
    rows: List[DimRow] = []
    notes: List[str] = []


class HealthResponse(BaseModel):
    status: str
    version: str
