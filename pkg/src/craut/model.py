"""Model submanifolds Im w = P(z, zbar, Re w) in block normal form.

A model is the variable shape (n tangential variables, blocks of normal
variables with orders m_1 < ... < m_k) together with the defining vector
polynomial P.  Construction enforces the structural invariants:

* the components of block j are weighted homogeneous of scaled degree m_j,
* every component is real-valued and free of pluriharmonic terms,
* block j may depend only on u-variables of blocks before it,
* the first block's components are nonzero and R-linearly independent.

The remaining normalization conditions (no copies of lower components hiding
inside higher ones) are reported by :func:`validate_normal_form` rather than
enforced, so violating inputs can be diagnosed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import linsolve
from .poly import (
    REAL,
    Exponents,
    Polynomial,
    VarTable,
    hermitian_inner_product,
)
from .scalars import GaussianRational


class ModelError(ValueError):
    """Model construction failure; carries one diagnostic per violation."""

    def __init__(self, violations: Sequence[str]):
        super().__init__("; ".join(violations))
        self.violations = list(violations)


@dataclass(frozen=True)
class CheckResult:
    condition: str
    ok: bool
    details: str = ""


@dataclass(frozen=True)
class NormalizationReport:
    checks: Tuple[CheckResult, ...]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> List[CheckResult]:
        return [c for c in self.checks if not c.ok]


class Model:
    """A validated model submanifold; immutable after construction."""

    def __init__(self, n: int, blocks: Sequence[Tuple[int, int]], p: Sequence[Polynomial]):
        real_table = VarTable(n, tuple(blocks), REAL)
        hol_table = real_table.counterpart()
        p = tuple(p)
        violations = _structural_violations(real_table, p)
        if violations:
            raise ModelError(violations)

        self.real_table = real_table
        self.hol_table = hol_table
        self.p = p
        # derivatives of P used by every tangency computation
        self.p_z = tuple(
            tuple(p_l.diff(real_table.z_index(j)) for j in range(n)) for p_l in p
        )
        self.p_u = tuple(
            tuple(p_l.diff(real_table.normal_index(s)) for s in range(real_table.d))
            for p_l in p
        )
        # image of w_l under the substitution w -> u + i P
        self.w_images = tuple(
            Polynomial.variable(real_table, real_table.normal_index(l))
            + p_l.scale(GaussianRational(0, 1))
            for l, p_l in enumerate(p)
        )

    # -- shape ---------------------------------------------------------------

    @property
    def n(self) -> int:
        return self.real_table.n

    @property
    def d(self) -> int:
        return self.real_table.d

    @property
    def blocks(self) -> Tuple[Tuple[int, int], ...]:
        return self.real_table.blocks

    @property
    def m1(self) -> int:
        return self.real_table.m1

    @property
    def mk(self) -> int:
        return self.real_table.mk

    def is_quadric(self) -> bool:
        return self.blocks == ((2, self.d),)

    def scaled_order_of_normal(self, l: int) -> int:
        return self.blocks[self.real_table.block_of_normal(l)][0]

    # -- substitution ----------------------------------------------------------

    def substitute_w(self, p: Polynomial) -> Polynomial:
        """Push a HOL polynomial onto the model: z -> z, w_l -> u_l + i P_l."""
        if p.table != self.hol_table:
            raise ValueError("polynomial does not live over this model's HOL ring")
        images = {
            self.hol_table.normal_index(l): self.w_images[l] for l in range(self.d)
        }
        return p.substitute(images, self.real_table)

    def __eq__(self, other):
        if not isinstance(other, Model):
            return NotImplemented
        return self.real_table == other.real_table and self.p == other.p

    def __repr__(self):
        return f"<Model n={self.n} blocks={self.blocks}>"


def _structural_violations(table: VarTable, p: Sequence[Polynomial]) -> List[str]:
    violations: List[str] = []
    if len(p) != table.d:
        return [f"expected {table.d} defining polynomials, got {len(p)}"]
    for l, p_l in enumerate(p):
        label = f"P[{l + 1}]"
        if p_l.table != table:
            violations.append(f"{label}: wrong ring")
            continue
        block = table.block_of_normal(l)
        m_j = table.blocks[block][0]
        if p_l.is_zero():
            violations.append(f"{label}: zero component")
            continue
        if not p_l.is_homogeneous_of_scaled_degree(m_j):
            bad = _first_offender(
                p_l, lambda e: _scaled(e, table) != m_j
            )
            violations.append(
                f"{label}: not weighted homogeneous of degree {m_j}/{table.m1}"
                f" (offending monomial {bad})"
            )
        if not p_l.is_real():
            violations.append(f"{label}: fails the reality test conj(P) = P")
        if not p_l.is_pluriharmonic_free():
            bad = _first_offender(
                p_l,
                lambda e: sum(e[: table.n]) == 0 or sum(e[table.n : 2 * table.n]) == 0,
            )
            violations.append(f"{label}: pluriharmonic term {bad}")
        for s in range(table.d):
            if table.block_of_normal(s) >= block:
                if p_l.diff(table.normal_index(s)):
                    violations.append(
                        f"{label}: depends on u{s + 1}, which is not in an earlier block"
                    )
    # first block: nonzero (checked above) and R-linearly independent
    first = [p[l] for l in table.normal_range(0)]
    if all(not q.is_zero() for q in first):
        cert = _real_dependence(first)
        if cert is not None:
            violations.append(
                "first-block components are R-linearly dependent: "
                + _dependence_text(cert)
            )
    return violations


def _scaled(exps: Exponents, table: VarTable) -> int:
    weights = table.scaled_weights()
    return sum(e * w for e, w in zip(exps, weights))


def _first_offender(p: Polynomial, predicate) -> str:
    from .exprs import format_poly

    for exps, coeff in p.sorted_terms():
        if predicate(exps):
            return format_poly(Polynomial.monomial(p.table, exps, coeff))
    return "?"


def _real_dependence(polys: Sequence[Polynomial]) -> Optional[Tuple[int, ...]]:
    """A nonzero real vector t with sum t_l * polys_l = 0, or None.

    Realified: each monomial contributes a real and an imaginary equation.
    """
    monomials = sorted({e for p in polys for e in p.terms})
    index = {e: i for i, e in enumerate(monomials)}
    rows: List[Dict[int, Fraction]] = []
    for e in monomials:
        re_row: Dict[int, Fraction] = {}
        im_row: Dict[int, Fraction] = {}
        for col, p in enumerate(polys):
            c = p.terms.get(e)
            if c is not None:
                if c.re:
                    re_row[col] = c.re
                if c.im:
                    im_row[col] = c.im
        if re_row:
            rows.append(re_row)
        if im_row:
            rows.append(im_row)
    kernel = linsolve.kernel_basis(rows, len(polys))
    return kernel[0] if kernel else None


def _dependence_text(cert: Tuple[int, ...]) -> str:
    terms = [f"{c}*P[{i + 1}]" for i, c in enumerate(cert) if c]
    return " + ".join(terms) + " = 0"


def new_model(n: int, blocks: Sequence[Tuple[int, int]], p: Sequence[Polynomial]) -> Model:
    """Construct and validate a model; raises ModelError with diagnostics."""
    return Model(n, blocks, p)


# -- normalization report -----------------------------------------------------


def validate_normal_form(model: Model) -> NormalizationReport:
    """Per-condition verdicts for the normal-form requirements.

    (a) each component of block j is weighted homogeneous of degree m_j/m_1
        (equivalently P(tz, t zbar, t^{m_1} u_1, ...) = t^{m_j} P);
    (b) P(z, 0, u) = 0, checked together with its conjugate as the
        pluriharmonic-free condition;
    (c) within one block, no component contains a copy of an earlier
        component of the same block (coefficient projection);
    (d) no component of block j contains a u-monomial multiple of a
        lower-block component (coefficient projection).
    """
    table = model.real_table
    checks: List[CheckResult] = []

    for l, p_l in enumerate(model.p):
        m_j = model.scaled_order_of_normal(l)
        ok = p_l.is_homogeneous_of_scaled_degree(m_j)
        checks.append(
            CheckResult(
                f"(a) P[{l + 1}] weighted homogeneous of degree {Fraction(m_j, model.m1)}",
                ok,
                "" if ok else "inhomogeneous component",
            )
        )
    for l, p_l in enumerate(model.p):
        ok = p_l.is_pluriharmonic_free()
        checks.append(
            CheckResult(
                f"(b) P[{l + 1}] vanishes at zbar=0 and at z=0 (no pluriharmonic terms)",
                ok,
                "" if ok else "pluriharmonic term present",
            )
        )

    # (c): same-block projections onto earlier components
    for block in range(len(model.blocks)):
        indices = list(table.normal_range(block))
        for r_pos, r in enumerate(indices):
            for l_pos in range(r_pos):
                l = indices[l_pos]
                coeff = _projection_coefficient(model.p[r], model.p[l])
                ok = coeff.is_zero()
                checks.append(
                    CheckResult(
                        f"(c) P[{r + 1}] contains no copy of P[{l + 1}]",
                        ok,
                        "" if ok else f"projection coefficient {_scalar_text(coeff)}",
                    )
                )

    # (d): lower-block components times complementary u-monomials
    for j_block in range(1, len(model.blocks)):
        m_j = model.blocks[j_block][0]
        for r in table.normal_range(j_block):
            for k_block in range(j_block):
                m_k = model.blocks[k_block][0]
                for q_idx in table.normal_range(k_block):
                    shapes = _u_multipliers(table, k_block, j_block, m_j - m_k)
                    for shape in shapes:
                        candidate = shape * model.p[q_idx]
                        coeff = _projection_coefficient(model.p[r], candidate)
                        ok = coeff.is_zero()
                        from .exprs import format_poly

                        checks.append(
                            CheckResult(
                                f"(d) P[{r + 1}] contains no term"
                                f" {format_poly(shape)}*P[{q_idx + 1}]",
                                ok,
                                "" if ok else f"projection coefficient {_scalar_text(coeff)}",
                            )
                        )
    return NormalizationReport(tuple(checks))


def _scalar_text(value: GaussianRational) -> str:
    from .exprs import format_scalar

    return format_scalar(value)


def _projection_coefficient(p: Polynomial, shape: Polynomial) -> GaussianRational:
    """Component of p along shape under the coefficient-wise pairing."""
    denom = hermitian_inner_product(shape, shape)
    if denom.is_zero():
        return GaussianRational(0)
    return hermitian_inner_product(p, shape) / denom


def _u_multipliers(table: VarTable, k_block: int, j_block: int, degree: int) -> List[Polynomial]:
    """Monomials in the u-variables of blocks k..j-1 with given scaled degree."""
    if degree <= 0:
        return []
    allowed = []
    for b in range(k_block, j_block):
        allowed.extend(table.normal_range(b))
    out: List[Polynomial] = []

    def rec(pos: int, remaining: int, exps: Dict[int, int]):
        if remaining == 0:
            vec = [0] * table.num_vars
            for l, e in exps.items():
                vec[table.normal_index(l)] = e
            out.append(Polynomial.monomial(table, tuple(vec)))
            return
        if pos >= len(allowed):
            return
        l = allowed[pos]
        w = table.blocks[table.block_of_normal(l)][0]
        for e in range(remaining // w + 1):
            if e:
                exps[l] = e
            rec(pos + 1, remaining - e * w, exps)
            exps.pop(l, None)

    rec(0, degree, {})
    return out


# -- quadrics -------------------------------------------------------------------

Matrix = Tuple[Tuple[GaussianRational, ...], ...]


class QuadricError(ValueError):
    pass


@dataclass(frozen=True)
class QuadricData:
    """d Hermitian n x n matrices defining a single-block order-2 model."""

    matrices: Tuple[Matrix, ...]

    def __post_init__(self):
        if not self.matrices:
            raise QuadricError("need at least one matrix")
        n = len(self.matrices[0])
        for idx, a in enumerate(self.matrices):
            if len(a) != n or any(len(row) != n for row in a):
                raise QuadricError(f"matrix {idx + 1} is not {n} x {n}")
            for r in range(n):
                for c in range(n):
                    if a[r][c] != a[c][r].conjugate():
                        raise QuadricError(
                            f"matrix {idx + 1} is not Hermitian at entry ({r + 1},{c + 1})"
                        )
        cert = _matrix_dependence(self.matrices)
        if cert is not None:
            terms = " + ".join(f"{t}*A{i + 1}" for i, t in enumerate(cert) if t)
            raise QuadricError(f"matrices are R-linearly dependent: {terms} = 0")

    @property
    def n(self) -> int:
        return len(self.matrices[0])

    @property
    def d(self) -> int:
        return len(self.matrices)


def _matrix_dependence(matrices: Sequence[Matrix]) -> Optional[Tuple[int, ...]]:
    """Nonzero real t with sum t_l A_l = 0, or None if independent."""
    n = len(matrices[0])
    rows: List[Dict[int, Fraction]] = []
    for r in range(n):
        for c in range(n):
            re_row: Dict[int, Fraction] = {}
            im_row: Dict[int, Fraction] = {}
            for col, a in enumerate(matrices):
                v = a[r][c]
                if v.re:
                    re_row[col] = v.re
                if v.im:
                    im_row[col] = v.im
            if re_row:
                rows.append(re_row)
            if im_row:
                rows.append(im_row)
    kernel = linsolve.kernel_basis(rows, len(matrices))
    return kernel[0] if kernel else None


def coerce_matrix(entries: Sequence[Sequence]) -> Matrix:
    return tuple(
        tuple(GaussianRational.from_value(v) for v in row) for row in entries
    )


def quadric_from_matrices(data: QuadricData) -> Model:
    """The model v_l = zbar^T A_l z for the given Hermitian matrices."""
    n = data.n
    table = VarTable(n, ((2, data.d),), REAL)
    polys = []
    for a in data.matrices:
        acc = Polynomial.zero(table)
        for r in range(n):
            for c in range(n):
                if a[r][c].is_zero():
                    continue
                exps = [0] * table.num_vars
                exps[table.zbar_index(r)] += 1
                exps[table.z_index(c)] += 1
                acc = acc + Polynomial.monomial(table, tuple(exps), a[r][c])
        polys.append(acc)
    return Model(n, ((2, data.d),), polys)


def quadric_matrices(model: Model) -> Optional[QuadricData]:
    """Recover the Hermitian matrices of a quadric model, if it is one."""
    if not model.is_quadric():
        return None
    table = model.real_table
    n = model.n
    matrices = []
    for p_l in model.p:
        a = [[GaussianRational(0)] * n for _ in range(n)]
        for exps, coeff in p_l.terms.items():
            r = next(i for i in range(n) if exps[table.zbar_index(i)])
            c = next(i for i in range(n) if exps[table.z_index(i)])
            a[r][c] = coeff
        matrices.append(tuple(tuple(row) for row in a))
    return QuadricData(tuple(matrices))


def joint_kernel_vector(data: QuadricData) -> Optional[Tuple[GaussianRational, ...]]:
    """A nonzero vector in the intersection of the matrix kernels, or None."""
    rows: List[Dict[int, Fraction]] = []
    n = data.n
    # realified: unknown v = a + i b, stacked equations A_l v = 0
    for a in data.matrices:
        for r in range(n):
            re_row: Dict[int, Fraction] = {}
            im_row: Dict[int, Fraction] = {}
            for c in range(n):
                v = a[r][c]
                if v.re:
                    re_row[2 * c] = v.re
                    im_row[2 * c + 1] = v.re
                if v.im:
                    re_row[2 * c + 1] = -v.im
                    im_row[2 * c] = v.im
            if re_row:
                rows.append(re_row)
            if im_row:
                rows.append(im_row)
    kernel = linsolve.kernel_basis(rows, 2 * n)
    if not kernel:
        return None
    vec = kernel[0]
    return tuple(GaussianRational(vec[2 * c], vec[2 * c + 1]) for c in range(n))


def quadric_nondegenerate(data: QuadricData) -> bool:
    """True iff the joint kernel of the matrices is trivial (exact rank)."""
    return joint_kernel_vector(data) is None


# -- holomorphic nondegeneracy ---------------------------------------------------


@dataclass(frozen=True)
class NondegeneracyVerdict:
    """Outcome of the weight-by-weight complex-tangency search."""

    degenerate: bool
    bound: Fraction
    witness: Optional[object] = None  # VectorField when degenerate

    def __bool__(self):
        return not self.degenerate


def default_nondegeneracy_bound(model: Model) -> Fraction:
    """Search bound in external weight units: (m_k + n) / m_1."""
    return Fraction(model.mk + model.n, model.m1)


def holomorphic_nondegeneracy(
    model: Model, degree_bound: Optional[Fraction] = None
) -> NondegeneracyVerdict:
    """Search for a nonzero holomorphic field complex-tangent to the model.

    Works weight by weight up to the bound; any homogeneous kernel element of
    the complex-tangency system is a witness of degeneracy.  A clean sweep is
    only a verdict "nondegenerate up to the bound", not an absolute one.
    """
    from .grading import complex_tangency_kernel

    if degree_bound is None:
        degree_bound = default_nondegeneracy_bound(model)
    bound = Fraction(degree_bound)
    m1 = model.m1
    mu_scaled = -model.mk
    top = bound * m1
    while mu_scaled <= top:
        mu = Fraction(mu_scaled, m1)
        witness = complex_tangency_kernel(model, mu)
        if witness is not None:
            return NondegeneracyVerdict(True, bound, witness)
        mu_scaled += 1
    return NondegeneracyVerdict(False, bound, None)


def quadric_degeneracy_witness(model: Model):
    """Constant complex-tangent field from the joint matrix kernel, or None.

    For quadrics, a nonzero joint kernel vector v gives the tangent field
    sum v_j d/dz_j, and conversely a trivial joint kernel rules out every
    holomorphic tangent field, so this decides nondegeneracy exactly.
    """
    from .fields import VectorField
    from .poly import Polynomial

    data = quadric_matrices(model)
    if data is None:
        raise ValueError("not a quadric model")
    vec = joint_kernel_vector(data)
    if vec is None:
        return None
    table = model.hol_table
    f = [Polynomial.constant(table, c) for c in vec]
    return VectorField.from_parts(table, f=f)
