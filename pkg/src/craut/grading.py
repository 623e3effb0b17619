"""Graded components of the automorphism algebra and their integration maps.

For a target weight mu the coefficient ansatz lists every admissible
monomial slot (F_j slots of scaled degree mu*m1 + 1, G_l slots of scaled
degree mu*m1 + m_j); each slot carries two real unknowns, the real and
imaginary part of its coefficient.  Requiring the tangency residual to vanish
identically is a homogeneous linear system over Q whose kernel is an exact
basis of the graded component G_mu (restricted to z-only slots for the rigid
part).

On top of the kernel engine this module provides the derivative maps along
first-block normal directions, the integration-preimage query behind the
"which second-order jets are free" analysis, the weight sweep that bounds the
grading, and the jet report.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import linsolve
from .fields import VectorField, d_operator, is_in_aut
from .model import (
    Model,
    NondegeneracyVerdict,
    default_nondegeneracy_bound,
    holomorphic_nondegeneracy,
    quadric_degeneracy_witness,
)
from .poly import (
    Exponents,
    Polynomial,
    conjugate_exponents,
    monomial_key,
    monomials_of_scaled_degree,
)
from .scalars import GaussianRational, ZERO

Slot = Tuple[str, int, Exponents]  # ("f" | "g", coefficient index, monomial)


class GridError(ValueError):
    """A requested weight is not representable on the 1/m1 grid."""


@dataclass(frozen=True)
class Ansatz:
    """Deterministically ordered unknown slots for one weight."""

    mu: Fraction
    rigid: bool
    model: Model
    slots: Tuple[Slot, ...]

    @property
    def num_real_unknowns(self) -> int:
        return 2 * len(self.slots)

    def slot_positions(self) -> Dict[Slot, int]:
        return {slot: i for i, slot in enumerate(self.slots)}


def _scaled_mu(model: Model, mu: Fraction) -> int:
    scaled = Fraction(mu) * model.m1
    if scaled.denominator != 1:
        raise GridError(f"weight {mu} is not a multiple of 1/{model.m1}")
    return int(scaled)


def enumerate_ansatz(model: Model, mu: Fraction, rigid: bool = False) -> Ansatz:
    """All coefficient slots of a weight-mu field, F slots before G slots."""
    scaled = _scaled_mu(model, mu)
    table = model.hol_table
    slots: List[Slot] = []
    for j in range(model.n):
        for exps in monomials_of_scaled_degree(table, scaled + 1, z_only=rigid):
            slots.append(("f", j, exps))
    for l in range(model.d):
        degree = scaled + model.scaled_order_of_normal(l)
        for exps in monomials_of_scaled_degree(table, degree, z_only=rigid):
            slots.append(("g", l, exps))
    return Ansatz(Fraction(mu), rigid, model, tuple(slots))


def field_from_coords(ansatz: Ansatz, coords: Sequence) -> VectorField:
    """Assemble the field with slot coefficients coords[2s] + i*coords[2s+1]."""
    table = ansatz.model.hol_table
    f_terms: List[Dict[Exponents, GaussianRational]] = [dict() for _ in range(table.n)]
    g_terms: List[Dict[Exponents, GaussianRational]] = [dict() for _ in range(table.d)]
    for s, (kind, idx, exps) in enumerate(ansatz.slots):
        c = GaussianRational(Fraction(coords[2 * s]), Fraction(coords[2 * s + 1]))
        if c.is_zero():
            continue
        target = f_terms[idx] if kind == "f" else g_terms[idx]
        target[exps] = c
    return VectorField(
        table,
        tuple(Polynomial(table, t) for t in f_terms),
        tuple(Polynomial(table, t) for t in g_terms),
    )


def coords_from_field(ansatz: Ansatz, x: VectorField) -> Tuple[Fraction, ...]:
    """Coordinates of a field in the ansatz; fails if a monomial has no slot."""
    positions = ansatz.slot_positions()
    coords = [Fraction(0)] * ansatz.num_real_unknowns
    for kind, polys in (("f", x.f), ("g", x.g)):
        for idx, q in enumerate(polys):
            for exps, coeff in q.terms.items():
                pos = positions.get((kind, idx, exps))
                if pos is None:
                    raise ValueError(
                        f"monomial outside the weight-{ansatz.mu} ansatz"
                    )
                coords[2 * pos] = coeff.re
                coords[2 * pos + 1] = coeff.im
    return tuple(coords)


# -- the tangency linear system -----------------------------------------------


@dataclass(frozen=True)
class LinearSystem:
    """Exact rational rows over the ansatz's real unknowns."""

    ansatz: Ansatz
    rows: Tuple[Dict[int, Fraction], ...]
    labels: Tuple[Tuple[int, Exponents, str], ...]

    @property
    def ncols(self) -> int:
        return self.ansatz.num_real_unknowns


def _slot_substitution(model: Model, cache: Dict[Exponents, Polynomial], exps: Exponents) -> Polynomial:
    cached = cache.get(exps)
    if cached is None:
        cached = model.substitute_w(Polynomial.monomial(model.hol_table, exps))
        cache[exps] = cached
    return cached


def _slot_residual_polys(
    model: Model, slot: Slot, cache: Dict[Exponents, Polynomial]
) -> Dict[int, Polynomial]:
    """Complex polynomials H_l with slot residual contribution Im(c * H_l)."""
    kind, idx, exps = slot
    q_sub = _slot_substitution(model, cache, exps)
    out: Dict[int, Polynomial] = {}
    minus_two_i = GaussianRational(0, -2)
    minus_i = GaussianRational(0, -1)
    if kind == "f":
        for l in range(model.d):
            dz = model.p_z[l][idx]
            if dz:
                out[l] = (q_sub * dz).scale(minus_two_i)
    else:
        out[idx] = q_sub
        for l in range(model.d):
            du = model.p_u[l][idx]
            if du:
                extra = (q_sub * du).scale(minus_i)
                out[l] = out[l] + extra if l in out else extra
    return {l: p for l, p in out.items() if p}


def build_tangency_system(model: Model, ansatz: Ansatz) -> LinearSystem:
    """Rows indexed by (codimension, REAL monomial, re|im part).

    Residuals are real polynomials, so the equations for a monomial and its
    conjugate coincide; only the canonical representative of each conjugate
    pair is kept.
    """
    table = model.real_table
    cache: Dict[Exponents, Polynomial] = {}
    # (l, monomial) -> [re_row, im_row]
    pending: Dict[Tuple[int, Exponents], List[Dict[int, Fraction]]] = {}
    half = Fraction(1, 2)
    minus_half_i = GaussianRational(0, -half)

    for s, slot in enumerate(ansatz.slots):
        for l, h in _slot_residual_polys(model, slot, cache).items():
            seen = set()
            for m in h.terms:
                conj_m = conjugate_exponents(m, table)
                cm = m if monomial_key(m, table) <= monomial_key(conj_m, table) else conj_m
                if cm in seen:
                    continue
                seen.add(cm)
                h_val = h.terms.get(cm, ZERO)
                conj_val = h.terms.get(conjugate_exponents(cm, table), ZERO)
                k_val = conj_val.conjugate()
                v_a = (h_val - k_val) * minus_half_i  # (h - k) / (2i)
                v_b = (h_val + k_val) * half
                rows = pending.get((l, cm))
                if rows is None:
                    rows = [dict(), dict()]
                    pending[(l, cm)] = rows
                if v_a.re:
                    rows[0][2 * s] = rows[0].get(2 * s, Fraction(0)) + v_a.re
                if v_b.re:
                    rows[0][2 * s + 1] = rows[0].get(2 * s + 1, Fraction(0)) + v_b.re
                if v_a.im:
                    rows[1][2 * s] = rows[1].get(2 * s, Fraction(0)) + v_a.im
                if v_b.im:
                    rows[1][2 * s + 1] = rows[1].get(2 * s + 1, Fraction(0)) + v_b.im

    rows: List[Dict[int, Fraction]] = []
    labels: List[Tuple[int, Exponents, str]] = []
    for (l, m) in sorted(pending, key=lambda key: (key[0], monomial_key(key[1], table))):
        re_row, im_row = pending[(l, m)]
        for part, row in (("re", re_row), ("im", im_row)):
            row = {c: v for c, v in row.items() if v}
            if row:
                rows.append(row)
                labels.append((l, m, part))
    return LinearSystem(ansatz, tuple(rows), tuple(labels))


def solve_kernel(system: LinearSystem) -> List[Tuple[int, ...]]:
    """Canonical primitive-integer basis of the system's nullspace."""
    return linsolve.kernel_basis(system.rows, system.ncols)


# -- graded components ----------------------------------------------------------


@dataclass(frozen=True)
class GradedBasis:
    """Exact basis of one graded component (or its rigid part)."""

    mu: Fraction
    rigid: bool
    ansatz: Ansatz
    vectors: Tuple[Tuple[int, ...], ...]
    fields: Tuple[VectorField, ...]

    @property
    def dim(self) -> int:
        return len(self.vectors)


def compute_G_mu(model: Model, mu: Fraction, rigid: bool = False) -> GradedBasis:
    """Basis of the weight-mu tangent fields (z-only coefficients if rigid).

    Every returned field is re-verified to have identically zero tangency
    residual; the solver result is never trusted blindly.
    """
    ansatz = enumerate_ansatz(model, mu, rigid)
    if not ansatz.slots:
        return GradedBasis(Fraction(mu), rigid, ansatz, (), ())
    system = build_tangency_system(model, ansatz)
    kernel = solve_kernel(system)
    fields = tuple(field_from_coords(ansatz, vec) for vec in kernel)
    for f in fields:
        if not is_in_aut(f, model):
            raise RuntimeError(
                f"internal error: solver returned a non-tangent field at weight {mu}"
            )
    return GradedBasis(Fraction(mu), rigid, ansatz, tuple(kernel), fields)


def complex_tangency_kernel(model: Model, mu: Fraction) -> Optional[VectorField]:
    """A nonzero weight-mu field with Z(rho) = 0 on the model, if one exists.

    The complex-tangency condition is C-linear in the coefficients; the
    system is realified so the shared rational kernel engine applies.
    """
    ansatz = enumerate_ansatz(model, mu, rigid=False)
    if not ansatz.slots:
        return None
    table = model.real_table
    cache: Dict[Exponents, Polynomial] = {}
    pending: Dict[Tuple[int, Exponents], List[Dict[int, Fraction]]] = {}
    minus_half_i = GaussianRational(0, Fraction(-1, 2))
    half = Fraction(1, 2)

    for s, (kind, idx, exps) in enumerate(ansatz.slots):
        q_sub = _slot_substitution(model, cache, exps)
        contributions: Dict[int, Polynomial] = {}
        if kind == "f":
            for l in range(model.d):
                dz = model.p_z[l][idx]
                if dz:
                    contributions[l] = -(q_sub * dz)
        else:
            contributions[idx] = q_sub.scale(minus_half_i)
            for l in range(model.d):
                du = model.p_u[l][idx]
                if du:
                    extra = (q_sub * du).scale(-half)
                    contributions[l] = contributions[l] + extra if l in contributions else extra
        for l, k_poly in contributions.items():
            for m, k_val in k_poly.terms.items():
                rows = pending.get((l, m))
                if rows is None:
                    rows = [dict(), dict()]
                    pending[(l, m)] = rows
                # c * k with c = a + i b: re row a*k.re - b*k.im, im row a*k.im + b*k.re
                if k_val.re:
                    rows[0][2 * s] = rows[0].get(2 * s, Fraction(0)) + k_val.re
                    rows[1][2 * s + 1] = rows[1].get(2 * s + 1, Fraction(0)) + k_val.re
                if k_val.im:
                    rows[0][2 * s + 1] = rows[0].get(2 * s + 1, Fraction(0)) - k_val.im
                    rows[1][2 * s] = rows[1].get(2 * s, Fraction(0)) + k_val.im

    rows: List[Dict[int, Fraction]] = []
    for key in sorted(pending, key=lambda key: (key[0], monomial_key(key[1], table))):
        for row in pending[key]:
            row = {c: v for c, v in row.items() if v}
            if row:
                rows.append(row)
    kernel = linsolve.kernel_basis(rows, ansatz.num_real_unknowns)
    if not kernel:
        return None
    return field_from_coords(ansatz, kernel[0])


# -- derivative maps and integration preimages ------------------------------------


def _compositions(total: int, parts: int) -> List[Tuple[int, ...]]:
    """All tuples of `parts` nonnegative integers summing to total, lex order."""
    if parts == 1:
        return [(total,)]
    out = []
    for head in range(total + 1):
        for tail in _compositions(total - head, parts - 1):
            out.append((head,) + tail)
    return out


@dataclass(frozen=True)
class AdMap:
    """A composed derivative map from a graded basis into a lower weight."""

    source: GradedBasis
    pattern: Tuple[int, ...]
    target_mu: Fraction
    target_ansatz: Ansatz
    images: Tuple[VectorField, ...]
    columns: Tuple[Tuple[Fraction, ...], ...]


def _apply_pattern(x: VectorField, pattern: Sequence[int]) -> VectorField:
    for j, k in enumerate(pattern):
        if k:
            x = d_operator(x, j, k)
    return x


def ad_map(model: Model, source: GradedBasis, pattern: Sequence[int]) -> AdMap:
    """Apply the derivative pattern to each source basis field.

    ``pattern[j]`` is the number of derivatives along the j-th first-block
    normal direction; the images are expressed in the coordinates of the full
    ansatz at the lowered weight.
    """
    first_block = model.hol_table.blocks[0][1]
    pattern = tuple(pattern)
    if len(pattern) != first_block or any(k < 0 for k in pattern):
        raise ValueError(f"pattern must be {first_block} nonnegative integers")
    target_mu = source.mu - sum(pattern)
    target_ansatz = enumerate_ansatz(model, target_mu, rigid=False)
    images = tuple(_apply_pattern(x, pattern) for x in source.fields)
    columns = tuple(coords_from_field(target_ansatz, img) for img in images)
    return AdMap(source, pattern, target_mu, target_ansatz, images, columns)


@dataclass(frozen=True)
class PatternPreimage:
    pattern: Tuple[int, ...]
    preimage_dim: int
    preimage_fields: Tuple[VectorField, ...]
    achieved_dim: int


@dataclass(frozen=True)
class IntegrationPreimage:
    """Which target fields arise as derivative images from one weight higher.

    ``nonzero`` means some order-|k| derivative pattern maps a source field
    onto a nonzero element of the target span; that is the computable form of
    "the target integrates |k| steps up".
    """

    target: GradedBasis
    order: int
    source: GradedBasis
    per_pattern: Tuple[PatternPreimage, ...]
    achieved_dim: int
    nonzero: bool
    witness: Optional[Tuple[Tuple[int, ...], VectorField, VectorField]]


def integration_preimage(model: Model, target: GradedBasis, order: int) -> IntegrationPreimage:
    """Preimages of a rigid graded component under order-|k| derivative maps.

    Restricted to single-block models, where every normal direction behaves
    the same way and the derivative maps stay inside the algebra.
    """
    if len(model.blocks) != 1:
        raise ValueError(
            "integration preimages are defined only for single-block models"
        )
    if not target.rigid:
        raise ValueError("integration preimages expect a rigid target basis")
    if order < 1:
        raise ValueError("order must be >= 1")

    source = compute_G_mu(model, target.mu + order, rigid=False)
    full_target_ansatz = enumerate_ansatz(model, target.mu, rigid=False)
    t_vectors = [coords_from_field(full_target_ansatz, x) for x in target.fields]
    coord_dim = full_target_ansatz.num_real_unknowns

    per_pattern: List[PatternPreimage] = []
    achieved_all: List[Sequence[Fraction]] = []
    witness = None

    for pattern in _compositions(order, model.d):
        images = [_apply_pattern(x, pattern) for x in source.fields]
        columns = [coords_from_field(full_target_ansatz, img) for img in images]
        ny, nt = len(columns), len(t_vectors)
        rows: List[Dict[int, Fraction]] = []
        for r in range(coord_dim):
            row: Dict[int, Fraction] = {}
            for i, col in enumerate(columns):
                if col[r]:
                    row[i] = col[r]
            for j, tv in enumerate(t_vectors):
                if tv[r]:
                    row[ny + j] = -tv[r]
            if row:
                rows.append(row)
        kernel = linsolve.kernel_basis(rows, ny + nt)
        y_parts = [vec[:ny] for vec in kernel]
        t_parts = [vec[ny:] for vec in kernel]
        preimage_dim = linsolve.columns_rank([p for p in y_parts if any(p)], ny)
        achieved = [p for p in t_parts if any(p)]
        achieved_dim = linsolve.columns_rank(achieved, nt)
        achieved_all.extend(achieved)
        preimage_fields = tuple(
            _combine_fields(source.fields, vec[:ny]) for vec in kernel if any(vec[:ny])
        )
        per_pattern.append(
            PatternPreimage(pattern, preimage_dim, preimage_fields, achieved_dim)
        )
        if witness is None:
            for vec in kernel:
                if any(vec[ny:]):
                    y_field = _combine_fields(source.fields, vec[:ny])
                    image = _apply_pattern(y_field, pattern)
                    witness = (pattern, y_field, image)
                    break

    total_dim = linsolve.columns_rank(achieved_all, len(t_vectors)) if t_vectors else 0
    return IntegrationPreimage(
        target=target,
        order=order,
        source=source,
        per_pattern=tuple(per_pattern),
        achieved_dim=total_dim,
        nonzero=total_dim > 0,
        witness=witness,
    )


def _combine_fields(fields: Sequence[VectorField], coeffs: Sequence[int]) -> VectorField:
    acc = None
    for x, c in zip(fields, coeffs):
        if not c:
            continue
        term = x.scale(c)
        acc = term if acc is None else acc + term
    if acc is None:
        if not fields:
            raise ValueError("cannot combine an empty basis")
        return VectorField.zero(fields[0].table)
    return acc


# -- weight sweep ------------------------------------------------------------------


@dataclass(frozen=True)
class AutTable:
    """Dimensions and bases over a weight grid, plus the determination verdict.

    ``mu0`` is reported only when the grading was observed to stop: every
    weight above the last nonzero one is zero over a margin of at least
    m_k/m_1, and the nondegeneracy search found no witness.  Otherwise the
    sweep is inconclusive below mu_max.
    """

    mu_values: Tuple[Fraction, ...]
    full: Dict[Fraction, GradedBasis]
    rigid: Dict[Fraction, GradedBasis]
    mu_max: Fraction
    nondegeneracy: NondegeneracyVerdict
    mu_high: Optional[Fraction]
    mu0: Optional[Fraction]
    conclusive: bool

    @property
    def degenerate(self) -> bool:
        return self.nondegeneracy.degenerate

    def dims(self) -> Dict[Fraction, Tuple[int, int]]:
        return {
            mu: (self.full[mu].dim, self.rigid[mu].dim) for mu in self.mu_values
        }


def weight_grid(model: Model, mu_min: Fraction, mu_max: Fraction) -> List[Fraction]:
    lo = _scaled_mu(model, mu_min)
    hi = _scaled_mu(model, mu_max)
    return [Fraction(s, model.m1) for s in range(lo, hi + 1)]


def default_mu_max(model: Model) -> Fraction:
    return Fraction(2 * model.mk, model.m1)


def nondegeneracy_for_search(
    model: Model, bound: Optional[Fraction]
) -> NondegeneracyVerdict:
    """Degeneracy verdict for the sweep.

    Quadrics admit an exact criterion (trivial joint kernel of the defining
    matrices decides the absence of holomorphic tangent fields outright), so
    the weight-by-weight search is only needed for general models.
    """
    if model.is_quadric():
        witness = quadric_degeneracy_witness(model)
        reported = bound if bound is not None else default_nondegeneracy_bound(model)
        return NondegeneracyVerdict(witness is not None, Fraction(reported), witness)
    return holomorphic_nondegeneracy(model, bound)


def mu0_search(
    model: Model,
    mu_max: Optional[Fraction] = None,
    nondegeneracy_bound: Optional[Fraction] = None,
) -> AutTable:
    """Sweep the weight grid and bound the grading if the data allows it."""
    if mu_max is None:
        mu_max = default_mu_max(model)
    mu_max = Fraction(mu_max)
    _scaled_mu(model, mu_max)  # validate the grid early

    verdict = nondegeneracy_for_search(model, nondegeneracy_bound)

    mu_min = Fraction(-model.mk, model.m1)
    grid = weight_grid(model, mu_min, mu_max)
    full: Dict[Fraction, GradedBasis] = {}
    rigid: Dict[Fraction, GradedBasis] = {}
    for mu in grid:
        full[mu] = compute_G_mu(model, mu, rigid=False)
        rigid[mu] = compute_G_mu(model, mu, rigid=True)

    nonzero = [mu for mu in grid if full[mu].dim > 0]
    mu_high = max(nonzero) if nonzero else None

    margin = Fraction(model.mk, model.m1)
    conclusive = (
        not verdict.degenerate
        and mu_high is not None
        and mu_max - mu_high >= margin
    )
    mu0 = 1 + margin + mu_high if conclusive else None
    return AutTable(
        mu_values=tuple(grid),
        full=full,
        rigid=rigid,
        mu_max=mu_max,
        nondegeneracy=verdict,
        mu_high=mu_high,
        mu0=mu0,
        conclusive=conclusive,
    )


# -- jet report ---------------------------------------------------------------------


class InconclusiveTableError(ValueError):
    """The weight sweep did not certify a determination weight."""


class DegenerateModelError(ValueError):
    """The model admits a complex-tangent field; no finite bound exists."""


JET_FAMILIES = (
    "first_tangential",  # df/dz
    "second_tangential",  # d2f/dz2
    "mixed",  # d2f/dwdz
    "f_normal",  # df/dw
    "g_normal",  # dg/dw
    "g_second_normal",  # d2g/dw2
)


@dataclass(frozen=True)
class JetReport:
    """Determination data: weight bound, z-derivative order, 2-jet families."""

    mu0: Fraction
    n1_bound: int
    is_quadric: bool
    families: Optional[Dict[str, bool]]
    notes: Tuple[str, ...]


def _field_has_bidegree(x: VectorField, kind: str, zdeg: int, wdeg: int) -> bool:
    table = x.table
    n = table.n
    polys = x.f if kind == "f" else x.g
    for q in polys:
        for exps in q.terms:
            if sum(exps[:n]) == zdeg and sum(exps[n:]) == wdeg:
                return True
    return False


def jet_report(model: Model, table: AutTable) -> JetReport:
    """Needed-derivative report from a conclusive weight sweep.

    A 2-jet family is flagged needed when the corresponding coefficient
    bidegree is realized in the graded bases: tangential families against the
    rigid bases, the mixed family via the order-1 integration preimage of the
    rigid weight-0 component (a mixed coefficient is only free when it
    differentiates onto a nonzero rigid field).
    """
    if table.degenerate:
        raise DegenerateModelError(
            "model admits a complex-tangent field; no finite determination weight"
        )
    if not table.conclusive:
        raise InconclusiveTableError(
            f"grading not certified below mu_max = {table.mu_max}"
        )

    families: Optional[Dict[str, bool]] = None
    if model.is_quadric():
        all_fields = [x for mu in table.mu_values for x in table.full[mu].fields]
        rigid_fields = [x for mu in table.mu_values for x in table.rigid[mu].fields]
        rigid_zero = table.rigid[Fraction(0)]
        mixed = integration_preimage(model, rigid_zero, 1).nonzero
        families = {
            "first_tangential": any(
                _field_has_bidegree(x, "f", 1, 0) for x in all_fields
            ),
            "second_tangential": any(
                _field_has_bidegree(x, "f", 2, 0) for x in rigid_fields
            ),
            "mixed": mixed,
            "f_normal": any(_field_has_bidegree(x, "f", 0, 1) for x in all_fields),
            "g_normal": any(_field_has_bidegree(x, "g", 0, 1) for x in all_fields),
            "g_second_normal": any(
                _field_has_bidegree(x, "g", 0, 2) for x in all_fields
            ),
        }

    notes = (
        "pure tangential derivatives of order up to the bound determine the"
        " tangential jet; bounds for the remaining mixed orders are not"
        " computed by this tool",
    )
    return JetReport(
        mu0=table.mu0,
        n1_bound=model.mk - 1,
        is_quadric=model.is_quadric(),
        families=families,
        notes=notes,
    )
