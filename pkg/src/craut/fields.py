"""Polynomial holomorphic vector fields and their tangency calculus.

A field is sum F_j d/dz_j + sum G_l d/dw_l with HOL-ring polynomial
coefficients.  The central operation is the tangency residual against a
model: with rho_l = v_l - P_l(z, zbar, u) and w = u + i P on the model,

    Z(rho_l)|_M = -sum_j F_j P_{l,z_j} - (1/2) sum_s G_s P_{l,u_s} + G_l/(2i)

(all coefficients pushed onto the model by w -> u + i P).  The field's real
part is tangent iff 2 Re of every such residual vanishes identically, which
is the membership test for the automorphism algebra.  The complex residual
itself is used for holomorphic nondegeneracy.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .model import Model
from .poly import HOL, Polynomial, VarTable
from .scalars import GaussianRational, MINUS_HALF_I


@dataclass(frozen=True)
class VectorField:
    """Coefficients (f_1..f_n, g_1..g_d) over one HOL table."""

    table: VarTable
    f: Tuple[Polynomial, ...]
    g: Tuple[Polynomial, ...]

    def __post_init__(self):
        if self.table.ring != HOL:
            raise ValueError("vector fields live over the HOL ring")
        if len(self.f) != self.table.n or len(self.g) != self.table.d:
            raise ValueError("coefficient count does not match the variable shape")
        for q in (*self.f, *self.g):
            if q.table != self.table:
                raise ValueError("coefficient over a different ring")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, table: VarTable) -> "VectorField":
        z = Polynomial.zero(table)
        return cls(table, (z,) * table.n, (z,) * table.d)

    @classmethod
    def from_parts(
        cls,
        table: VarTable,
        f: Sequence[Polynomial] = (),
        g: Sequence[Polynomial] = (),
    ) -> "VectorField":
        z = Polynomial.zero(table)
        fs = list(f) + [z] * (table.n - len(f))
        gs = list(g) + [z] * (table.d - len(g))
        return cls(table, tuple(fs), tuple(gs))

    # -- linear structure -----------------------------------------------------

    def __add__(self, other: "VectorField") -> "VectorField":
        if self.table != other.table:
            raise ValueError("fields over different tables")
        return VectorField(
            self.table,
            tuple(a + b for a, b in zip(self.f, other.f)),
            tuple(a + b for a, b in zip(self.g, other.g)),
        )

    def __sub__(self, other: "VectorField") -> "VectorField":
        return self + other.scale(-1)

    def __neg__(self) -> "VectorField":
        return self.scale(-1)

    def scale(self, value) -> "VectorField":
        coeff = GaussianRational.from_value(value)
        return VectorField(
            self.table,
            tuple(q.scale(coeff) for q in self.f),
            tuple(q.scale(coeff) for q in self.g),
        )

    def is_zero(self) -> bool:
        return all(q.is_zero() for q in (*self.f, *self.g))

    def coefficients(self) -> Tuple[Polynomial, ...]:
        return (*self.f, *self.g)

    # -- weights ----------------------------------------------------------------

    def is_rigid(self) -> bool:
        """True iff no coefficient contains a w-variable."""
        n = self.table.n
        nvars = self.table.num_vars
        for q in self.coefficients():
            for exps in q.terms:
                if any(exps[v] for v in range(n, nvars)):
                    return False
        return True

    def graded_parts(self) -> Dict[Fraction, "VectorField"]:
        """Split into weighted homogeneous fields keyed by their weight.

        A weight-mu field has F_j of scaled degree mu*m1 + 1 and G_l (block j)
        of scaled degree mu*m1 + m_j.
        """
        m1 = self.table.m1
        buckets: Dict[Fraction, Dict[str, Dict[int, Polynomial]]] = {}

        def put(kind: str, idx: int, mu: Fraction, part: Polynomial):
            slot = buckets.setdefault(mu, {"f": {}, "g": {}})[kind]
            slot[idx] = slot.get(idx, Polynomial.zero(self.table)) + part

        for j, q in enumerate(self.f):
            for weight, part in q.homogeneous_parts().items():
                put("f", j, weight - Fraction(1, m1), part)
        for l, q in enumerate(self.g):
            m_j = self.table.blocks[self.table.block_of_normal(l)][0]
            for weight, part in q.homogeneous_parts().items():
                put("g", l, weight - Fraction(m_j, m1), part)

        out: Dict[Fraction, VectorField] = {}
        zero = Polynomial.zero(self.table)
        for mu, parts in sorted(buckets.items()):
            out[mu] = VectorField(
                self.table,
                tuple(parts["f"].get(j, zero) for j in range(self.table.n)),
                tuple(parts["g"].get(l, zero) for l in range(self.table.d)),
            )
        return out

    def weight(self) -> Optional[Fraction]:
        """The homogeneous weight; None for the zero field.

        Raises ValueError when the field is not weighted homogeneous (use
        graded_parts for the decomposition).
        """
        parts = self.graded_parts()
        if not parts:
            return None
        if len(parts) > 1:
            raise ValueError("field is not weighted homogeneous")
        return next(iter(parts))

    # -- derivations ---------------------------------------------------------------

    def apply_to(self, p: Polynomial) -> Polynomial:
        """Apply the field as a derivation to a HOL polynomial."""
        if p.table != self.table:
            raise ValueError("polynomial over a different ring")
        acc = Polynomial.zero(self.table)
        for j, q in enumerate(self.f):
            if q:
                acc = acc + q * p.diff(self.table.z_index(j))
        for l, q in enumerate(self.g):
            if q:
                acc = acc + q * p.diff(self.table.normal_index(l))
        return acc

    def __repr__(self):
        from .exprs import format_poly

        fs = ", ".join(format_poly(q) for q in self.f)
        gs = ", ".join(format_poly(q) for q in self.g)
        return f"<VectorField f=({fs}) g=({gs})>"


# -- canonical fields -------------------------------------------------------------


def euler_field(table: VarTable) -> VectorField:
    """(1/m1) sum z_j d/dz_j + sum (m_j/m1) w_l d/dw_l; always tangent."""
    m1 = table.m1
    f = [
        Polynomial.variable(table, table.z_index(j)).scale(Fraction(1, m1))
        for j in range(table.n)
    ]
    g = []
    for l in range(table.d):
        m_j = table.blocks[table.block_of_normal(l)][0]
        g.append(
            Polynomial.variable(table, table.normal_index(l)).scale(Fraction(m_j, m1))
        )
    return VectorField(table, tuple(f), tuple(g))


def normal_translation(table: VarTable, l: int) -> VectorField:
    """The constant field d/dw_{l+1} (0-based l)."""
    z = Polynomial.zero(table)
    g = [z] * table.d
    g[l] = Polynomial.constant(table, 1)
    return VectorField(table, (z,) * table.n, tuple(g))


def last_block_translations(table: VarTable) -> List[VectorField]:
    """The fields d/dw over the last block; tangent to every model."""
    last = len(table.blocks) - 1
    return [normal_translation(table, l) for l in table.normal_range(last)]


# -- tangency -------------------------------------------------------------------


def complex_tangency_residual(x: VectorField, model: Model) -> Tuple[Polynomial, ...]:
    """Z(rho_l) restricted to the model, one REAL polynomial per codimension."""
    if x.table != model.hol_table:
        raise ValueError("field does not live over this model's variables")
    f_sub = [model.substitute_w(q) for q in x.f]
    g_sub = [model.substitute_w(q) for q in x.g]
    out = []
    for l in range(model.d):
        acc = g_sub[l].scale(MINUS_HALF_I)  # G_l / (2i)
        for j in range(model.n):
            if f_sub[j] and model.p_z[l][j]:
                acc = acc - f_sub[j] * model.p_z[l][j]
        for s in range(model.d):
            if g_sub[s] and model.p_u[l][s]:
                acc = acc - (g_sub[s] * model.p_u[l][s]).scale(Fraction(1, 2))
        out.append(acc)
    return tuple(out)


def tangency_residual(x: VectorField, model: Model) -> Tuple[Polynomial, ...]:
    """2 Re Z(rho_l) on the model; identically zero iff Re X is tangent."""
    return tuple(r + r.conjugate() for r in complex_tangency_residual(x, model))


def is_in_aut(x: VectorField, model: Model) -> bool:
    return all(r.is_zero() for r in tangency_residual(x, model))


# -- bracket and lowering operators ------------------------------------------------


def lie_bracket(x: VectorField, y: VectorField) -> VectorField:
    """[X, Y]: coefficient-wise X(coeffs of Y) - Y(coeffs of X)."""
    if x.table != y.table:
        raise ValueError("fields over different tables")
    f = tuple(x.apply_to(q) - y.apply_to(p) for p, q in zip(x.f, y.f))
    g = tuple(x.apply_to(q) - y.apply_to(p) for p, q in zip(x.g, y.g))
    return VectorField(x.table, f, g)


def d_operator(x: VectorField, j: int, k: int = 1) -> VectorField:
    """k-th derivative of all coefficients by the j-th first-block w-variable.

    Equals the k-fold bracket with the corresponding normal translation up to
    the sign (-1)^k; the sign is absorbed so that applying it once to w_j * Y
    (Y rigid) returns Y.  Lowers the weight of a homogeneous field by k block
    units (k * m_1 in scaled degree).  j is 0-based within the first block.

    Tangency is preserved only on single-block models, where the first-block
    translations are themselves tangent; on multi-block models the operator
    is still defined but its image may leave the algebra.
    """
    table = x.table
    if not 0 <= j < table.blocks[0][1]:
        raise IndexError("index outside the first block")
    var = table.normal_index(j)

    def dk(p: Polynomial) -> Polynomial:
        for _ in range(k):
            p = p.diff(var)
        return p

    return VectorField(table, tuple(dk(q) for q in x.f), tuple(dk(q) for q in x.g))
