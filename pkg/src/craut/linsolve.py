"""Exact sparse kernels of rational matrices.

Rows are sparse maps column -> Fraction (or int).  Each row is first scaled
to a primitive integer vector, and elimination then combines rows with the
cross-multiplication step

    row := (pivot_value * row - row_value * pivot_row) / content

so every intermediate entry stays an integer (fraction-free); dividing by the
content (gcd of the entries) after each combination keeps growth in check.
Pivot selection is deterministic, so kernels are reproducible: rows are
processed in input order and reduced against the pivot with the smallest
leading column.

Kernel basis vectors are returned in the canonical form "free column = one
basis vector", scaled to primitive integer vectors whose first nonzero entry
is positive.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, List, Sequence, Tuple

SparseRow = Dict[int, int]


def _to_integer_row(row: Dict[int, "Fraction | int"]) -> SparseRow:
    """Clear denominators and divide by the content; drops zero entries."""
    entries = {c: Fraction(v) for c, v in row.items() if v}
    if not entries:
        return {}
    denom_lcm = 1
    for v in entries.values():
        denom_lcm = denom_lcm * v.denominator // gcd(denom_lcm, v.denominator)
    ints = {c: int(v * denom_lcm) for c, v in entries.items()}
    content = 0
    for v in ints.values():
        content = gcd(content, abs(v))
    return {c: v // content for c, v in ints.items()}


def _normalize(row: SparseRow) -> SparseRow:
    content = 0
    for v in row.values():
        content = gcd(content, abs(v))
    if content > 1:
        return {c: v // content for c, v in row.items()}
    return row


def _combine(row: SparseRow, row_val: int, pivot: SparseRow, pivot_val: int) -> SparseRow:
    """pivot_val * row - row_val * pivot, content-normalized."""
    out = {c: v * pivot_val for c, v in row.items()}
    for c, v in pivot.items():
        nv = out.get(c, 0) - row_val * v
        if nv:
            out[c] = nv
        else:
            out.pop(c, None)
    return _normalize(out)


class Echelon:
    """Row echelon accumulator with fully reduced pivot rows."""

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivots: Dict[int, SparseRow] = {}

    def insert(self, row: Dict[int, "Fraction | int"]):
        current = _to_integer_row(row)
        # Eliminate every pivot column from the incoming row.  Pivot rows are
        # kept fully reduced (their support is their own pivot column plus
        # free columns), so one pass cannot reintroduce pivot columns.
        while current:
            hits = sorted(c for c in current if c in self.pivots)
            if not hits:
                break
            for c in hits:
                if c in current:
                    pivot = self.pivots[c]
                    current = _combine(current, current[c], pivot, pivot[c])
        if not current:
            return
        lead = min(current)
        val = current[lead]
        for c, prow in list(self.pivots.items()):
            if lead in prow:
                self.pivots[c] = _combine(prow, prow[lead], current, val)
        if current[lead] < 0:
            current = {c: -v for c, v in current.items()}
        self.pivots[lead] = current

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def kernel_basis(self) -> List[Tuple[int, ...]]:
        """Primitive integer basis of the nullspace, one vector per free column."""
        pivot_cols = set(self.pivots)
        basis: List[Tuple[int, ...]] = []
        for free in range(self.ncols):
            if free in pivot_cols:
                continue
            vec = [Fraction(0)] * self.ncols
            vec[free] = Fraction(1)
            for col, row in self.pivots.items():
                coeff = row.get(free)
                if coeff:
                    vec[col] = Fraction(-coeff, row[col])
            basis.append(_primitive(vec))
        return basis


def _primitive(vec: Sequence[Fraction]) -> Tuple[int, ...]:
    """Scale a rational vector to primitive integers, first nonzero positive."""
    denom_lcm = 1
    for v in vec:
        if v:
            denom_lcm = denom_lcm * v.denominator // gcd(denom_lcm, v.denominator)
    ints = [int(v * denom_lcm) for v in vec]
    content = 0
    for v in ints:
        content = gcd(content, abs(v))
    if content > 1:
        ints = [v // content for v in ints]
    for v in ints:
        if v:
            if v < 0:
                ints = [-x for x in ints]
            break
    return tuple(ints)


def kernel_basis(rows: Iterable[Dict[int, "Fraction | int"]], ncols: int) -> List[Tuple[int, ...]]:
    """Canonical nullspace basis of the matrix given by sparse rows."""
    ech = Echelon(ncols)
    for row in rows:
        ech.insert(row)
    return ech.kernel_basis()


def rank(rows: Iterable[Dict[int, "Fraction | int"]], ncols: int) -> int:
    ech = Echelon(ncols)
    for row in rows:
        ech.insert(row)
    return ech.rank


def columns_rank(vectors: Iterable[Sequence[Fraction]], ncols_hint: int = 0) -> int:
    """Rank of a family of dense vectors (treated as rows)."""
    vecs = [
        {i: v for i, v in enumerate(vec) if v}
        for vec in vectors
    ]
    ncols = ncols_hint
    for vec in vecs:
        if vec:
            ncols = max(ncols, max(vec) + 1)
    return rank(vecs, max(ncols, 1))


def in_span(vectors: List[Sequence[Fraction]], candidate: Sequence[Fraction]) -> bool:
    """True if candidate lies in the rational span of the given vectors."""
    base = columns_rank(vectors, len(candidate))
    return columns_rank(vectors + [candidate], len(candidate)) == base


def spans_equal(a: List[Sequence[Fraction]], b: List[Sequence[Fraction]], dim: int) -> bool:
    """True if the two families span the same subspace of Q^dim."""
    ra = columns_rank(a, dim)
    rb = columns_rank(b, dim)
    return ra == rb == columns_rank(a + b, dim)
