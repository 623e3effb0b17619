"""Sparse weighted polynomials in the two coefficient rings.

Two rings share one variable shape (n tangential variables plus d normal
variables grouped into blocks):

* HOL ring: variables ``z1..zn, w1..wd`` (holomorphic coordinates),
* REAL ring: variables ``z1..zn, zb1..zbn, u1..ud`` (zbk is the conjugate
  of zk, uk is the real part of wk).

Each variable carries an integer *scaled weight*: z and zb count 1, a normal
variable of block j counts m_j.  The externally visible weight of a monomial
is its scaled weight divided by m_1, so all weight bookkeeping inside loops is
integer arithmetic.

Monomials are exponent tuples over the ring's variables; a polynomial is a
sparse map monomial -> GaussianRational with zero coefficients never stored.
The canonical monomial order (scaled weight, then lexicographic exponents)
makes equality structural and all outputs deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .scalars import GaussianRational, ZERO, ONE

HOL = "hol"
REAL = "real"

Exponents = Tuple[int, ...]


@dataclass(frozen=True)
class VarTable:
    """Variable shape shared by both rings: n z-variables and blocked normals.

    ``blocks`` lists (m_j, l_j) pairs: the j-th block contributes l_j normal
    variables of scaled weight m_j.  The m_j must be strictly increasing and
    >= 2; multiplicities l_j >= 1.
    """

    n: int
    blocks: Tuple[Tuple[int, int], ...]
    ring: str

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need at least one z variable")
        if not self.blocks:
            raise ValueError("need at least one block")
        if self.ring not in (HOL, REAL):
            raise ValueError(f"unknown ring tag {self.ring!r}")
        prev = 1
        for m, l in self.blocks:
            if m < 2:
                raise ValueError(f"block order {m} must be >= 2")
            if m <= prev:
                raise ValueError("block orders must be strictly increasing")
            if l < 1:
                raise ValueError("block multiplicity must be >= 1")
            prev = m

    # -- shape -------------------------------------------------------------

    @property
    def d(self) -> int:
        return sum(l for _, l in self.blocks)

    @property
    def m1(self) -> int:
        return self.blocks[0][0]

    @property
    def mk(self) -> int:
        return self.blocks[-1][0]

    @property
    def num_vars(self) -> int:
        return (2 * self.n if self.ring == REAL else self.n) + self.d

    def counterpart(self) -> "VarTable":
        """The same shape in the other ring."""
        other = REAL if self.ring == HOL else HOL
        return VarTable(self.n, self.blocks, other)

    def same_shape(self, other: "VarTable") -> bool:
        return self.n == other.n and self.blocks == other.blocks

    # -- variable indexing ---------------------------------------------------

    def z_index(self, i: int) -> int:
        """Index of z_{i+1} (0-based i)."""
        if not 0 <= i < self.n:
            raise IndexError(f"z index {i} out of range")
        return i

    def zbar_index(self, i: int) -> int:
        if self.ring != REAL:
            raise ValueError("conjugate variables exist only in the REAL ring")
        if not 0 <= i < self.n:
            raise IndexError(f"zb index {i} out of range")
        return self.n + i

    def normal_index(self, l: int) -> int:
        """Index of the l-th flattened normal variable (w_l or u_l, 0-based)."""
        if not 0 <= l < self.d:
            raise IndexError(f"normal index {l} out of range")
        return (2 * self.n if self.ring == REAL else self.n) + l

    def block_of_normal(self, l: int) -> int:
        """0-based block index of flattened normal variable l."""
        acc = 0
        for j, (_, mult) in enumerate(self.blocks):
            acc += mult
            if l < acc:
                return j
        raise IndexError(f"normal index {l} out of range")

    def normal_range(self, block: int) -> range:
        start = sum(l for _, l in self.blocks[:block])
        return range(start, start + self.blocks[block][1])

    def scaled_weights(self) -> Tuple[int, ...]:
        zs = [1] * (2 * self.n if self.ring == REAL else self.n)
        ws = []
        for m, l in self.blocks:
            ws.extend([m] * l)
        return tuple(zs + ws)

    def var_names(self) -> Tuple[str, ...]:
        names = [f"z{i + 1}" for i in range(self.n)]
        if self.ring == REAL:
            names += [f"zb{i + 1}" for i in range(self.n)]
            names += [f"u{l + 1}" for l in range(self.d)]
        else:
            names += [f"w{l + 1}" for l in range(self.d)]
        return tuple(names)

    def zero_exponents(self) -> Exponents:
        return (0,) * self.num_vars


# -- monomial helpers --------------------------------------------------------


def scaled_degree(exps: Exponents, table: VarTable) -> int:
    """Scaled weighted degree (an integer) of an exponent tuple."""
    weights = table.scaled_weights()
    return sum(e * w for e, w in zip(exps, weights))


def weighted_degree(exps: Exponents, table: VarTable) -> Fraction:
    """Weighted degree of a monomial in external units (scaled / m_1)."""
    return Fraction(scaled_degree(exps, table), table.m1)


def monomial_key(exps: Exponents, table: VarTable) -> Tuple[int, Exponents]:
    """Canonical total order: graded by scaled weight, ties broken by lex.

    The lexicographic tie-break treats earlier variables as larger, so within
    one weight z1^2 sorts before z1*z2 before z2^2.
    """
    return (scaled_degree(exps, table), tuple(-e for e in exps))


def conjugate_exponents(exps: Exponents, table: VarTable) -> Exponents:
    """Swap the z and zb exponent segments (REAL ring only)."""
    if table.ring != REAL:
        raise ValueError("conjugation is defined only in the REAL ring")
    n = table.n
    return exps[n : 2 * n] + exps[:n] + exps[2 * n :]


def monomials_of_scaled_degree(
    table: VarTable, degree: int, z_only: bool = False
) -> List[Exponents]:
    """All exponent tuples of the given scaled degree, in canonical order.

    With ``z_only`` the normal-variable exponents are forced to zero (and in
    the REAL ring the zb exponents as well), which is the rigid restriction.
    """
    if degree < 0:
        return []
    weights = table.scaled_weights()
    nvars = table.num_vars
    if z_only:
        active = list(range(table.n))
    else:
        active = list(range(nvars))

    out: List[Exponents] = []
    exps = [0] * nvars

    def rec(pos: int, remaining: int):
        if remaining == 0:
            out.append(tuple(exps))
            return
        if pos >= len(active):
            return
        var = active[pos]
        w = weights[var]
        # leave room for the remaining active variables
        max_e = remaining // w
        for e in range(max_e + 1):
            exps[var] = e
            rec(pos + 1, remaining - e * w)
        exps[var] = 0

    rec(0, degree)
    out.sort(key=lambda m: monomial_key(m, table))
    return out


# -- polynomials --------------------------------------------------------------


class Polynomial:
    """Immutable sparse polynomial over a VarTable."""

    __slots__ = ("table", "terms")

    def __init__(self, table: VarTable, terms: Optional[Dict[Exponents, GaussianRational]] = None):
        pruned: Dict[Exponents, GaussianRational] = {}
        if terms:
            for exps, coeff in terms.items():
                coeff = GaussianRational.from_value(coeff)
                if not coeff.is_zero():
                    pruned[exps] = coeff
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "terms", pruned)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, table: VarTable) -> "Polynomial":
        return cls(table)

    @classmethod
    def constant(cls, table: VarTable, value) -> "Polynomial":
        return cls(table, {table.zero_exponents(): GaussianRational.from_value(value)})

    @classmethod
    def variable(cls, table: VarTable, index: int) -> "Polynomial":
        exps = [0] * table.num_vars
        exps[index] = 1
        return cls(table, {tuple(exps): ONE})

    @classmethod
    def monomial(cls, table: VarTable, exps: Exponents, coeff=ONE) -> "Polynomial":
        return cls(table, {tuple(exps): GaussianRational.from_value(coeff)})

    # -- predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def _require_same_ring(self, other: "Polynomial"):
        if self.table != other.table:
            raise ValueError("polynomials live in different rings")

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._require_same_ring(other)
        out = dict(self.terms)
        for exps, coeff in other.terms.items():
            acc = out.get(exps)
            s = coeff if acc is None else acc + coeff
            if s.is_zero():
                out.pop(exps, None)
            else:
                out[exps] = s
        result = Polynomial.__new__(Polynomial)
        object.__setattr__(result, "table", self.table)
        object.__setattr__(result, "terms", out)
        return result

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __neg__(self) -> "Polynomial":
        result = Polynomial.__new__(Polynomial)
        object.__setattr__(result, "table", self.table)
        object.__setattr__(result, "terms", {e: -c for e, c in self.terms.items()})
        return result

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            return self.scale(other)
        self._require_same_ring(other)
        out: Dict[Exponents, GaussianRational] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exps = tuple(a + b for a, b in zip(e1, e2))
                prod = c1 * c2
                acc = out.get(exps)
                s = prod if acc is None else acc + prod
                if s.is_zero():
                    out.pop(exps, None)
                else:
                    out[exps] = s
        result = Polynomial.__new__(Polynomial)
        object.__setattr__(result, "table", self.table)
        object.__setattr__(result, "terms", out)
        return result

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            return self.scale(other)
        return NotImplemented

    def scale(self, value) -> "Polynomial":
        coeff = GaussianRational.from_value(value)
        if coeff.is_zero():
            return Polynomial.zero(self.table)
        result = Polynomial.__new__(Polynomial)
        object.__setattr__(result, "table", self.table)
        object.__setattr__(result, "terms", {e: c * coeff for e, c in self.terms.items()})
        return result

    def __pow__(self, exponent: int) -> "Polynomial":
        if exponent < 0:
            raise ValueError("negative exponents are not supported")
        result = Polynomial.constant(self.table, 1)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.table == other.table and self.terms == other.terms

    def __repr__(self):
        from .exprs import format_poly  # local import to avoid a cycle

        return f"<Polynomial {format_poly(self)}>"

    # -- structure -----------------------------------------------------------

    def sorted_terms(self) -> List[Tuple[Exponents, GaussianRational]]:
        return sorted(self.terms.items(), key=lambda item: monomial_key(item[0], self.table))

    def coefficient(self, exps: Exponents) -> GaussianRational:
        return self.terms.get(tuple(exps), ZERO)

    def homogeneous_scaled_degree(self) -> Optional[int]:
        """Scaled degree if weighted homogeneous (or zero), else None.

        The zero polynomial reports degree 0.
        """
        degree: Optional[int] = None
        for exps in self.terms:
            d = scaled_degree(exps, self.table)
            if degree is None:
                degree = d
            elif degree != d:
                return None
        return 0 if degree is None else degree

    def is_homogeneous_of_scaled_degree(self, degree: int) -> bool:
        """True if zero or weighted homogeneous of exactly the given degree."""
        return all(scaled_degree(e, self.table) == degree for e in self.terms)

    def homogeneous_parts(self) -> Dict[Fraction, "Polynomial"]:
        """Decompose into weighted homogeneous parts keyed by external weight."""
        buckets: Dict[int, Dict[Exponents, GaussianRational]] = {}
        for exps, coeff in self.terms.items():
            buckets.setdefault(scaled_degree(exps, self.table), {})[exps] = coeff
        return {
            Fraction(deg, self.table.m1): Polynomial(self.table, terms)
            for deg, terms in buckets.items()
        }

    # -- calculus -------------------------------------------------------------

    def diff(self, var: int) -> "Polynomial":
        """Formal partial derivative with respect to variable index ``var``."""
        if not 0 <= var < self.table.num_vars:
            raise IndexError(f"variable index {var} out of range")
        out: Dict[Exponents, GaussianRational] = {}
        for exps, coeff in self.terms.items():
            e = exps[var]
            if e == 0:
                continue
            lowered = exps[:var] + (e - 1,) + exps[var + 1 :]
            c = coeff * e
            acc = out.get(lowered)
            s = c if acc is None else acc + c
            if s.is_zero():
                out.pop(lowered, None)
            else:
                out[lowered] = s
        return Polynomial(self.table, out)

    def substitute(
        self,
        images: Dict[int, "Polynomial"],
        target: Optional[VarTable] = None,
    ) -> "Polynomial":
        """Apply the ring homomorphism sending each variable to its image.

        Variables absent from ``images`` map to the target ring's variable of
        the same name; this is what makes same-ring substitution default to
        the identity and lets HOL z-variables pass through to the REAL ring.
        """
        if target is None:
            target = images[next(iter(images))].table if images else self.table
        for img in images.values():
            if img.table != target:
                raise ValueError("substitution images live in different rings")

        name_to_index = {name: i for i, name in enumerate(target.var_names())}
        source_names = self.table.var_names()
        full_images: List[Polynomial] = []
        for var in range(self.table.num_vars):
            if var in images:
                full_images.append(images[var])
            else:
                name = source_names[var]
                idx = name_to_index.get(name)
                if idx is None:
                    raise ValueError(
                        f"variable {name} has no image and no counterpart in the target ring"
                    )
                full_images.append(Polynomial.variable(target, idx))

        # cache powers per variable; exponents are small in practice
        powers: Dict[int, List[Polynomial]] = {}

        def power(var: int, e: int) -> Polynomial:
            plist = powers.setdefault(var, [Polynomial.constant(target, 1)])
            while len(plist) <= e:
                plist.append(plist[-1] * full_images[var])
            return plist[e]

        acc = Polynomial.zero(target)
        for exps, coeff in self.terms.items():
            term = Polynomial.constant(target, coeff)
            for var, e in enumerate(exps):
                if e:
                    term = term * power(var, e)
            acc = acc + term
        return acc

    # -- REAL-ring structure ----------------------------------------------

    def conjugate(self) -> "Polynomial":
        """Complex conjugate: swaps z and zb, conjugates coefficients, fixes u."""
        if self.table.ring != REAL:
            raise ValueError("conjugate of a HOL-ring polynomial leaves the ring")
        out = {
            conjugate_exponents(exps, self.table): coeff.conjugate()
            for exps, coeff in self.terms.items()
        }
        return Polynomial(self.table, out)

    def real_part(self) -> "Polynomial":
        return (self + self.conjugate()).scale(Fraction(1, 2))

    def imag_part(self) -> "Polynomial":
        return (self - self.conjugate()).scale(GaussianRational(0, Fraction(-1, 2)))

    def is_real(self) -> bool:
        return self.conjugate() == self

    def z_degree(self, exps: Exponents) -> int:
        return sum(exps[: self.table.n])

    def zbar_degree(self, exps: Exponents) -> int:
        if self.table.ring != REAL:
            raise ValueError("zbar degree is a REAL-ring notion")
        return sum(exps[self.table.n : 2 * self.table.n])

    def is_pluriharmonic_free(self) -> bool:
        """No monomial purely holomorphic or purely antiholomorphic in z.

        A monomial with zero zb-degree (possibly times u powers) or zero
        z-degree fails the test.
        """
        if self.table.ring != REAL:
            raise ValueError("pluriharmonic test is a REAL-ring notion")
        for exps in self.terms:
            if self.z_degree(exps) == 0 or self.zbar_degree(exps) == 0:
                return False
        return True


def hermitian_inner_product(p: Polynomial, q: Polynomial) -> GaussianRational:
    """Coefficient-wise pairing sum_m p_m * conj(q_m)."""
    if p.table != q.table:
        raise ValueError("polynomials live in different rings")
    total = ZERO
    for exps, coeff in p.terms.items():
        other = q.terms.get(exps)
        if other is not None:
            total = total + coeff * other.conjugate()
    return total
