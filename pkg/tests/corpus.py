"""Fixture models and random generators shared across the test suite."""

from __future__ import annotations

import random
from typing import List, Tuple

from craut import Model, VarTable, new_model, parse_poly
from craut.model import QuadricData, quadric_from_matrices, quadric_nondegenerate
from craut.poly import REAL, Polynomial, monomials_of_scaled_degree
from craut.scalars import GaussianRational


def _model(n: int, blocks, sources: List[str]) -> Model:
    table = VarTable(n, tuple(blocks), REAL)
    return new_model(n, blocks, [parse_poly(src, table) for src in sources])


def heisenberg() -> Model:
    return _model(1, ((2, 1),), ["z1*conj(z1)"])


def sphere3() -> Model:
    return _model(2, ((2, 1),), ["z1*conj(z1)+z2*conj(z2)"])


def d2_quadric() -> Model:
    return _model(2, ((2, 2),), ["z1*conj(z1)", "z1*conj(z2)+z2*conj(z1)"])


def quadric_c7() -> Model:
    return _model(
        4,
        ((2, 3),),
        [
            "z3*conj(z3)",
            "z4*conj(z4)",
            "z1*conj(z3)+z3*conj(z1)+z2*conj(z4)+z4*conj(z2)",
        ],
    )


def degenerate_quadric() -> Model:
    # A = diag(1, 0) in C^3: d/dz2 is complex-tangent
    return _model(2, ((2, 1),), ["z1*conj(z1)"])


def cubic23() -> Model:
    return _model(1, ((2, 1), (3, 1)), ["z1*conj(z1)", "z1^2*conj(z1)+z1*conj(z1)^2"])


def cubic23_imag() -> Model:
    return _model(
        1, ((2, 1), (3, 1)), ["z1*conj(z1)", "i*z1^2*conj(z1)-i*z1*conj(z1)^2"]
    )


def cubic23_n2() -> Model:
    return _model(
        2,
        ((2, 1), (3, 1)),
        ["z1*conj(z1)+z2*conj(z2)", "z1^2*conj(z2)+conj(z1)^2*z2"],
    )


def tube24() -> Model:
    return _model(
        1, ((2, 1), (4, 1)), ["z1*conj(z1)", "z1^3*conj(z1)+z1*conj(z1)^3"]
    )


def udep24() -> Model:
    # block-2 component genuinely depends on u1
    return _model(
        2,
        ((2, 1), (4, 1)),
        [
            "z1*conj(z1)+z2*conj(z2)",
            "u1*z1*conj(z2)+u1*z2*conj(z1)+z1^2*conj(z1)^2",
        ],
    )


def quadric_n2_d3() -> Model:
    return _model(
        2, ((2, 3),), ["z1*conj(z1)", "z2*conj(z2)", "z1*conj(z2)+z2*conj(z1)"]
    )


def all_models() -> List[Tuple[str, Model]]:
    return [
        ("heisenberg", heisenberg()),
        ("sphere3", sphere3()),
        ("d2_quadric", d2_quadric()),
        ("quadric_c7", quadric_c7()),
        ("degenerate_quadric", degenerate_quadric()),
        ("cubic23", cubic23()),
        ("cubic23_imag", cubic23_imag()),
        ("cubic23_n2", cubic23_n2()),
        ("tube24", tube24()),
        ("udep24", udep24()),
        ("quadric_n2_d3", quadric_n2_d3()),
    ]


# -- random generators ----------------------------------------------------------


def random_scalar(rng: random.Random, bound: int = 2) -> GaussianRational:
    return GaussianRational(rng.randint(-bound, bound), rng.randint(-bound, bound))


def random_hermitian(rng: random.Random, n: int, bound: int = 2):
    a = [[GaussianRational(0)] * n for _ in range(n)]
    for i in range(n):
        a[i][i] = GaussianRational(rng.randint(-bound, bound))
        for j in range(i + 1, n):
            v = random_scalar(rng, bound)
            a[i][j] = v
            a[j][i] = v.conjugate()
    return tuple(tuple(row) for row in a)


def random_nondegenerate_quadric(rng: random.Random, n: int, d: int) -> Model:
    while True:
        mats = tuple(random_hermitian(rng, n) for _ in range(d))
        try:
            data = QuadricData(mats)
        except ValueError:
            continue
        if quadric_nondegenerate(data):
            return quadric_from_matrices(data)


def _random_real_homogeneous(
    rng: random.Random, table: VarTable, degree: int, max_u_block: int
) -> Polynomial:
    """Random real pluriharmonic-free homogeneous polynomial, possibly zero.

    Only u-variables of blocks before ``max_u_block`` may appear.
    """
    n = table.n
    shapes = []
    for exps in monomials_of_scaled_degree(table, degree):
        if sum(exps[:n]) == 0 or sum(exps[n : 2 * n]) == 0:
            continue
        ok = True
        for l in range(table.d):
            if exps[table.normal_index(l)] and table.block_of_normal(l) >= max_u_block:
                ok = False
                break
        if ok:
            shapes.append(exps)
    terms = {}
    for exps in shapes:
        if rng.random() < 0.5:
            continue
        from craut.poly import conjugate_exponents

        conj = conjugate_exponents(exps, table)
        if conj == exps:
            c = GaussianRational(rng.randint(-2, 2))
            if not c.is_zero():
                terms[exps] = (terms.get(exps, GaussianRational(0)) + c)
        else:
            c = random_scalar(rng)
            if not c.is_zero():
                terms[exps] = terms.get(exps, GaussianRational(0)) + c
                terms[conj] = terms.get(conj, GaussianRational(0)) + c.conjugate()
    return Polynomial(table, terms)


def random_model(rng: random.Random) -> Model:
    """A random structurally valid model across the supported block patterns."""
    shape = rng.choice(["quadric", "23", "24"])
    if shape == "quadric":
        n = rng.randint(1, 3)
        d = rng.randint(1, 2) if n > 1 else 1  # d independent Hermitian forms need n > 1
        return random_nondegenerate_quadric(rng, n, d)
    blocks = ((2, 1), (3, 1)) if shape == "23" else ((2, 1), (4, 1))
    n = rng.randint(1, 2)
    table = VarTable(n, blocks, REAL)
    while True:
        p1 = _random_real_homogeneous(rng, table, 2, max_u_block=0)
        p2 = _random_real_homogeneous(rng, table, blocks[1][0], max_u_block=1)
        if p1.is_zero() or p2.is_zero():
            continue
        try:
            return new_model(n, blocks, [p1, p2])
        except ValueError:
            continue
