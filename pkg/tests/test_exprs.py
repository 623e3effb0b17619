import random
from fractions import Fraction

import pytest

from craut.exprs import ExprError, format_poly, format_scalar, parse_poly, parse_scalar
from craut.poly import HOL, REAL, Polynomial, VarTable
from craut.scalars import GaussianRational

R = VarTable(4, ((2, 3),), REAL)
H = VarTable(4, ((2, 3),), HOL)


def test_parse_examples():
    p = parse_poly("z1*conj(z3)+z3*conj(z1)", R)
    expected = Polynomial(R, {
        (1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0): GaussianRational(1),
        (0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0): GaussianRational(1),
    })
    assert p == expected
    assert parse_poly("0", R).is_zero()
    q = parse_poly("(1/2)*i*w2^2", H)
    (exps, coeff), = q.terms.items()
    assert coeff == GaussianRational(0, Fraction(1, 2))
    assert exps[H.normal_index(1)] == 2


def test_zbk_alias():
    assert parse_poly("zb3", R) == parse_poly("conj(z3)", R)


def test_parse_errors_carry_offsets():
    with pytest.raises(ExprError) as err:
        parse_poly("z1*", R)
    assert err.value.offset == 3
    with pytest.raises(ExprError) as err:
        parse_poly("z1+q7", R)
    assert err.value.offset == 3
    with pytest.raises(ExprError) as err:
        parse_poly("z9", R)  # beyond n=4
    assert err.value.offset == 0
    with pytest.raises(ExprError) as err:
        parse_poly("1/0", R)
    assert err.value.offset == 2
    with pytest.raises(ExprError):
        parse_poly("z1 z2", R)  # implicit multiplication is not allowed


def test_wrong_ring_variables_rejected():
    with pytest.raises(ExprError):
        parse_poly("w1", R)
    with pytest.raises(ExprError):
        parse_poly("u1", H)
    with pytest.raises(ExprError):
        parse_poly("conj(z1)", H)
    with pytest.raises(ExprError):
        parse_poly("zb1", H)


def test_format_rules():
    assert format_poly(Polynomial.zero(R)) == "0"
    assert format_poly(parse_poly("-z1", R)) == "-z1"
    assert format_poly(parse_poly("z1-z2", R)).startswith("z1 - ")
    # zb on input, conj on output
    assert format_poly(parse_poly("zb2", R)) == "conj(z2)"
    assert format_poly(parse_poly("-i*w1", H)) == "-i*w1"
    assert format_poly(parse_poly("(1+2*i)*z1", H)) == "(1+2*i)*z1"


def test_format_scalar_round_trip():
    rng = random.Random(23)
    for _ in range(300):
        s = GaussianRational(
            Fraction(rng.randint(-9, 9), rng.randint(1, 9)),
            Fraction(rng.randint(-9, 9), rng.randint(1, 9)),
        )
        assert parse_scalar(format_scalar(s)) == s
    assert format_scalar(GaussianRational(0)) == "0"
    assert format_scalar(GaussianRational(0, 1)) == "i"
    assert format_scalar(GaussianRational(0, -1)) == "-i"


def test_parse_scalar_rejects_variables():
    with pytest.raises(ExprError):
        parse_scalar("z1")


def random_polynomial(rng: random.Random, table: VarTable) -> Polynomial:
    terms = {}
    for _ in range(rng.randint(0, 8)):
        exps = tuple(rng.randint(0, 3) for _ in range(table.num_vars))
        terms[exps] = GaussianRational(
            Fraction(rng.randint(-12, 12), rng.randint(1, 7)),
            Fraction(rng.randint(-12, 12), rng.randint(1, 7)),
        )
    return Polynomial(table, terms)


def test_round_trip_random():
    rng = random.Random(29)
    for table in (R, H):
        for _ in range(250):
            p = random_polynomial(rng, table)
            assert parse_poly(format_poly(p), table) == p


def test_format_is_idempotent_canonicalization():
    rng = random.Random(31)
    for _ in range(100):
        p = random_polynomial(rng, R)
        text = format_poly(p)
        assert format_poly(parse_poly(text, R)) == text


def test_parse_never_crashes_on_garbage():
    # total on arbitrary input: a value or a positioned error, nothing else
    rng = random.Random(37)
    alphabet = "z1u2w3b+-*/^() conji\t."
    for _ in range(500):
        src = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 24)))
        try:
            parse_poly(src, R)
        except ExprError as exc:
            assert 0 <= exc.offset <= len(src)
