import random
from fractions import Fraction

import pytest

import corpus
from craut import (
    ModelError,
    VarTable,
    holomorphic_nondegeneracy,
    new_model,
    parse_poly,
    quadric_from_matrices,
    quadric_matrices,
    quadric_nondegenerate,
    validate_normal_form,
)
from craut.model import QuadricData, QuadricError, coerce_matrix
from craut.poly import REAL
from craut.scalars import GaussianRational

R2 = VarTable(1, ((2, 1),), REAL)


def test_heisenberg_model_valid(heisenberg):
    assert heisenberg.n == 1 and heisenberg.d == 1
    assert heisenberg.is_quadric()


def test_quadric_c7_model_valid(quadric_c7):
    assert quadric_c7.n == 4 and quadric_c7.d == 3
    assert quadric_c7.is_quadric()
    report = validate_normal_form(quadric_c7)
    assert report.ok


def test_pluriharmonic_rejected():
    with pytest.raises(ModelError) as err:
        new_model(1, ((2, 1),), [parse_poly("z1^2", R2)])
    assert any("pluriharmonic" in v for v in err.value.violations)


def test_nonreal_rejected():
    with pytest.raises(ModelError) as err:
        new_model(1, ((2, 1),), [parse_poly("i*z1*conj(z1)", R2)])
    assert any("reality" in v for v in err.value.violations)


def test_inhomogeneous_rejected():
    p = parse_poly("z1*conj(z1)+z1^2*conj(z1)^2", R2)
    with pytest.raises(ModelError) as err:
        new_model(1, ((2, 1),), [p])
    assert any("homogeneous" in v for v in err.value.violations)


def test_zero_component_rejected():
    table = VarTable(1, ((2, 2),), REAL)
    with pytest.raises(ModelError) as err:
        new_model(1, ((2, 2),), [parse_poly("z1*conj(z1)", table), parse_poly("0", table)])
    assert any("zero" in v for v in err.value.violations)


def test_triangular_dependence_enforced():
    # block-1 component may not depend on its own block's u variable
    table = VarTable(2, ((2, 1), (4, 1)), REAL)
    p1 = parse_poly("z1*conj(z1)", table)
    bad = parse_poly("u2*z1*conj(z1)", table)  # u2 belongs to block 2 itself
    with pytest.raises(ModelError) as err:
        new_model(2, ((2, 1), (4, 1)), [p1, bad])
    assert any("u2" in v for v in err.value.violations)


def test_dependent_first_block_rejected():
    table = VarTable(2, ((2, 2),), REAL)
    p = parse_poly("z1*conj(z1)", table)
    q = parse_poly("2*z1*conj(z1)", table)
    with pytest.raises(ModelError) as err:
        new_model(2, ((2, 2),), [p, q])
    assert any("dependent" in v for v in err.value.violations)


def test_bloom_graham_quadric_vacuous(d2_quadric):
    report = validate_normal_form(d2_quadric)
    assert report.ok
    # quadrics have no u-dependence: conditions (d) contribute no checks
    assert not any(c.condition.startswith("(d)") for c in report.checks)


def test_bloom_graham_flags_forbidden_term():
    # m = (2, 4) with P2 containing u1 * P1
    table = VarTable(2, ((2, 1), (4, 1)), REAL)
    p1 = parse_poly("z1*conj(z1)+z2*conj(z2)", table)
    p2 = parse_poly("u1*z1*conj(z1)+u1*z2*conj(z2)+z1^2*conj(z1)^2", table)
    model = new_model(2, ((2, 1), (4, 1)), [p1, p2])
    report = validate_normal_form(model)
    assert not report.ok
    bad = [c for c in report.failures() if c.condition.startswith("(d)")]
    assert len(bad) == 1 and "u1*P[1]" in bad[0].condition


def test_bloom_graham_clean_u_dependence():
    report = validate_normal_form(corpus.udep24())
    assert report.ok
    assert any(c.condition.startswith("(d)") for c in report.checks)


def test_bloom_graham_same_block_copy_flagged():
    table = VarTable(2, ((2, 2),), REAL)
    p1 = parse_poly("z1*conj(z1)", table)
    p2 = parse_poly("z1*conj(z1)+z2*conj(z2)", table)  # contains a copy of p1
    model = new_model(2, ((2, 2),), [p1, p2])
    report = validate_normal_form(model)
    bad = [c for c in report.failures() if c.condition.startswith("(c)")]
    assert len(bad) == 1


def test_quadric_from_matrices_heisenberg(heisenberg):
    data = QuadricData((coerce_matrix([[1]]),))
    assert quadric_from_matrices(data) == heisenberg


def test_quadric_from_matrices_quadric_c7(quadric_c7):
    i = GaussianRational(0, 1)
    z = GaussianRational(0)
    o = GaussianRational(1)
    a1 = coerce_matrix([[0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 0]])
    a2 = coerce_matrix([[0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 1]])
    a3 = coerce_matrix([[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]])
    model = quadric_from_matrices(QuadricData((a1, a2, a3)))
    assert model == quadric_c7


def test_matrix_round_trip(quadric_c7):
    data = quadric_matrices(quadric_c7)
    assert quadric_from_matrices(data) == quadric_c7


def test_dependent_matrices_rejected():
    ident = coerce_matrix([[1, 0], [0, 1]])
    with pytest.raises(QuadricError) as err:
        QuadricData((ident, ident))
    assert "dependent" in str(err.value)


def test_non_hermitian_rejected():
    with pytest.raises(QuadricError):
        QuadricData((coerce_matrix([[0, 1], [0, 0]]),))


def test_quadric_nondegeneracy():
    assert quadric_nondegenerate(QuadricData((coerce_matrix([[1]]),)))
    assert quadric_nondegenerate(quadric_matrices(corpus.quadric_c7()))
    assert not quadric_nondegenerate(QuadricData((coerce_matrix([[1, 0], [0, 0]]),)))


def test_holomorphic_nondegeneracy_heisenberg(heisenberg):
    verdict = holomorphic_nondegeneracy(heisenberg, Fraction(2))
    assert not verdict.degenerate
    assert verdict.bound == 2


def test_joint_kernel_gives_constant_witness():
    # A with kernel vector (1, -1): P = |z1 + z2|^2-like degenerate form
    a = coerce_matrix([[1, 1], [1, 1]])
    model = quadric_from_matrices(QuadricData((a,)))
    verdict = holomorphic_nondegeneracy(model)
    assert verdict.degenerate
    x = verdict.witness
    # constant-coefficient witness in the joint kernel
    assert all(q.homogeneous_scaled_degree() == 0 for q in x.f if q)
    from craut.fields import complex_tangency_residual

    assert all(r.is_zero() for r in complex_tangency_residual(x, model))


def test_product_model_witness_is_dz2():
    model = corpus.degenerate_quadric()
    verdict = holomorphic_nondegeneracy(model)
    assert verdict.degenerate
    x = verdict.witness
    table = model.hol_table
    assert x.f[0].is_zero()
    assert x.f[1] == parse_poly("1", table)
    assert all(g.is_zero() for g in x.g)


def test_quadric_nondegeneracy_matches_general_search():
    # on quadrics the joint-kernel criterion and the weight-by-weight search
    # must agree (checked up to the default bound; small cases only)
    rng = random.Random(71)
    cases = [corpus.heisenberg(), corpus.d2_quadric(), corpus.degenerate_quadric()]
    for _ in range(4):
        cases.append(corpus.random_nondegenerate_quadric(rng, 2, rng.randint(1, 2)))
    for model in cases:
        matrix_verdict = quadric_nondegenerate(quadric_matrices(model))
        search_verdict = holomorphic_nondegeneracy(model)
        assert matrix_verdict == (not search_verdict.degenerate)


def test_substitute_w_examples(heisenberg, quadric_c7):
    hol = heisenberg.hol_table
    real = heisenberg.real_table
    assert heisenberg.substitute_w(parse_poly("w1", hol)) == parse_poly(
        "u1+i*z1*conj(z1)", real
    )
    hol0 = quadric_c7.hol_table
    real0 = quadric_c7.real_table
    assert quadric_c7.substitute_w(parse_poly("z3", hol0)) == parse_poly("z3", real0)
    assert quadric_c7.substitute_w(parse_poly("w2*z3", hol0)) == parse_poly(
        "u2*z3+i*z4*conj(z4)*z3", real0
    )


def test_substitute_w_preserves_weight_and_is_homomorphism(models):
    rng = random.Random(47)
    for _, model in models:
        hol = model.hol_table
        for _ in range(10):
            # random homogeneous HOL polynomial
            from craut.poly import monomials_of_scaled_degree

            degree = rng.randint(1, 5)
            monos = monomials_of_scaled_degree(hol, degree)
            if not monos:
                continue
            from craut.poly import Polynomial

            terms = {}
            for exps in monos:
                if rng.random() < 0.4:
                    terms[exps] = GaussianRational(rng.randint(-2, 2), rng.randint(-2, 2))
            p = Polynomial(hol, terms)
            image = model.substitute_w(p)
            if p:
                assert image.is_homogeneous_of_scaled_degree(degree)
            q = Polynomial.monomial(hol, monos[0])
            assert model.substitute_w(p * q) == image * model.substitute_w(q)
