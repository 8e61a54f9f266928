import random

import pytest
from gmpy2 import mpq
from hypothesis import assume, given
from hypothesis import strategies as st

from polycert.exactla import matadd, matmul
from polycert.polycore import MvPoly, UvPoly, gradient, parse_poly
from polycert.stereo import stereo_of
from polycert.zerodim import (
    NotRadicalSignal,
    PositiveDimensionalError,
    QuotientAlgebra,
    compute_rur,
    groebner_basis,
    is_groebner_basis,
    is_squarefree,
    is_zero_dim_no_infinity,
    multiplication_matrix,
    quotient_basis,
    reduce_poly,
    rur_for_form,
    rur_substitution_residue,
)

from conftest import integer_mvpolys
from property_checks import check_rur_substitution, random_gradient_system


def P(text, n=None):
    return parse_poly(text, [f"x{i + 1}" for i in range(n)] if n else None)


def test_groebner_examples():
    gb = groebner_basis(gradient(P("x1^4 + 2*x1^2 + 1")))
    assert gb.generators == (P("x1^3 + x1"),)
    gb2 = groebner_basis([P("x1", 2), P("x2", 2)])
    assert set(gb2.generators) == {P("x1", 2), P("x2", 2)}


def test_unit_ideal_is_flagged():
    gb = groebner_basis([P("x1*x2 - 1", 2), P("x1", 2)])
    assert gb.unit
    assert quotient_basis(gb).dimension == 0


def test_zero_dim_no_infinity_examples():
    assert not is_zero_dim_no_infinity(gradient(stereo_of(P("x1^2 + x2^2 + 4"))))
    assert is_zero_dim_no_infinity([P("x1^2 - 1", 2), P("x2^2 - 1", 2)])
    assert not is_zero_dim_no_infinity([P("x1*x2 - 1", 2), P("x1^2 - x2", 2)])


def test_quotient_basis_examples():
    gb = groebner_basis([P("x1^3 + x1")])
    assert quotient_basis(gb).basis_monomials == ((0,), (1,), (2,))
    gb2 = groebner_basis([P("x1^4 - 1", 2), P("x2^4 + x1", 2)])
    assert quotient_basis(gb2).dimension == 16
    gb3 = groebner_basis([P("x1", 2), P("x2", 2)])
    assert quotient_basis(gb3).basis_monomials == ((0, 0),)


def test_quotient_basis_rejects_positive_dimension():
    gb = groebner_basis([P("x1^2 - 1", 2)])
    with pytest.raises(PositiveDimensionalError) as info:
        quotient_basis(gb)
    assert info.value.variable == 1


def test_multiplication_matrix_examples():
    gb = groebner_basis([P("x1^3 + x1")])
    q = quotient_basis(gb)
    M = multiplication_matrix(gb, q, P("x1"))
    assert M == [[0, 0, 0], [1, 0, -1], [0, 1, 0]]
    assert multiplication_matrix(gb, q, MvPoly.const(1, 1)) == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert multiplication_matrix(gb, q, P("x1^5 + x1^3")) == [[0] * 3] * 3


@given(st.integers(0, 2**32))
def test_multiplication_matrices_are_a_representation(seed):
    rng = random.Random(seed)
    gens = random_gradient_system(rng)
    gb = groebner_basis(gens)
    alg = QuotientAlgebra(gb)
    f = MvPoly(2, {(rng.randint(0, 3), rng.randint(0, 3)): mpq(rng.randint(-3, 3)) for _ in range(3)})
    g = MvPoly(2, {(rng.randint(0, 3), rng.randint(0, 3)): mpq(rng.randint(-3, 3)) for _ in range(3)})
    Mf, Mg = alg.multiplication_matrix(f), alg.multiplication_matrix(g)
    assert alg.multiplication_matrix(f + g) == matadd(Mf, Mg)
    assert alg.multiplication_matrix(f * g) == matmul(Mf, Mg)


def _small_ideal(draw_polys):
    return [p for p in draw_polys if not p.is_zero()]


ideal_strategy = st.integers(2, 3).flatmap(
    lambda n: st.lists(integer_mvpolys(nvars=n, max_degree=2, bound=3), min_size=1, max_size=3)
).map(_small_ideal).filter(bool)


@given(ideal_strategy)
def test_buchberger_correctness(gens):
    gb = groebner_basis(gens)
    for g in gens:
        assert reduce_poly(g, gb).is_zero()
    if not gb.unit:
        assert is_groebner_basis(list(gb.generators))
        assert all(g.leading_coefficient() == 1 for g in gb.generators)


@given(ideal_strategy, st.randoms(use_true_random=False))
def test_buchberger_ignores_generator_order(gens, rnd):
    shuffled = list(gens)
    rnd.shuffle(shuffled)
    a, b = groebner_basis(gens), groebner_basis(shuffled)
    assert a.unit == b.unit
    assert set(a.generators) == set(b.generators)


@given(st.integers(0, 2**32), integer_mvpolys(nvars=2, max_degree=5), integer_mvpolys(nvars=2, max_degree=5))
def test_normal_form_idempotent_and_linear(seed, f, g):
    gb = groebner_basis(random_gradient_system(random.Random(seed)))
    alg = QuotientAlgebra(gb)
    nf = alg.normal_form
    assert nf(nf(f)) == nf(f)
    assert nf(f + g.scale(mpq(3, 2))) == nf(f) + nf(g).scale(mpq(3, 2))
    assert nf(f) == reduce_poly(f, gb)


def test_rur_linear_example():
    gb = groebner_basis(gradient(P("x1^2 - 4*x1 + 5")))
    rur = compute_rur(gb, quotient_basis(gb))
    assert rur.R0 == UvPoly([mpq(-2), mpq(1)])
    assert rur.R == (UvPoly([mpq(2)]),)
    assert rur.point_at(mpq(2)) == (2,)


def test_rur_univariate_cubic():
    gb = groebner_basis([P("x1^3 + x1")])
    rur = compute_rur(gb, quotient_basis(gb))
    assert rur.R0 == UvPoly([mpq(0), mpq(1), mpq(0), mpq(1)])
    T = UvPoly.T()
    assert ((T * rur.R0.derivative() - rur.R[0]) % rur.R0).is_zero()


def test_rur_four_points():
    gb = groebner_basis([P("x1^2 - 1", 2), P("x2^2 - 1", 2)])
    alg = QuotientAlgebra(gb)
    rur = rur_for_form(alg, (mpq(1), mpq(2)))
    T = UvPoly.T()
    expected = UvPoly([mpq(1)])
    for r in (3, -1, 1, -3):
        expected = expected * (T - r)
    assert rur.R0 == expected
    points = {rur.point_at(mpq(r)) for r in (3, -1, 1, -3)}
    assert points == {(1, 1), (-1, 1), (1, -1), (-1, -1)}
    assert rur.point_at(mpq(3)) == (1, 1)


def test_non_radical_ideal_is_signalled():
    gb = groebner_basis([P("x1^2", 2), P("x2 - x1", 2)])
    assert isinstance(compute_rur(gb, quotient_basis(gb)), NotRadicalSignal)


def test_squarefree_check():
    T = UvPoly.T()
    assert is_squarefree(T * (T - 1))
    assert not is_squarefree(T * T * (T - 1))
    assert not is_squarefree(UvPoly())


@given(st.integers(0, 2**32))
def test_rur_substitution_identity(seed):
    gens = random_gradient_system(random.Random(seed))
    assume(check_rur_substitution(gens))


def test_rur_substitution_detects_non_vanishing():
    gb = groebner_basis([P("x1^2 - 1", 2), P("x2^2 - 1", 2)])
    rur = compute_rur(gb, quotient_basis(gb))
    assert not rur_substitution_residue(P("x1 - 1", 2), rur).is_zero()
