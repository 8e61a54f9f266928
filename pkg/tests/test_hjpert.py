import math

import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from polycert.bounds import SizeProfile, epsilon_bound
from polycert.hjpert import (
    Lambda,
    LambdaExhausted,
    Regime,
    neg_perturb,
    perturbation_sum,
    pick_lambda_neg,
    pick_lambda_pos,
    pos_perturb,
    unlucky_count,
)
from polycert.polycore import MvPoly, gradient, parse_poly
from polycert.stereo import stereo_of
from polycert.zerodim import groebner_basis, is_groebner_basis, is_zero_dim_no_infinity, quotient_basis, reduce_poly, s_polynomial

from conftest import integer_mvpolys


def test_pos_perturb_examples():
    x = MvPoly.var(1, 0)
    assert pos_perturb(x**2, 1) == x**4 + 2 * x**2 + 1
    assert pos_perturb(x**2, Lambda(mpq(1, 3), Regime.POS)) == x**2 + (1 + x**2 + x**4).scale(mpq(1, 3))


def test_neg_perturb_examples():
    x = MvPoly.var(1, 0)
    assert neg_perturb(2 * x**4 + 1, 1) == x**4 - x**2


def test_perturbations_need_even_positive_degree():
    with pytest.raises(ValueError):
        pos_perturb(MvPoly.const(2, 1), mpq(1, 2))
    with pytest.raises(ValueError):
        neg_perturb(parse_poly("x1^3 + 1"), mpq(1, 2))


def test_regime_mismatch_rejected():
    x = MvPoly.var(1, 0)
    with pytest.raises(ValueError):
        pos_perturb(x**2, Lambda(mpq(1, 3), Regime.NEG))
    with pytest.raises(ValueError):
        neg_perturb(x**2, Lambda(mpq(1, 3), Regime.POS))


def test_lambda_invariants():
    with pytest.raises(ValueError):
        Lambda(mpq(0), Regime.POS)
    with pytest.raises(ValueError):
        Lambda(mpq(1, 16), Regime.NEG, gamma=2)
    Lambda(mpq(1, 4), Regime.NEG, gamma=2)


def test_neg_perturbation_is_symmetric():
    f = parse_poly("x1^4 + x2^4 + x1^2*x2^2 + 3")
    g = neg_perturb(f, mpq(1, 8))
    swapped = g.compose([MvPoly.var(2, 1), MvPoly.var(2, 0)])
    assert swapped == g


@given(integer_mvpolys(nvars=2, max_degree=4).filter(lambda f: f.degree in (2, 4)), st.integers(1, 50))
def test_pos_perturbation_reconstruction(f, den):
    lam = mpq(1, den)
    assert pos_perturb(f, lam) - f == perturbation_sum(2, f.degree + 2).scale(lam)
    assert f - neg_perturb(f, lam) == perturbation_sum(2, f.degree).scale(lam)


def test_pick_lambda_pos_is_simplest_in_range():
    for p in (SizeProfile(1, 2, 2), SizeProfile(1, 2, 3)):
        eps = epsilon_bound(p).value
        lam = pick_lambda_pos(p).value
        assert 0 < lam <= eps
        assert lam.numerator == 1 and mpq(1, lam.denominator - 1) > eps


def test_unlucky_count_formula():
    assert unlucky_count(2, 4) == 7 * 9
    assert unlucky_count(1, 2) == 4


def test_pick_lambda_neg_first_window():
    lam = pick_lambda_neg(1, 0, 4, seed=0)
    assert mpq(1, 4) < lam.value <= mpq(1, 2)
    assert lam.value.denominator & (lam.value.denominator - 1) == 0


@given(st.integers(1, 12), st.integers(0, 2**64 - 1), st.integers(1, 2), st.sampled_from([2, 4, 6]), st.integers(2, 5))
def test_pick_lambda_neg_window_and_bitsize(gamma, seed, n, d, k):
    size = k * unlucky_count(n, d)
    m = math.ceil(math.log2(size))
    seen = set()
    for attempt in range(min(size, 20)):
        lam = pick_lambda_neg(gamma, attempt, k, seed, n=n, d=d).value
        assert mpq(1, 2 ** (2 * gamma)) < lam <= mpq(1, 2**gamma)
        assert lam.denominator.bit_length() - 1 <= 2 * gamma + 1 + m + 2
        seen.add(lam)
    assert len(seen) == min(size, 20)


def test_pick_lambda_neg_exhausts():
    size = 2 * unlucky_count(1, 2)
    values = {pick_lambda_neg(3, a, 2, 5, n=1, d=2).value for a in range(size)}
    assert len(values) == size
    with pytest.raises(LambdaExhausted):
        pick_lambda_neg(3, size, 2, 5, n=1, d=2)


def _check_perturbed_structure(S, lam):
    D = S.degree
    partials = gradient(pos_perturb(S, lam))
    n = S.nvars
    assert [p.leading_monomial() for p in partials] == [tuple(D + 1 if j == i else 0 for j in range(n)) for i in range(n)]
    gb = groebner_basis(partials)
    for i in range(n):
        for j in range(i + 1, n):
            assert reduce_poly(s_polynomial(partials[i], partials[j]), gb).is_zero()
    assert is_groebner_basis(partials)
    monic = {p.leading_monomial(): p.scale(1 / p.leading_coefficient()) for p in partials}
    assert {g.leading_monomial(): g for g in gb.generators} == monic
    assert quotient_basis(gb).dimension == (D + 1) ** n
    assert is_zero_dim_no_infinity(partials)


@pytest.mark.parametrize("text", ["x1^2 + x2^2 + 4", "x1*x2 + 1", "x1^2 - x2 + 2"])
@pytest.mark.parametrize("lam", [mpq(1), mpq(1, 7), mpq(3, 1000)])
def test_groebner_structure_degree_four(text, lam):
    S = stereo_of(parse_poly(text))
    assert S.degree == 4
    _check_perturbed_structure(S, lam)


@pytest.mark.parametrize("text", ["2*x1 + x2 + 5", "x1 - x2 + 3"])
def test_groebner_structure_degree_two(text):
    S = stereo_of(parse_poly(text))
    assert S.degree == 2
    _check_perturbed_structure(S, mpq(1, 5))
