import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from polycert.polycore import (
    MvPoly,
    PolySyntaxError,
    UvPoly,
    dehomogenize,
    evaluate,
    gradient,
    homogenize,
    norms,
    parse_poly,
    poly_from_terms,
    poly_to_terms,
    serialize_poly,
    top_part,
    uv_gcd,
)

from conftest import integer_mvpolys, mvpolys, rationals, uvpolys

MOTZKIN = "x1^2*x2^4 + x1^4*x2^2 - 3*x1^2*x2^2 + 1"


def X(n, i):
    return MvPoly.var(n, i)


def test_evaluate_examples():
    f = X(2, 0) ** 2 * X(2, 1) - 3
    assert evaluate(f, [2, 1]) == 1
    assert evaluate(MvPoly.zero(2), [mpq(1, 3), 7]) == 0
    g = parse_poly("x1^2 - 4*x1 + 3")
    assert evaluate(g, [2]) == -1


def test_evaluate_rejects_dimension_mismatch():
    with pytest.raises(ValueError):
        evaluate(X(2, 0), [1])


def test_gradient_examples():
    x1, x2 = X(2, 0), X(2, 1)
    assert gradient(x1**2 + x2**2) == [2 * x1, 2 * x2]
    assert gradient(MvPoly.const(3, 5)) == [MvPoly.zero(3)] * 3
    assert gradient(x1**3 * x2) == [3 * x1**2 * x2, x1**3]


def test_homogenize_examples():
    x = X(1, 0)
    h = homogenize(x**2 + 1, 2)
    x0, x1 = X(2, 0), X(2, 1)
    assert h == x1**2 + x0**2
    y1, y2 = X(2, 0), X(2, 1)
    h2 = homogenize(y1 * y2 - 1, 4)
    z0, z1, z2 = X(3, 0), X(3, 1), X(3, 2)
    assert h2 == z0**2 * z1 * z2 - z0**4
    with pytest.raises(ValueError):
        homogenize(x**3, 2)


@given(mvpolys())
def test_homogenize_round_trip(f):
    assert dehomogenize(homogenize(f, max(f.degree, 0))) == f


@given(mvpolys(nvars=2), st.lists(rationals(), min_size=2, max_size=2))
def test_homogenize_evaluates_at_one(f, x):
    assert evaluate(homogenize(f, max(f.degree, 0) + 1), [1] + x) == evaluate(f, x)


def test_top_part_examples():
    assert top_part(parse_poly("x1^4 - 2*x1^2 + 2")) == parse_poly("x1^4")
    assert top_part(parse_poly(MOTZKIN)) == parse_poly("x1^4*x2^2 + x1^2*x2^4")
    assert top_part(parse_poly("x1^2 + x2^2 + 4")) == parse_poly("x1^2 + x2^2")
    with pytest.raises(ValueError):
        top_part(MvPoly.zero(1))


def test_norms_examples():
    assert norms(parse_poly(MOTZKIN)) == (3, 2, 6)
    assert norms(MvPoly.zero(2)) == (0, 0, 0)
    h, _, one = norms(parse_poly("5/2*x1"))
    assert (h, one) == (5, mpq(5, 2))


def test_parse_examples():
    x1, x2 = X(2, 0), X(2, 1)
    assert parse_poly(MOTZKIN) == x1**4 * x2**2 + x1**2 * x2**4 - 3 * x1**2 * x2**2 + 1
    assert parse_poly("-1/2*x1 + x1") == X(1, 0).scale(mpq(1, 2))
    assert parse_poly(" 3 x1 ".replace(" x1", "*x1")) == 3 * X(1, 0)


@pytest.mark.parametrize("text, position", [("x1 + * 2", 5), ("x1^", 3), ("x1 + 1/0", 5), ("2 x1", 2), ("", 0)])
def test_parse_errors_carry_positions(text, position):
    with pytest.raises(PolySyntaxError) as info:
        parse_poly(text)
    assert info.value.position == position


def test_parse_unknown_variable():
    with pytest.raises(PolySyntaxError):
        parse_poly("x1 + y", ["x1"])


@given(mvpolys())
def test_serialize_parse_round_trip(f):
    assert parse_poly(serialize_poly(f), [f"x{i + 1}" for i in range(f.nvars)]) == f


@given(mvpolys())
def test_term_list_round_trip(f):
    assert poly_from_terms(f.nvars, poly_to_terms(f)) == f


def test_term_list_rejects_repeats():
    with pytest.raises(ValueError):
        poly_from_terms(1, [[[1], "1"], [[1], "2"]])


def test_serialization_is_grlex_descending():
    f = parse_poly("1 + x2 + x1 + x1*x2 + x2^2 + x1^2")
    assert serialize_poly(f) == "x1^2 + x1*x2 + x2^2 + x1 + x2 + 1"


@given(mvpolys(nvars=2), mvpolys(nvars=2), mvpolys(nvars=2))
def test_ring_axioms(f, g, h):
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f + g == g + f
    assert f - f == MvPoly.zero(2)


@given(mvpolys(nvars=2), mvpolys(nvars=2))
def test_degree_is_additive(f, g):
    if not f.is_zero() and not g.is_zero():
        assert (f * g).degree == f.degree + g.degree


@given(mvpolys(nvars=3), mvpolys(nvars=3))
def test_gradient_is_linear(f, g):
    assert gradient(f + g) == [a + b for a, b in zip(gradient(f), gradient(g))]


@given(integer_mvpolys(nvars=2), integer_mvpolys(nvars=2))
def test_height_product_bound(f, g):
    assert norms(f * g)[0] <= len(f.terms) * norms(f)[0] * norms(g)[0]


@given(uvpolys(), uvpolys().filter(lambda p: not p.is_zero()))
def test_univariate_division(a, b):
    q, r = a.divmod(b)
    assert q * b + r == a
    assert r.degree < b.degree


@given(uvpolys(4), uvpolys(4), uvpolys(3).filter(lambda p: p.degree >= 1))
def test_univariate_gcd_divides(a, b, c):
    if a.is_zero() and b.is_zero():
        return
    g = uv_gcd(a * c, b * c)
    assert ((a * c) % g).is_zero() and ((b * c) % g).is_zero()
    assert (g % c.monic()).is_zero()


def test_univariate_evaluation_and_derivative():
    p = UvPoly([mpq(3), mpq(-4), mpq(1)])
    assert p(mpq(2)) == -1
    assert p.derivative() == UvPoly([mpq(-4), mpq(2)])


def _euclid_gcd(a: UvPoly, b: UvPoly) -> UvPoly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


@given(uvpolys(max_degree=5), uvpolys(max_degree=5), uvpolys(max_degree=3))
def test_univariate_gcd_matches_rational_euclid(a, b, c):
    assert uv_gcd(a * c, b * c) == _euclid_gcd(a * c, b * c)


def test_univariate_gcd_of_large_coprime_inputs():
    a = UvPoly([mpq(3**200 + 1), 0, mpq(2**300)])
    b = UvPoly([mpq(-(5**150)), mpq(7)])
    assert uv_gcd(a, b) == UvPoly([1])
    assert uv_gcd(a * b, b * b) == b.monic()
