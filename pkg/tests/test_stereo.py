import itertools
import random

import pytest
from gmpy2 import mpq
from hypothesis import assume, given
from hypothesis import strategies as st

from polycert.bounds import profile_of, radius_bound
from polycert.polycore import MvPoly, evaluate, parse_poly
from polycert.stereo import (
    NotNegativeError,
    Witness,
    shift_to_positive_constant,
    stereo_of,
    stereo_transform,
    transport_point,
    witness_scale_constant,
    witness_transport,
)

from conftest import integer_mvpolys, rationals
from property_checks import (
    check_coercivity,
    check_stereo_case_identity,
    check_stereo_sphere_identity,
    check_transform_height,
    check_witness_transport,
    negative_grid_points,
    random_sphere_point,
)


def test_transform_examples():
    assert stereo_of(parse_poly("x1^2 + 1")) == parse_poly("x1^4 + 2*x1^2 + 1")
    q = parse_poly("-1 + x1^2 + x2^2")
    assert stereo_of(parse_poly("x1^2 + x2^2 + 4")) == 4 * parse_poly("x1^2 + x2^2") + 4 * q * q
    hom = parse_poly("x1^3*x2 - 2*x1*x2^3")
    assert stereo_of(hom) == hom.compose([2 * MvPoly.var(2, 0), 2 * MvPoly.var(2, 1)])


def test_transform_metadata():
    res = stereo_transform(parse_poly("3*x1^2 - 5*x1 + 1"))
    assert res.source_degree == 2
    assert res.source_height == 5
    assert res.transformed.degree == 4


@given(integer_mvpolys(max_degree=4).filter(lambda f: not f.is_zero() and f.constant_term != 0))
def test_transform_doubles_the_degree(f):
    assert stereo_of(f).degree == 2 * f.degree


@given(integer_mvpolys(nvars=2, max_degree=4).filter(lambda f: not f.is_zero()), st.lists(rationals(), min_size=2, max_size=2))
def test_case_identity_off_the_sphere(f, x):
    check_stereo_case_identity(f, x)


@given(integer_mvpolys(max_degree=4).filter(lambda f: not f.is_zero()), st.integers(0, 2**32))
def test_case_identity_on_the_sphere(f, seed):
    check_stereo_sphere_identity(f, random_sphere_point(random.Random(seed), f.nvars))


@given(
    integer_mvpolys(nvars=2, max_degree=4).filter(lambda f: not f.is_zero()).map(lambda f: f + (1 - f.constant_term)),
    st.lists(rationals(30, 4), min_size=2, max_size=2),
)
def test_coercivity_inequality(f, x):
    r2 = sum(v * v for v in x)
    assume(r2 >= 1)
    check_coercivity(f, x)


@given(integer_mvpolys(max_degree=5).filter(lambda f: not f.is_zero()))
def test_transform_height_bound(f):
    check_transform_height(f)


@given(
    integer_mvpolys(nvars=2, max_degree=4).filter(lambda f: f.degree >= 1).map(lambda f: f + (1 - f.constant_term)),
    st.lists(st.integers(-5, 5), min_size=2, max_size=2).filter(any),
    st.integers(0, 3),
)
def test_positive_outside_radius(f, direction, extra):
    R = radius_bound(profile_of(f)).value
    x = [R * (1 + extra) * v for v in direction]
    assert evaluate(stereo_of(f), x) >= 0


def test_witness_transport_grid_scan():
    f = parse_poly("x1^2 - 4*x1 + 3")
    points = negative_grid_points(f)
    assert points
    for x in points:
        assert check_witness_transport(f, x)


def test_witness_transport_on_the_sphere():
    f = parse_poly("-x1^4 + x2^2 + 1")
    x = (mpq(1), mpq(0))
    assert evaluate(stereo_of(f), x) == -16
    w = witness_transport(f, x)
    c = witness_scale_constant(f, x)
    assert w.point == (2 * c, 0)
    assert w.value == evaluate(f, w.point) < 0


def test_witness_transport_rejects_nonnegative_points():
    f = parse_poly("x1^2 + 1")
    with pytest.raises(NotNegativeError):
        witness_transport(f, [mpq(1, 2)])


@given(integer_mvpolys(nvars=2, max_degree=4).filter(lambda f: f.degree in (2, 4)))
def test_witness_transport_negativity_and_height(f):
    points = negative_grid_points(f, limit=2)
    assume(points)
    for x in points:
        assert check_witness_transport(f, x)


def test_transport_point_off_sphere():
    f = parse_poly("x1^2 - 4*x1 + 3")
    assert transport_point(f, [mpq(3)]) == (mpq(3, 4),)


def test_shift_examples():
    f = parse_poly("x1^2 - 1")
    g, c = shift_to_positive_constant(f, seed=0)
    assert c[0] >= 2
    assert g.constant_term == c[0] ** 2 - 1 > 0
    w = shift_to_positive_constant(parse_poly("-x1^2"), seed=3)
    assert isinstance(w, Witness) and w.value < 0


@given(integer_mvpolys(nvars=2, max_degree=3).filter(lambda f: not f.is_zero()), st.integers(0, 2**64 - 1))
def test_shift_contract(f, seed):
    res = shift_to_positive_constant(f, seed, k=4)
    if isinstance(res, Witness):
        assert evaluate(f, res.point) == res.value < 0
    else:
        g, c = res
        assert g.constant_term == evaluate(f, c) > 0
        assert all(1 <= ci <= 4 * max(f.degree, 1) for ci in c)
        for x in itertools.product([mpq(-1), mpq(1, 2)], repeat=2):
            assert evaluate(g, x) == evaluate(f, [a + b for a, b in zip(x, c)])


def test_shift_is_deterministic():
    f = parse_poly("x1^2 + x2^2 - 2")
    assert shift_to_positive_constant(f, 7) == shift_to_positive_constant(f, 7)


def test_witness_transport_rejects_odd_degree():
    with pytest.raises(ValueError):
        witness_transport(parse_poly("-5*x1"), [mpq(3, 8)])
