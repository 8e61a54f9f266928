"""Shared hypothesis profile and polynomial strategies."""

from __future__ import annotations

from gmpy2 import mpq
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from polycert.polycore import MvPoly, UvPoly

settings.register_profile(
    "seeded",
    derandomize=True,
    deadline=None,
    max_examples=50,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("seeded")


def rationals(max_num: int = 20, max_den: int = 6):
    return st.builds(mpq, st.integers(-max_num, max_num), st.integers(1, max_den))


def nonzero_rationals(max_num: int = 20, max_den: int = 6):
    return rationals(max_num, max_den).filter(lambda q: q != 0)


@st.composite
def mvpolys(draw, nvars: int | None = None, max_degree: int = 3, max_terms: int = 5, coeffs=None):
    n = draw(st.integers(1, 3)) if nvars is None else nvars
    coeffs = coeffs if coeffs is not None else rationals()
    exps = st.lists(st.integers(0, max_degree), min_size=n, max_size=n).filter(lambda e: sum(e) <= max_degree)
    items = draw(st.lists(st.tuples(exps, coeffs), max_size=max_terms))
    terms: dict = {}
    for e, c in items:
        terms[tuple(e)] = terms.get(tuple(e), mpq(0)) + c
    return MvPoly(n, terms)


@st.composite
def uvpolys(draw, max_degree: int = 6, coeffs=None):
    coeffs = coeffs if coeffs is not None else rationals()
    return UvPoly(draw(st.lists(coeffs, max_size=max_degree + 1)))


def integer_mvpolys(nvars: int | None = None, max_degree: int = 3, bound: int = 5):
    return mvpolys(nvars=nvars, max_degree=max_degree, coeffs=st.integers(-bound, bound).map(mpq))
