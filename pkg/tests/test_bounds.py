import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from polycert.bounds import (
    E_DENOMINATOR,
    E_NUMERATOR,
    SizeProfile,
    critical_value_lower_bound,
    epsilon_bound,
    profile_of,
    radius_bound,
)
from polycert.polycore import parse_poly

E4 = mpq(E_NUMERATOR, E_DENOMINATOR) ** 4

small_profiles = st.builds(SizeProfile, st.integers(1, 2), st.integers(1, 3), st.integers(0, 4))


def test_rational_e_bound_is_above_e():
    import math

    assert mpq(E_NUMERATOR, E_DENOMINATOR) > mpq(*math.e.as_integer_ratio())
    assert mpq(E_NUMERATOR, E_DENOMINATOR) - mpq(*math.e.as_integer_ratio()) < mpq(1, 10**9)


def test_profile_validation():
    with pytest.raises(ValueError):
        SizeProfile(0, 2, 0)
    with pytest.raises(ValueError):
        SizeProfile(1, 2, -1)
    assert profile_of(parse_poly("x1^4*x2^2 + x1^2*x2^4 - 3*x1^2*x2^2 + 1")) == SizeProfile(2, 6, 2)


def test_radius_examples():
    assert radius_bound(SizeProfile(1, 2, 2)).value == 2**7
    assert radius_bound(SizeProfile(2, 6, 2)).value == 2**16
    assert radius_bound(SizeProfile(1, 0, 0)).value == 2


def test_critical_value_small_profile():
    assert critical_value_lower_bound(SizeProfile(1, 1, 0)).value == (9 * E4) ** -6 * mpq(1, 4)


def _critical_value_with(p, e_value):
    n, d, tau = p.n, p.d, p.tau
    a = (n + 1) * (n + 2) * d ** (n + 1)
    b = (n + 1) * d**n
    return (mpq((n + 2) ** 2) * e_value ** (n + 3)) ** -a * mpq(n**n * (n + 1) * d * 2**tau) ** -b


@given(small_profiles)
def test_critical_value_is_a_valid_lower_bound(p):
    # e lies in (2718281828/10**9, E_NUMERATOR/E_DENOMINATOR]; the bound is antitone in e.
    c = critical_value_lower_bound(p).value
    assert c == _critical_value_with(p, mpq(E_NUMERATOR, E_DENOMINATOR))
    assert c <= _critical_value_with(p, mpq(2718281828, 10**9))
    assert _critical_value_with(p, mpq(3)) < c


@given(small_profiles)
def test_critical_value_antitone_in_tau(p):
    bumped = SizeProfile(p.n, p.d, p.tau + 1)
    assert critical_value_lower_bound(bumped).value < critical_value_lower_bound(p).value


def test_epsilon_structure():
    p = SizeProfile(1, 2, 2)
    eps = epsilon_bound(p).value
    tau_star = 2 * 1 + 1 + 4 + 2
    c = critical_value_lower_bound(SizeProfile(1, 4, tau_star)).value
    assert eps == c / (6 * mpq(128) ** 6)


@given(small_profiles)
def test_epsilon_magnitudes(p):
    eps = epsilon_bound(p).value
    rad = radius_bound(p).value
    assert 0 < eps <= mpq(1, 6 * p.n) * mpq(2) ** (-(p.n + 2 * p.d + p.tau) * (2 * p.d + 2))
    assert eps < 1
    assert eps < 1 / rad


@given(st.builds(SizeProfile, st.integers(1, 2), st.integers(1, 3), st.integers(1, 4)))
def test_epsilon_antitone_in_tau(p):
    lower = SizeProfile(p.n, p.d, p.tau - 1)
    assert epsilon_bound(p).value < epsilon_bound(lower).value


def test_factored_form_matches_log_estimate():
    b = epsilon_bound(SizeProfile(2, 6, 2))
    assert -248000 < b.log2_estimate() < -247900
