import pytest
from hypothesis import given
from hypothesis import strategies as st

from etacong.errors import BoundViolated, IdentityViolated
from etacong.modeq import (GPolynomial, check_valuation_bounds, format_equation, load_equation,
                           newton_residual, newton_S, parse_equation, strip_comments,
                           equation_text, support_range, valuation_floor, verify_modular_equation,
                           verify_S_identity)


@pytest.mark.parametrize("ell,prec", [(5, 120), (7, 120), (13, 200)])
def test_modular_equation_holds(ell, prec):
    assert verify_modular_equation(ell, prec)["status"] == "verified"


@pytest.mark.parametrize("ell", [5, 7, 13])
def test_perturbed_equation_is_caught(ell):
    eq = load_equation(ell)
    j, p, _ = eq.entries()[len(eq.entries()) // 2]
    with pytest.raises(IdentityViolated):
        verify_modular_equation(ell, 200, eq.perturbed(j, p, 1))


@pytest.mark.parametrize("ell", [5, 7, 13])
def test_equation_file_round_trip(ell):
    eq = load_equation(ell)
    assert parse_equation(format_equation(eq), ell) == eq
    assert sorted(format_equation(eq).splitlines()) == sorted(strip_comments(equation_text(ell)).splitlines())


def test_parse_rejects_non_monic():
    with pytest.raises(ValueError):
        parse_equation("5\t0\t2\n", 5)
    with pytest.raises(ValueError):
        parse_equation("4\t1\n", 5)


@pytest.mark.parametrize("ell,r,terms", [
    (5, -1, {0: -5}),
    (5, -5, {-1: 5}),
    (5, 1, {1: 25}),
    (7, -4, {0: -49, -1: -28}),
    (7, -7, {-1: 343, -2: 7}),
    (13, -2, {-1: -26, 0: -13}),
])
def test_closed_form_power_sums(ell, r, terms):
    assert dict(newton_S(ell, r).items()) == terms


@pytest.mark.parametrize("ell", [5, 7, 13])
@pytest.mark.parametrize("h", range(1, 6))
@pytest.mark.parametrize("reciprocal", [False, True])
def test_newton_identities_close(ell, h, reciprocal):
    assert not newton_residual(ell, h, reciprocal)


@given(st.sampled_from([5, 7, 13]), st.integers(-10, 10).filter(bool))
def test_power_sum_equals_scaled_U_phi(ell, r):
    assert verify_S_identity(ell, r, 80)["status"] == "verified"


@pytest.mark.parametrize("ell,cap", [(5, 40), (7, 40), (13, 15)])
def test_valuation_bounds(ell, cap):
    rep = check_valuation_bounds(ell, [r for r in range(-cap, cap + 1) if r])
    assert rep["status"] == "verified"


def test_extremal_power_for_negative_r():
    # for r < 0 the least power carries the minimal valuation; the largest need not
    rows = check_valuation_bounds(5, range(-40, 0))["rows"]
    assert all(row["least_power_carries_valuation"] for row in rows)
    assert not all(row["largest_power_carries_valuation"] for row in rows)


def test_bound_violation_is_raised_in_strict_mode(monkeypatch):
    import etacong.modeq as modeq
    monkeypatch.setattr(modeq, "valuation_floor", lambda ell, r, p: 99)
    with pytest.raises(BoundViolated):
        modeq.check_valuation_bounds(5, [3])


def test_support_and_floor_values():
    assert support_range(5, 3) == (1, 3)
    assert support_range(13, -4) == (-2, 0)
    assert valuation_floor(7, 5, 2) == (14 - 10 + 3) // 4


@given(st.dictionaries(st.integers(-4, 4), st.integers(-9, 9)),
       st.dictionaries(st.integers(-4, 4), st.integers(-9, 9)))
def test_gpolynomial_ring_laws(a, b):
    A, B = GPolynomial(a), GPolynomial(b)
    assert A * B == B * A
    assert (A + B) - B == A
    assert A * GPolynomial({0: 1}) == A
