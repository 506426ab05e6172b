import pytest
from hypothesis import given
from hypothesis import strategies as st

from etacong.basis import (PUBLISHED_ROWS, check_periodicity, check_theta17_paths, compute_C,
                           expand_in_g_basis, export_theta_csv, power_window, theta,
                           theta_direct, theta_row, theta17_table)
from etacong.errors import NonzeroResidual, ThetaUnavailable, Unsupported
from etacong.qseries import QSeries, g_series, partition_coeffs


@pytest.mark.parametrize("ell", [5, 7, 13])
def test_theta_rows_match_published(ell):
    assert theta_row(ell) == PUBLISHED_ROWS[ell]


def test_C_examples():
    # U(phi_5^5) = 5^2 * ... ; only the reduction mod 5 is pinned here
    assert compute_C(5, 5, 0).reduced(5) == {1: 1}
    assert compute_C(13, 10, 0).reduced(13) == {}
    assert dict(compute_C(5, 1, 0).items()) == {1: 5}


def test_expansion_reassembles():
    f = g_series(7, 40, 2) + g_series(7, 40, 3).scale(-3)
    exp = expand_in_g_basis(f, 7)
    assert dict(exp.items()) == {2: 1, 3: -3}
    assert exp.evaluate(30) == f.truncate(30)


def test_non_modular_input_leaves_residual():
    p = partition_coeffs(60)
    with pytest.raises(NonzeroResidual):
        expand_in_g_basis(QSeries(p, 0, 60), 5)


def test_power_window_contains_support():
    for lam, mu in [(3, 0), (5, 1), (-2, 2)]:
        lo, hi = power_window(5, lam, mu)
        support = [nu for nu, c in compute_C(5, lam, mu).items() if c]
        assert all(lo <= nu <= hi for nu in support)


@given(st.sampled_from([5, 7, 13]), st.integers(-30, 30), st.integers(-6, 6))
def test_theta_periodic_in_lambda(ell, lam, mu):
    assert theta(ell, lam, mu) == theta(ell, lam + ell, mu)


@given(st.integers(-60, 60), st.integers(-16, 16))
def test_theta17_periodicity(lam, mu):
    assert theta(17, lam, mu) == theta(17, lam - 17, mu) == theta(17, lam + 6, mu - 4)


@pytest.mark.parametrize("ell", [5, 7])
def test_periodicity_by_direct_computation(ell):
    rep = check_periodicity(ell, range(-6, 7), range(-2, 3))
    assert rep["status"] == "verified", rep["failures"][:3]


def test_direct_theta_off_the_row():
    # theta(lam, mu) = theta(lam + 6, mu - 1) for ell = 5, checked from scratch
    assert theta_direct(5, 1, 1) == theta(5, 7, 0)
    assert theta_direct(7, 2, 1) == theta(7, 6, 0)


def test_theta17_table_and_paths():
    table = theta17_table()
    assert len(table) == 68
    assert table[3, 0] == 1 and table[14, 3] == 1
    assert check_theta17_paths()["status"] == "verified"


def test_theta_unavailable_and_unsupported():
    with pytest.raises(ThetaUnavailable):
        theta(11, 1, 0)
    with pytest.raises(Unsupported):
        theta(19, 1, 0)
    with pytest.raises(Unsupported):
        compute_C(17, 1, 0)


def test_export_csv_header():
    lines = export_theta_csv(5).splitlines()
    assert lines[0] == "ell,lambda,mu,theta"
    assert lines[1:] == ["5,0,0,0", "5,1,0,1", "5,2,0,1", "5,3,0,0", "5,4,0,0"]
