from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from etacong import _polymul
from etacong.errors import NonIntegralPrefactor, PrecisionError
from etacong.qseries import (EtaQuotient, QSeries, U, dilate, euler_power, expand_euler_product,
                             expand_eta_quotient, g_series, inverse, mul, partition_coeffs,
                             pentagonal_coeffs, phi_series, power, series_min_valuation)

coeff_lists = st.lists(st.integers(-10 ** 30, 10 ** 30), min_size=1, max_size=120)


def schoolbook(a, b, n):
    out = [0] * n
    for i, x in enumerate(a[:n]):
        for j, y in enumerate(b[:n - i]):
            out[i + j] += x * y
    return out


def miller_power(a, k, n):
    """J. C. P. Miller's recurrence for a^k with a[0] != 0."""
    b = [Fraction(a[0]) ** k] + [Fraction(0)] * (n - 1)
    for m in range(1, n):
        s = sum((k * j - m + j) * a[j] * b[m - j] for j in range(1, min(m, len(a) - 1) + 1))
        b[m] = s / (m * a[0])
    return b


def test_partition_values_frozen():
    p = partition_coeffs(201)
    assert p[:10] == [1, 1, 2, 3, 5, 7, 11, 15, 22, 30]
    assert p[24] == 1575
    assert p[100] == 190569292
    assert p[200] == 3972999029388


def test_pentagonal_series():
    assert pentagonal_coeffs(16) == [1, -1, -1, 0, 0, 1, 0, 1, 0, 0, 0, 0, -1, 0, 0, -1]


@given(coeff_lists, coeff_lists, st.integers(1, 150))
def test_kronecker_matches_schoolbook(a, b, n):
    assert _polymul.mul_trunc(a, b, n) == schoolbook(a, b, n)


@given(coeff_lists, st.integers(1, 150))
def test_square_matches_product(a, n):
    assert _polymul.square_trunc(a, n) == schoolbook(a, a, n)


@given(st.lists(st.integers(-5, 5), min_size=1, max_size=25).filter(lambda a: a[0] != 0),
       st.integers(0, 9))
def test_power_matches_miller(a, k):
    n = 25
    s = QSeries(a + [0] * (n - len(a)), 0, n)
    P = power(s, k)
    assert [P[i] for i in range(n)] == miller_power(a + [0] * (n - len(a)), k, n)


@given(st.lists(st.integers(-9, 9), min_size=2, max_size=40))
def test_unit_inverse(a):
    a = [1] + a
    s = QSeries(a, 0, len(a))
    prod = mul(s, inverse(s))
    assert list(prod.coeffs) == [1] + [0] * (len(a) - 1)


@given(st.lists(st.integers(-50, 50), min_size=30, max_size=60),
       st.lists(st.integers(-50, 50), min_size=5, max_size=10), st.sampled_from([2, 3, 5, 7]))
def test_U_pulls_out_dilated_factor(f, g, p):
    F = QSeries(f, 0, len(f))
    G = QSeries(g, 0, len(g))
    lhs = U(mul(F, dilate(G, p)).truncate(len(f)), p)
    rhs = mul(G, U(F, p)).truncate(lhs.prec)
    assert lhs == rhs


def test_inverse_euler_product_is_partition_function():
    assert expand_euler_product(((1, -1),), 300) == partition_coeffs(300)


@given(st.integers(-6, 6), st.integers(-6, 6))
def test_euler_powers_add(e1, e2):
    n = 60
    assert _polymul.mul_trunc(euler_power(e1, n), euler_power(e2, n), n) == euler_power(e1 + e2, n)


def test_eta_quotient_prefactor():
    assert expand_eta_quotient(EtaQuotient.of((25, 1), (1, -1)), 10).lead == 1
    with pytest.raises(NonIntegralPrefactor):
        expand_eta_quotient(EtaQuotient.of((1, -1)), 10)


def test_phi_and_g_leading_terms():
    assert phi_series(5, 10).lead == 1
    assert phi_series(13, 20).lead == 7
    assert g_series(5, 10).lead == 1 and g_series(5, 10)[1] == 1


def test_g7_expansion():
    # (q^7;q^7)^4 / (q;q)^4 = 1 + 4q + 14q^2 + ...
    g = g_series(7, 6)
    assert [g[n] for n in range(1, 4)] == [1, 4, 14]


def test_min_valuation_window():
    s = QSeries([25, 50, 0, 10], 0, 4)
    assert series_min_valuation(s, 5, 4) == 1
    assert series_min_valuation(s, 5, 2) == 2
    with pytest.raises(PrecisionError):
        series_min_valuation(s, 5, 10)


def test_U_empty_window_raises():
    with pytest.raises(PrecisionError):
        U(QSeries([1, 2, 3], 1, 4), 7)


def test_serialization_round_trip():
    s = QSeries([3, -1, 4], -2, 1)
    assert QSeries.loads(s.dumps()) == s
