import pytest

from etacong.corollaries import SUITE_NAMES, corollary_suite, frobenius_product_series
from etacong.oracles import frobenius_representation


@pytest.mark.parametrize("k", [5, 7, 11, 13])
def test_product_representation_matches_components(k):
    assert frobenius_product_series(k, 120) == frobenius_representation(k, 120)


@pytest.mark.parametrize("name", ["frobenius5", "regular", "core"])
def test_fast_suites_pass(name):
    rep = corollary_suite(name, M=15)
    assert rep["ok"], [s for s in rep["steps"] if s["status"] not in ("verified", "witness_found")]


def test_eleven_probe_reports_the_weaker_exponent():
    rep = corollary_suite("frobenius11", M=10)
    probe = next(s for s in rep["steps"] if s["kind"] == "probe")
    assert probe["status"] == "violated"
    assert rep["ok"]


def test_unknown_suite():
    with pytest.raises(ValueError):
        corollary_suite("nope")
    assert len(SUITE_NAMES) == 6
