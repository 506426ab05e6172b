from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from etacong.tables import (alpha_class, audit_parameter_tables, audit_summary, eval_expr,
                            printed_alpha, regenerate_alpha, representatives)


def test_eval_expr():
    assert eval_expr("(5^(2r)-1)/6", 1) == 4
    assert eval_expr("(3*7^(2r)-1)/4", 1) == Fraction(73, 2)
    assert eval_expr("2r-1", 3) == 5
    assert eval_expr("-12", 2) == -12
    with pytest.raises(ValueError):
        eval_expr("__import__('os')", 1)
    with pytest.raises(ValueError):
        eval_expr("r ** (1/2)", 4)


@given(st.integers(0, 95), st.sampled_from(["+", "-"]))
def test_representatives_have_the_right_class_and_sign(res, sign):
    ks = representatives(res, 96, sign)
    assert len(ks) == 3
    assert all(k % 96 == res for k in ks)
    assert all(k > 0 if sign == "+" else k < 0 for k in ks)


def test_alpha_invariant_over_representatives():
    rows = regenerate_alpha()
    assert all(r["invariant"] for r in rows)
    assert len(rows) == 2 * (3 * 24 + 96)


def test_alpha_disagreements_are_exactly_the_known_cells():
    bad = {(r["ell"], r["sign"], r["class"]) for r in regenerate_alpha() if not r["match"]}
    expected = {(5, "-", 24), (7, "-", 24)}
    expected |= {(13, s, j) for s in "+-" for j in (8, 9, 21)}
    expected |= {(17, s, j) for s in "+-" for j in (36, 37, 71)}
    assert bad == expected


def test_printed_negative_note_for_17():
    printed = printed_alpha()
    assert [printed[17, "-", (24 * i + 24) % 96] for i in range(4)] == [0, 2, 0, 0]
    assert alpha_class(17, 0, 96, "-")[0] == 0


def test_parameter_audit_findings():
    summary = audit_summary(audit_parameter_tables())
    cells = {(k[0], k[1], k[2], k[5]) for k in summary}
    assert cells == {("regular", 7, "n", "table"), ("core", 5, "A", "table"),
                     ("core", 7, "mu", "table")}
    b7 = summary[next(k for k in summary if k[:2] == ("regular", 7))]
    assert b7[0]["status"] == "non_integral" and b7[0]["computed"] == 12


def test_corollary_variant_of_b7_matches():
    rows = [f for f in audit_parameter_tables((1, 2)) if f["family"] == "regular"
            and f["ell"] == 7 and f["source"] == "corollary"]
    assert rows and all(f["status"] == "match" for f in rows)
