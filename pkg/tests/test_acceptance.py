"""Acceptance criteria, one test each, at their stated tolerances.

Every test records a single PASS/FAIL line, shown in the terminal summary.
Criteria whose printed reference data disagrees with the computation are
marked strict xfail: they run in full, report FAIL, and would turn the suite
red if they ever started to pass.
"""

import pytest

from conftest import CRITERIA_LINES
from etacong.basis import PUBLISHED_ROWS, check_periodicity, check_theta17_paths, theta_row
from etacong.congruence import (CongruenceClaim, desk_L_checks, desk_L_ok, report_ok,
                                run_claim_set, verify_claim)
from etacong.corollaries import frobenius_identities
from etacong.modeq import (check_valuation_bounds, newton_S, verify_modular_equation,
                           verify_S_identity)
from etacong.oracles import FrobeniusSpec, frobenius_representation, frobenius_table
from etacong.tables import audit_parameter_tables, audit_summary, regenerate_alpha

S_RANGES = {5: 20, 7: 20, 13: 10}


def report(n, ok, detail):
    line = f"CRITERION {n}: {'PASS' if ok else 'FAIL'} - {detail}"
    CRITERIA_LINES.append(line)
    print(line)
    assert ok, line


def nonzero(cap):
    return [r for r in range(-cap, cap + 1) if r]


def test_criterion_01_modular_equations():
    results = [verify_modular_equation(5, 300), verify_modular_equation(7, 300),
               verify_modular_equation(13, 600)]
    report(1, all(r["status"] == "verified" for r in results),
           "E5, E7 to q^299 and E13 to q^599, exact")


def test_criterion_02_power_sum_identity():
    checked = 0
    for ell, cap in S_RANGES.items():
        for r in nonzero(cap):
            verify_S_identity(ell, r, 200)
            checked += 1
    closed = {(5, -1): {0: -5}, (5, -5): {-1: 5}, (7, -4): {0: -49, -1: -28},
              (7, -7): {-1: 343, -2: 7}}
    closed_ok = all(dict(newton_S(ell, r).items()) == want for (ell, r), want in closed.items())
    report(2, closed_ok, f"{checked} identities S = ell U(phi^r) at precision 200; closed forms match")


def test_criterion_03_valuation_lemmas():
    failures = []
    for ell, cap in S_RANGES.items():
        failures += check_valuation_bounds(ell, nonzero(cap), strict=False)["failures"]
    report(3, not failures, f"{len(failures)} violations of floors, support and dichotomy")


def test_criterion_04_theta_tables():
    rows_ok = all(theta_row(ell) == PUBLISHED_ROWS[ell] for ell in (5, 7, 13))
    per = [check_periodicity(ell) for ell in (5, 7, 13)]
    p17 = check_theta17_paths()
    ok = rows_ok and all(p["status"] == "verified" for p in per) and p17["status"] == "verified"
    report(4, ok, f"rows {'match' if rows_ok else 'differ'}; "
                  f"{sum(p['checked'] for p in per)} periodicity relations by two routes; "
                  f"theta_17 reductions {p17['status']}")


@pytest.mark.xfail(strict=True, reason="printed alpha cells disagree with the computed theta chain")
def test_criterion_05_alpha_tables():
    rows = regenerate_alpha()
    bad = [r for r in rows if not r["match"]]
    invariant = all(r["invariant"] for r in rows)
    cells = ", ".join(f"{r['ell']}{r['sign']}{r['class']}:{r['computed']}/{r['printed']}" for r in bad)
    report(5, not bad and invariant,
           f"{len(rows) - len(bad)}/{len(rows)} classes match; computed/printed differ at {cells}")


def test_criterion_06_classical():
    reports = run_claim_set("classical")
    ok = all(r["status"] == "verified" for r in reports)
    report(6, ok, "; ".join(f"{r['label']} {r['status']}" for r in reports))


def test_criterion_07_theorem_desk_scale():
    reports = run_claim_set("theorem", 40)
    bad = [r for r in reports if not report_ok(r)]
    report(7, not bad, f"{len(reports)} (ell, c, d, r) claims, m in [0, 40], {len(bad)} violations")


def test_criterion_08_L_valuation_and_product_form():
    reports = desk_L_checks()
    bad = [(r["ell"], r["c"], r["d"], r["r"]) for r in reports if not desk_L_ok(r)]
    report(8, not bad, f"{len(reports)} L_r checks (valuation windows of 40 for r <= 2, "
                       f"product form for r <= 3); failures {bad}")


def test_criterion_09_frobenius():
    finals = [CongruenceClaim("frobenius", k, 0, 1, 2, 1, "congruence") for k in (5, 7, 11)]
    final_reports = [verify_claim(cl, 30) for cl in finals]
    lattice_ok = all(frobenius_table(FrobeniusSpec(k), 40) == frobenius_representation(k, 40)
                     for k in (5, 7))
    identities_ok = all(s["status"] == "verified" for k in (5, 7) for s in frobenius_identities(k))
    components = [CongruenceClaim("generalized", 5, 0, 1, 2, 1, "congruence"),
                  CongruenceClaim("generalized", 5, 6, -5, 2, 2, "congruence"),
                  CongruenceClaim("generalized", 7, 0, 1, 2, 1, "congruence"),
                  CongruenceClaim("generalized", 7, 4, -3, 2, 1, "congruence"),
                  CongruenceClaim("generalized", 7, 8, -7, 2, 1, "congruence"),
                  CongruenceClaim("generalized", 11, 0, 1, 2, 1, "congruence"),
                  CongruenceClaim("classical", 11, 1, 0, 3, 3, "congruence")]
    comp_reports = [verify_claim(cl, 30) for cl in components]
    probe = verify_claim(CongruenceClaim("generalized", 11, 0, 1, 2, 2, "congruence"), 30)
    ok = (all(r["status"] == "verified" for r in final_reports + comp_reports)
          and lattice_ok and identities_ok)
    report(9, ok, f"finals {[r['status'] for r in final_reports]}; lattice cross-check "
                  f"{'ok' if lattice_ok else 'FAILED'}; components "
                  f"{sum(r['status'] == 'verified' for r in comp_reports)}/{len(comp_reports)}; "
                  f"p[11^1](121m+66) mod 11^2 {probe['status']} (mod 11 holds)")


def test_criterion_10_witnesses():
    reports = run_claim_set("witnesses")
    ok = all(r["status"] == "witness_found" for r in reports)
    report(10, ok, "; ".join(f"{r['label']} at m={r['details'].get('witness', {}).get('m')}"
                             for r in reports))


@pytest.mark.xfail(strict=True, reason="two printed cells beyond the b_7 residue disagree")
def test_criterion_11_table_audit():
    findings = audit_parameter_tables()
    summary = audit_summary(findings)
    expected = {k for k in summary if k[:3] == ("regular", 7, "n") and k[5] == "table"}
    others = sorted(set(summary) - expected)
    detail = (f"{len(findings)} entries; b_7 residue {'reported' if expected else 'NOT reported'}; "
              f"other disagreements: "
              + ("none" if not others else ", ".join(f"{k[0]} ell={k[1]} {k[2]}_{{{k[3]}}}={k[4]}"
                                                     for k in others)))
    report(11, bool(expected) and not others, detail)
