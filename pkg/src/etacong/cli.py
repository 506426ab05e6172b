"""Command-line front end.

Exit codes: 0 all checks passed, 1 a mathematical check failed,
2 usage or configuration error, 3 precision, reduction or range failure.
"""

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import asdict, dataclass, fields

from . import __version__
from .errors import (EtacongError, OracleRangeExceeded, PrecisionError, Unsupported,
                     VerificationFailure)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_PRECISION = 0, 1, 2, 3
FORMATS = ("json", "csv", "text")
CONFIG_ENV = "ETACONG_CONFIG"


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    prec: int = 300
    bound: int = 0  # 0 means each claim's own default
    r_cap_5: int = 20
    r_cap_7: int = 20
    r_cap_13: int = 10
    lattice_cap: int = 10 ** 8
    workers: int = 1
    format: str = "text"
    verbosity: int = 0

    def r_cap(self, ell):
        return getattr(self, f"r_cap_{ell}")

    def validate(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name == "format":
                if v not in FORMATS:
                    raise ConfigError(f"format must be one of {FORMATS}")
            elif f.name in ("bound", "verbosity"):
                if v < 0:
                    raise ConfigError(f"{f.name} must be nonnegative")
            elif v <= 0:
                raise ConfigError(f"{f.name} must be positive")
        return self


def parse_config(text):
    """Flat key=value lines; '#' starts a comment. Unknown keys are rejected."""
    known = {f.name: f.type for f in fields(RunConfig)}
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in known:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if known[key] in (int, "int"):
            try:
                values[key] = int(value)
            except ValueError:
                raise ConfigError(f"line {lineno}: {key} needs an integer") from None
        else:
            values[key] = value
    return RunConfig(**values).validate()


def load_config(path=None):
    path = path or os.environ.get(CONFIG_ENV)
    if not path:
        return RunConfig()
    try:
        with open(path) as fh:
            return parse_config(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None


# -- output ----------------------------------------------------------------

def _jsonable(x):
    if isinstance(x, float) and x == float("inf"):
        return "inf"
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def emit(cfg, payload, rows=None, text=None, out=None):
    """Write payload as JSON, rows as CSV, or the text rendering."""
    out = out or sys.stdout
    if cfg.format == "json":
        out.write(json.dumps(_jsonable(payload), indent=2, sort_keys=True) + "\n")
    elif cfg.format == "csv":
        rows = rows if rows is not None else [payload]
        cols = sorted({k for r in rows for k in r})
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: json.dumps(_jsonable(v)) if isinstance(v, (list, dict)) else v
                        for k, v in r.items()})
        out.write(buf.getvalue())
    else:
        out.write(text if text is not None else json.dumps(_jsonable(payload), indent=2,
                                                           sort_keys=True) + "\n")


def _ells(arg, allowed):
    if arg == "all":
        return list(allowed)
    ell = int(arg)
    if ell not in allowed:
        raise Unsupported(f"ell must be one of {allowed} or 'all'")
    return [ell]


# -- commands --------------------------------------------------------------

def cmd_verify_modeq(args, cfg):
    from .modeq import SUPPORTED, verify_modular_equation
    results = []
    failed = False
    for ell in _ells(args.ell, SUPPORTED):
        prec = args.prec or (600 if ell == 13 else cfg.prec)
        try:
            results.append(verify_modular_equation(ell, prec))
        except VerificationFailure as exc:
            failed = True
            results.append({"ell": ell, "status": "violated", "error": str(exc)})
    text = "".join(f"ell={r['ell']}: {r['status']}"
                   + (f" to q^{r['max_exponent']}" if "max_exponent" in r else f" ({r['error']})")
                   + "\n" for r in results)
    emit(cfg, {"results": results}, results, text)
    return EXIT_FAIL if failed else EXIT_OK


def _r_values(ell, cfg, r):
    if r is not None:
        return [r]
    cap = cfg.r_cap(ell)
    return [x for x in range(-cap, cap + 1) if x]


def cmd_s_poly(args, cfg):
    from .modeq import SUPPORTED, check_valuation_bounds, newton_S, verify_S_identity
    rows = []
    failed = False
    prec = args.prec or 200
    for ell in _ells(args.ell, SUPPORTED):
        rs = _r_values(ell, cfg, args.r)
        for r in rs:
            S = newton_S(ell, r, cap=max(abs(r), cfg.r_cap(ell)))
            row = {"ell": ell, "r": r, "terms": {str(p): c for p, c in S.items()}}
            if args.verify:
                try:
                    verify_S_identity(ell, r, prec)
                    row["identity"] = "verified"
                except VerificationFailure as exc:
                    row["identity"] = f"violated: {exc}"
                    failed = True
            rows.append(row)
        if args.bounds:
            rep = check_valuation_bounds(ell, rs, strict=False)
            failed |= bool(rep["failures"])
            for row in rows:
                if row["ell"] == ell:
                    bad = [f for f in rep["failures"] if f["r"] == row["r"]]
                    row["bounds"] = "verified" if not bad else bad
    lines = []
    for row in rows:
        poly = " + ".join(f"({c})*g^{p}" for p, c in sorted(row["terms"].items(), key=lambda t: int(t[0])))
        extra = "".join(f"  [{k}: {row[k]}]" for k in ("identity", "bounds") if k in row)
        lines.append(f"S_{{{row['r']},{row['ell']}}} = {poly}{extra}\n")
    emit(cfg, {"rows": rows}, rows, "".join(lines))
    return EXIT_FAIL if failed else EXIT_OK


def cmd_theta(args, cfg):
    from .basis import (PUBLISHED_ROWS, check_periodicity, check_theta17_paths, export_theta_csv,
                        theta_row, theta_table)
    ell = args.ell
    if args.export:
        data = export_theta_csv(ell)
        if args.export == "-":
            sys.stdout.write(data)
        else:
            with open(args.export, "w") as fh:
                fh.write(data)
        return EXIT_OK
    payload = {"ell": ell}
    failed = False
    if ell == 17:
        table = theta_table(17)
        payload["table"] = [[lam, mu, v] for (lam, mu), v in sorted(table.items())]
        text = "".join(f"mu={mu}: " + ",".join(str(table[lam, mu]) for lam in range(17)) + "\n"
                       for mu in range(4))
    else:
        row = list(theta_row(ell))
        payload["row"] = row
        payload["matches_published"] = row == list(PUBLISHED_ROWS[ell])
        failed |= not payload["matches_published"]
        text = ",".join(map(str, row)) + "\n"
    if args.periodicity:
        rep = check_theta17_paths() if ell == 17 else check_periodicity(ell)
        payload["periodicity"] = rep
        failed |= rep["status"] != "verified"
        text += f"periodicity: {rep['status']} ({len(rep['failures'])} failures)\n"
    emit(cfg, payload, None, text)
    return EXIT_FAIL if failed else EXIT_OK


def cmd_params(args, cfg):
    from .congruence import alpha, sequence_params
    from .errors import ThetaUnavailable
    with_A = args.ell != 11
    params = sequence_params(args.ell, args.c, args.d, args.rmax, with_A=with_A)
    payload = params.to_dict()
    try:
        payload["alpha"] = alpha(args.ell, args.c, args.d)
    except ThetaUnavailable:
        payload["alpha"] = None
    failures = params.invariant_failures()
    payload["invariant_failures"] = failures
    rows = [{"r": r, "lambda": params.lambdas[r], "mu": params.mus[r], "n": params.ns[r],
             "residue": params.residues[r], "A": params.A[r] if params.A else None}
            for r in range(args.rmax + 1)]
    text = f"ell={args.ell} c={args.c} d={args.d} omega={params.omega} alpha={payload['alpha']}\n"
    text += "r  lambda  mu  n  residue  A\n"
    text += "".join(f"{x['r']}  {x['lambda']}  {x['mu']}  {x['n']}  {x['residue']}  {x['A']}\n"
                    for x in rows)
    if failures:
        text += "invariant failures:\n" + "".join(f"  {f}\n" for f in failures)
    emit(cfg, payload, rows, text)
    return EXIT_FAIL if failures else EXIT_OK


def cmd_verify(args, cfg):
    from .congruence import (parse_claims, report_ok, reports_text, run_claim_set,
                             verify_claims)
    M = args.bound if args.bound is not None else (cfg.bound or None)
    workers = args.workers or cfg.workers
    if args.corollary:
        from .corollaries import corollary_suite
        rep = corollary_suite(args.corollary, M, cfg.lattice_cap)
        rows = [{"step": s["step"], "kind": s["kind"], "status": s["status"]} for s in rep["steps"]]
        text = "".join(f"{s['status']:<18} {s['kind']:<13} {s['step']}\n" for s in rep["steps"])
        text += f"{args.corollary}: {'ok' if rep['ok'] else 'FAILED'}\n"
        emit(cfg, rep, rows, text)
        return EXIT_OK if rep["ok"] else EXIT_FAIL
    if args.set:
        reports = run_claim_set(args.set, M, workers)
    else:
        try:
            with open(args.claims) as fh:
                claims = parse_claims(fh.read())
        except OSError as exc:
            raise ConfigError(f"cannot read claims: {exc}") from None
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        reports = verify_claims(claims, M, workers)
    rows = [{"claim": r["claim"], "label": r["label"], "status": r["status"]} for r in reports]
    emit(cfg, {"reports": reports}, rows, reports_text(reports))
    return EXIT_OK if all(report_ok(r) for r in reports) else EXIT_FAIL


def cmd_check_l(args, cfg):
    from .congruence import check_L, desk_L_checks, desk_L_ok
    if args.desk:
        reports = desk_L_checks(window=args.window)
    else:
        if None in (args.ell, args.c, args.d, args.r):
            raise ConfigError("check-l needs --desk or all of --ell --c --d --r")
        reports = [check_L(args.ell, args.c, args.d, args.r, window=args.window)]
        reports[0]["valuation_checked"] = args.ell != 11
    ok = all(desk_L_ok(r) if "bound_ok" in r else r["product_match"] for r in reports)
    text = "".join(
        f"ell={r['ell']} (c,d)=({r['c']},{r['d']}) r={r['r']} A={r.get('A')} "
        f"valuation={r.get('valuation')} product={'match' if r['product_match'] else 'MISMATCH'} "
        f"[{r['comparison']}]\n" for r in reports)
    emit(cfg, {"reports": reports}, reports, text)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_table(args, cfg):
    from .tables import alpha_grid, audit_parameter_tables, audit_summary, regenerate_alpha
    if args.which in ("alpha5-7-13", "alpha17"):
        ells = (5, 7, 13) if args.which == "alpha5-7-13" else (17,)
        rows = regenerate_alpha(ells)
        bad = [r for r in rows if not r["match"]]
        text = ""
        for ell in ells:
            for sign in ("+", "-"):
                text += f"ell={ell} sign {sign} (c+ell*d {'>' if sign == '+' else '<'} 0)\n"
                text += alpha_grid(rows, ell, sign) + "\n"
        text += f"{len(bad)} of {len(rows)} classes differ from the printed table\n"
        text += "".join(f"  ell={r['ell']} sign {r['sign']} class {r['class']}: computed "
                        f"{r['computed']}, printed {r['printed']}\n" for r in bad)
        emit(cfg, {"rows": rows, "mismatches": len(bad)}, rows, text)
        return EXIT_OK if not bad else EXIT_FAIL
    findings = [f for f in audit_parameter_tables() if f["family"] == args.which]
    summary = audit_summary(findings)
    payload = {"findings": findings,
               "discrepancies": [{"cell": list(k), "cases": v} for k, v in sorted(summary.items())]}
    text = f"{len(findings)} entries checked, {len(summary)} printed cells disagree\n"
    for key, cases in sorted(summary.items()):
        fam, ell, qty, idx, val, src = key
        text += (f"  {fam} ell={ell} {qty}_{{{idx}}} = {val} ({src}): "
                 + "; ".join(f"r={c['r']} printed {c['printed']} computed {c['computed']}"
                             for c in cases) + "\n")
    external = sorted({(f["ell"], f["quantity"]) for f in findings if f["status"] == "external"})
    if external:
        text += "externally sourced (not recomputed): " + ", ".join(f"ell={e} {q}" for e, q in external) + "\n"
    emit(cfg, payload, findings, text)
    return EXIT_OK if not summary else EXIT_FAIL


def cmd_selftest(args, cfg):
    """Consistency of the packaged data files and a few fast identities."""
    from .basis import PUBLISHED_ROWS, theta17_table, theta_row
    from .modeq import SUPPORTED, load_equation, verify_modular_equation
    from .tables import audit_parameter_tables, printed_alpha
    checks = []

    def check(name, fn):
        try:
            ok = bool(fn())
            checks.append({"check": name, "status": "ok" if ok else "failed"})
        except EtacongError as exc:
            checks.append({"check": name, "status": f"error: {exc}"})

    for ell in SUPPORTED:
        check(f"modular equation ell={ell} parses", lambda ell=ell: load_equation(ell).entries())
        prec = 200 if ell == 13 else 60
        check(f"modular equation ell={ell} holds to q^{prec - 1}",
              lambda ell=ell, prec=prec: verify_modular_equation(ell, prec))
        check(f"theta_{ell} row matches published data",
              lambda ell=ell: tuple(theta_row(ell)) == PUBLISHED_ROWS[ell])
    check("theta_17 table covers 17 x 4 cells",
          lambda: sorted(theta17_table()) == [(lam, mu) for lam in range(17) for mu in range(4)])
    printed = printed_alpha()
    check("alpha table for ell = 5, 7, 13 complete",
          lambda: all((ell, s, j) in printed for ell in (5, 7, 13) for s in "+-" for j in range(24)))
    check("alpha table for ell = 17 complete",
          lambda: all((17, s, j) in printed for s in "+-" for j in range(96)))
    check("parameter tables parse", lambda: len(audit_parameter_tables((1,))) > 0)
    ok = all(c["status"] == "ok" for c in checks)
    emit(cfg, {"checks": checks, "ok": ok}, checks,
         "".join(f"{c['status']:<8} {c['check']}\n" for c in checks))
    return EXIT_OK if ok else EXIT_FAIL


# -- parser ----------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="etacong",
                                description="Verify eta-quotient partition congruences.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--config", help=f"key=value config file (default: ${CONFIG_ENV})")
    p.add_argument("--format", choices=FORMATS, help="output format")
    p.add_argument("-v", "--verbose", action="count", default=None)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("verify-modeq", help="check a modular equation coefficientwise")
    s.add_argument("--ell", default="all", help="5, 7, 13 or all")
    s.add_argument("--prec", type=int, help="q-precision (default 300, 600 for ell=13)")
    s.set_defaults(func=cmd_verify_modeq)

    s = sub.add_parser("s-poly", help="power sums S_{r,ell} as polynomials in g")
    s.add_argument("--ell", default="all")
    s.add_argument("--r", type=int, help="single r (default: every nonzero r up to the cap)")
    s.add_argument("--verify", action="store_true", help="check S = ell U(phi^r)")
    s.add_argument("--bounds", action="store_true", help="check the valuation lemmas")
    s.add_argument("--prec", type=int, help="q-precision for --verify (default 200)")
    s.set_defaults(func=cmd_s_poly)

    s = sub.add_parser("theta", help="theta table for one prime")
    s.add_argument("--ell", type=int, required=True, choices=(5, 7, 13, 17))
    s.add_argument("--export", metavar="PATH", help="write the table as CSV ('-' for stdout)")
    s.add_argument("--periodicity", action="store_true", help="also check the reduction relations")
    s.set_defaults(func=cmd_theta)

    s = sub.add_parser("params", help="lambda, mu, n, A and alpha for (ell, c, d)")
    s.add_argument("--ell", type=int, required=True, choices=(5, 7, 11, 13, 17))
    s.add_argument("--c", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--rmax", type=int, default=4)
    s.set_defaults(func=cmd_params)

    s = sub.add_parser("verify", help="check congruence claims against the oracles")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--claims", metavar="FILE",
                   help="one claim per line: family ell c d r exponent direction [residue]")
    g.add_argument("--corollary", choices=("frobenius5", "frobenius7", "frobenius11",
                                           "frobenius13", "regular", "core"))
    g.add_argument("--set", choices=("classical", "theorem", "witnesses"),
                   help="a built-in claim set")
    s.add_argument("--bound", type=int, help="largest m checked")
    s.add_argument("--workers", type=int, help="worker threads")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("check-l", help="valuation and product form of L_r")
    s.add_argument("--desk", action="store_true", help="all desk-scale cases")
    s.add_argument("--ell", type=int, choices=(5, 7, 11, 13))
    s.add_argument("--c", type=int)
    s.add_argument("--d", type=int)
    s.add_argument("--r", type=int)
    s.add_argument("--window", type=int, default=40)
    s.set_defaults(func=cmd_check_l)

    s = sub.add_parser("table", help="regenerate a printed table and diff it")
    s.add_argument("--which", required=True, choices=("alpha5-7-13", "alpha17", "regular", "core"))
    s.set_defaults(func=cmd_table)

    s = sub.add_parser("selftest", help="check the packaged data files")
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
        overrides = {}
        if args.format:
            overrides["format"] = args.format
        if args.verbose is not None:
            overrides["verbosity"] = args.verbose
        cfg = RunConfig(**{**asdict(cfg), **overrides}).validate()
        return args.func(args, cfg)
    except ConfigError as exc:
        print(f"etacong: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Unsupported as exc:
        print(f"etacong: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PrecisionError, OracleRangeExceeded) as exc:
        print(f"etacong: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except VerificationFailure as exc:
        print(f"etacong: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except ValueError as exc:
        print(f"etacong: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
