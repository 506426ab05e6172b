"""Expansion of modular functions in powers of g_ell, the matrix entries
C(lambda; mu, nu) of f -> U_ell(phi_ell^lambda f), and the theta tables.

C(lambda; mu, nu) is the coefficient of g^nu in U_ell(phi^lambda g^mu), and
theta_ell(lambda, mu) = 1 exactly when every such coefficient is divisible
by ell.
"""

import csv
import io
import threading
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

from .arith import ceil_div
from .errors import NonTerminating, NonzeroResidual, ThetaUnavailable, Unsupported
from .qseries import (QSeries, U, delta, expand_eta_quotient, g_eta, g_exponent,
                      mul, phi_eta)

BASIS_PRIMES = (5, 7, 13)
THETA_PRIMES = (5, 7, 13, 17)
DEFAULT_MARGIN = 30


@dataclass(frozen=True)
class GBasisExpansion:
    ell: int
    entries: dict = field(default_factory=dict)
    residual_checked_to: int = 0

    def items(self):
        return sorted(self.entries.items())

    def __getitem__(self, nu):
        return self.entries.get(nu, 0)

    def all_divisible(self, m):
        return all(c % m == 0 for c in self.entries.values())

    def reduced(self, m):
        return {nu: c % m for nu, c in self.items() if c % m}

    def evaluate(self, prec):
        total = QSeries([0], 0, prec)
        for nu, c in self.items():
            total = total + expand_eta_quotient(g_eta(self.ell, nu), max(prec, nu + 1)).scale(c)
        return total.truncate(prec)


def expand_in_g_basis(f, ell, margin=10, step_cap=None):
    """Write ``f`` as a finite sum of C * g_ell^nu by triangular reduction.

    Only powers nu < f.prec - margin may be used; the last ``margin`` known
    coefficients must then vanish, which is what separates a genuine finite
    expansion from one that merely runs out of precision.
    """
    if ell not in BASIS_PRIMES:
        raise Unsupported(f"no g-basis reduction for ell={ell}")
    prec = f.prec
    max_power = prec - margin - 1
    start = f.lead
    if max_power < start:
        raise NonzeroResidual(start, "window shorter than the residual margin")
    if step_cap is None:
        step_cap = prec - start
    rem = list(f.extend_lead(start).coeffs[:prec - start])
    entries = {}
    # g^p is built incrementally from g^start by multiplying with g
    g = expand_eta_quotient(g_eta(ell), prec - start + 2)
    cur_p = start
    cur = expand_eta_quotient(g_eta(ell, start), prec) if start != 0 else QSeries([1], 0, prec)
    steps = 0
    i = 0
    while True:
        while i < len(rem) and not rem[i]:
            i += 1
        if i == len(rem):
            break
        p = start + i
        if p > max_power:
            raise NonzeroResidual(p, f"coefficient {rem[i]} left after reduction")
        steps += 1
        if steps > step_cap:
            raise NonTerminating(f"greedy reduction exceeded {step_cap} steps")
        while cur_p < p:
            cur = mul(cur, g).truncate(prec)
            cur_p += 1
        c = rem[i]
        entries[p] = c
        for n, a in cur.items():
            if a:
                rem[n - start] -= c * a
        if rem[i]:  # g^p has leading coefficient 1
            raise AssertionError("reduction step failed to clear the leading term")
    return GBasisExpansion(ell, entries, prec - 1)


def power_window(ell, lam, mu):
    """(lowest, highest) g-power that U(phi^lam g^mu) can contain."""
    lo = ceil_div(delta(ell) * lam + mu, ell)
    hi = delta(ell) * max(lam + g_exponent(ell) * mu, 0) - mu
    return lo, max(hi, lo)


@lru_cache(maxsize=4096)
def _compute_C(ell, lam, mu, prec):
    f = expand_eta_quotient(phi_eta(ell, lam) * g_eta(ell, mu), ell * prec)
    uf = U(f, ell)
    cap = 10 * (abs(lam) + abs(mu) + 1) * ell
    return expand_in_g_basis(uf, ell, margin=DEFAULT_MARGIN, step_cap=cap)


def compute_C(ell, lam, mu, prec=None):
    """Expansion of U_ell(phi_ell^lam * g_ell^mu) in powers of g_ell."""
    if ell not in BASIS_PRIMES:
        raise Unsupported(f"no g-basis reduction for ell={ell}")
    if prec is None:
        _, hi = power_window(ell, lam, mu)
        prec = hi + 1 + DEFAULT_MARGIN
    return _compute_C(ell, lam, mu, prec)


def theta_direct(ell, lam, mu):
    """theta computed straight from its definition at (lam, mu)."""
    return int(compute_C(ell, lam, mu).all_divisible(ell))


# -- theta tables ----------------------------------------------------------

PUBLISHED_ROWS = {
    5: (0, 1, 1, 0, 0),
    7: (0, 1, 0, 0, 1, 0, 0),
    13: (0,) * 10 + (1, 0, 0),
}

# shift of lambda that trades one unit of mu for mu - 1
MU_SHIFT = {5: 6, 7: 4, 13: 2}


class _ThetaTables:
    def __init__(self):
        self.lock = threading.Lock()
        self.rows = {}

    def row(self, ell):
        with self.lock:
            if ell not in self.rows:
                self.rows[ell] = tuple(theta_direct(ell, lam, 0) for lam in range(ell))
            return self.rows[ell]


_tables = _ThetaTables()


def theta_row(ell):
    """Computed fundamental row theta_ell(0..ell-1, 0)."""
    return _tables.row(ell)


@lru_cache(maxsize=None)
def theta17_table():
    text = resources.files("etacong").joinpath("data").joinpath("theta17.csv").read_text()
    table = {}
    for row in csv.DictReader(io.StringIO(text)):
        table[int(row["lambda"]), int(row["mu"])] = int(row["theta"])
    return table


def reduce_theta17(lam, mu):
    """Fundamental point (lam', mu') with 0 <= lam' < 17 and 0 <= mu' < 4."""
    k, mu0 = divmod(mu, 4)
    return (lam + 6 * k) % 17, mu0


def reduce_theta_args(ell, lam, mu):
    if ell == 17:
        return reduce_theta17(lam, mu)
    return (lam + MU_SHIFT[ell] * mu) % ell, 0


def theta(ell, lam, mu):
    if ell == 11:
        raise ThetaUnavailable("theta_11 is not available; ell=11 is checked with oracles only")
    if ell not in THETA_PRIMES:
        raise Unsupported(f"theta is not defined here for ell={ell}")
    lam0, mu0 = reduce_theta_args(ell, lam, mu)
    if ell == 17:
        return theta17_table()[lam0, mu0]
    return theta_row(ell)[lam0]


def theta_table(ell):
    """All fundamental-domain values as {(lambda, mu): bit}."""
    if ell == 17:
        return dict(theta17_table())
    if ell == 11:
        raise ThetaUnavailable("theta_11 is not available")
    return {(lam, 0): v for lam, v in enumerate(theta_row(ell))}


def export_theta_csv(ell):
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["ell", "lambda", "mu", "theta"])
    for (lam, mu), v in sorted(theta_table(ell).items(), key=lambda kv: (kv[0][1], kv[0][0])):
        w.writerow([ell, lam, mu, v])
    return out.getvalue()


# -- periodicity -----------------------------------------------------------

def check_periodicity(ell, lam_range=range(-12, 13), mu_range=range(-3, 4)):
    """Check the two periodicity relations by direct computation and by table lookup."""
    failures = []
    checked = 0
    shift = MU_SHIFT.get(ell)
    for lam in lam_range:
        for mu in mu_range:
            if ell == 17:
                pairs = [((lam, mu), (lam - 17, mu)), ((lam, mu), (lam + 6, mu - 4))]
            else:
                pairs = [((lam, mu), (lam + ell, mu)), ((lam, mu + 1), (lam + shift, mu))]
            for a, b in pairs:
                checked += 1
                via_table = (theta(ell, *a), theta(ell, *b))
                if via_table[0] != via_table[1]:
                    failures.append({"lhs": a, "rhs": b, "route": "table", "values": via_table})
                if ell != 17:
                    direct = (theta_direct(ell, *a), theta_direct(ell, *b))
                    if direct[0] != direct[1] or direct != via_table:
                        failures.append({"lhs": a, "rhs": b, "route": "direct",
                                         "values": direct, "table": via_table})
    return {"ell": ell, "checked": checked, "failures": failures,
            "status": "verified" if not failures else "violated"}


def check_theta17_paths(lam_range=range(-40, 41), mu_range=range(-12, 13)):
    """Reduce each point along two different orders of the relations; they must agree."""
    table = theta17_table()
    failures = []
    for lam in lam_range:
        for mu in mu_range:
            a = table[reduce_theta17(lam, mu)]
            # alternative path: first bring lambda into [0,17), then step mu
            l2, m2 = lam % 17, mu
            while m2 >= 4:
                l2, m2 = (l2 + 6) % 17, m2 - 4
            while m2 < 0:
                l2, m2 = (l2 - 6) % 17, m2 + 4
            if table[l2, m2] != a:
                failures.append((lam, mu))
    return {"ell": 17, "failures": failures,
            "status": "verified" if not failures else "violated"}
