"""Sequence parameters, the functions L_r, and oracle-backed congruence checks.

For a prime ell and integers c, d, L_0 = 1 and L_r = U_ell(phi^lambda_(r-1) L_(r-1))
with lambda_r = c for even r and d for odd r. Up to an eta-product factor,
L_r generates p_[1^c ell^d](ell^r m + n_r), and the ell-adic order of its
coefficients is at least A_r = sum_(i<r) theta(lambda_i, mu_i).
"""

import json
from dataclasses import asdict, dataclass, field

from .arith import canonical_residue, ceil_div, valuation
from .basis import theta
from .errors import OracleRangeExceeded, ThetaUnavailable
from .oracles import GeneralizedPartitionSpec, frobenius_representation, gp_table
from .qseries import (QSeries, U, delta, euler_product_series, expand_eta_quotient,
                      mul, phi_eta, series_min_valuation)

ELLS = (5, 7, 11, 13, 17)
FAMILIES = ("generalized", "classical", "regular", "core", "frobenius")
DIRECTIONS = ("congruence", "incongruence")

DEFAULT_CONGRUENCE_BOUND = 40
DEFAULT_CONGRUENCE_BOUND_LARGE = 20  # ell = 13, 17
DEFAULT_WITNESS_BOUND = 50


def omega(ell, c, d):
    k = c + ell * d
    return 1 if k < 0 and k % 24 == 0 else 0


def n_closed(ell, c, d, r):
    """n_r from the geometric-series formula."""
    if r == 0:
        return 0
    if r % 2 == 0:
        return -(c + ell * d) * (ell ** r - 1) // 24
    return -c * (ell ** (r + 1) - 1) // 24 - ell * d * (ell ** (r - 1) - 1) // 24


def mu_closed(ell, c, d, r):
    """Least m with ell^r m + n_r >= 0."""
    return ceil_div(-n_closed(ell, c, d, r), ell ** r)


def mu_gordon(ell, c, d, r):
    """The ceiling-plus-omega form, valid when |c + ell d| < ell^r; None otherwise."""
    k = c + ell * d
    if r == 0 or abs(k) >= ell ** r:
        return None
    top = ell * c + d if r % 2 else k
    return ceil_div(top, 24) + omega(ell, c, d)


@dataclass
class SequenceParams:
    ell: int
    c: int
    d: int
    r_max: int
    lambdas: list
    mus: list
    ns: list
    residues: list
    omega: int
    A: list = None
    mus_closed: list = field(default_factory=list)
    mus_gordon: list = field(default_factory=list)
    ns_closed: list = field(default_factory=list)

    def to_dict(self):
        return asdict(self)

    def invariant_failures(self):
        out = []
        for r in range(self.r_max + 1):
            mod = self.ell ** r
            if r and (24 * self.residues[r] - (self.c + self.ell * self.d)) % mod:
                out.append(f"24*residue != c + ell d mod ell^{r}")
            if self.ns[r] != self.ns_closed[r]:
                out.append(f"n_{r}: recursion {self.ns[r]} != closed form {self.ns_closed[r]}")
            if r and self.residues[r] != self.ns[r] % mod:
                out.append(f"residue_{r} != n_{r} mod ell^{r}")
            if r and self.mus[r] != self.mus_closed[r]:
                out.append(f"mu_{r}: recursion {self.mus[r]} != least-m form {self.mus_closed[r]}")
            g = self.mus_gordon[r]
            if g is not None and g != self.mus[r]:
                out.append(f"mu_{r}: recursion {self.mus[r]} != ceiling form {g}")
        if self.A is not None and any(b < a for a, b in zip(self.A, self.A[1:])):
            out.append("A_r decreases")
        return out


def sequence_params(ell, c, d, r_max, with_A=True):
    if ell not in ELLS:
        raise ValueError(f"ell must be one of {ELLS}")
    dl = delta(ell)
    lambdas = [c if r % 2 == 0 else d for r in range(r_max + 1)]
    mus = [0]
    ns = [0]
    for r in range(1, r_max + 1):
        mus.append(ceil_div(dl * lambdas[r - 1] + mus[r - 1], ell))
        ns.append(ns[r - 1] - dl * lambdas[r - 1] * ell ** (r - 1))
    residues = [0] + [canonical_residue(c + ell * d, ell, r) for r in range(1, r_max + 1)]
    A = None
    if with_A:
        if ell == 11:
            raise ThetaUnavailable("A_r needs theta_11, which is not available")
        A = [0]
        for r in range(1, r_max + 1):
            A.append(A[-1] + theta(ell, lambdas[r - 1], mus[r - 1]))
    return SequenceParams(
        ell, c, d, r_max, lambdas, mus, ns, residues, omega(ell, c, d), A,
        mus_closed=[0] + [mu_closed(ell, c, d, r) for r in range(1, r_max + 1)],
        mus_gordon=[None] + [mu_gordon(ell, c, d, r) for r in range(1, r_max + 1)],
        ns_closed=[n_closed(ell, c, d, r) for r in range(r_max + 1)],
    )


def alpha(ell, c, d):
    """theta(d, ceil((ell c + d)/24) + omega) + theta(c, ceil((c + ell d)/24) + omega)."""
    w = omega(ell, c, d)
    return (theta(ell, d, ceil_div(ell * c + d, 24) + w)
            + theta(ell, c, ceil_div(c + ell * d, 24) + w))


# -- L_r -------------------------------------------------------------------

def build_L(ell, c, d, r, prec):
    """L_r on exponents below ``prec`` by iterating U_ell(phi^lambda * .)."""
    dl = delta(ell)
    lambdas = [c if i % 2 == 0 else d for i in range(r)]
    # exponents needed at each level, working down from L_r
    need = [0] * (r + 1)
    need[r] = prec
    for i in range(r, 0, -1):
        need[i - 1] = ell * need[i] - dl * lambdas[i - 1] + 1
    L = QSeries([1], 0, max(need[0], 1))
    for i in range(1, r + 1):
        lam = lambdas[i - 1]
        target = ell * need[i]
        lead = L.normalized().lead if not L.is_zero() else L.lead
        phi = expand_eta_quotient(phi_eta(ell, lam), max(target - lead, dl * lam + 1))
        L = U(mul(phi, L).truncate(target), ell)
    return L.truncate(prec)


def product_form_L(ell, c, d, r, prec, values):
    """(eta-product factor) * sum_(m >= mu_r) values(m) q^m on exponents below ``prec``.

    ``values(m)`` must return p_[1^c ell^d](ell^r m + n_r).
    """
    params = sequence_params(ell, c, d, r, with_A=False)
    mu = params.mus[r]
    if r % 2 == 0:
        factors = ((1, c), (ell, d))
    else:
        factors = ((ell, c), (1, d))
    width = prec - mu
    if width <= 0:
        return QSeries([0], prec - 1, prec)
    head = euler_product_series(factors, width)
    tail = QSeries([values(m) for m in range(mu, prec)], mu, prec)
    return mul(head, tail).truncate(prec)


def oracle_values(ell, c, d, r, m_lo, m_hi, modulus=None):
    """m -> p_[1^c ell^d](ell^r m + n_r) for m in [m_lo, m_hi], from the DP oracle."""
    n_r = n_closed(ell, c, d, r)
    step = ell ** r
    top = step * m_hi + n_r
    table = gp_table(GeneralizedPartitionSpec(c, d, ell), max(top, 0), modulus) if top >= 0 else []

    def value(m):
        idx = step * m + n_r
        return table[idx] if idx >= 0 else 0
    return value


EXACT_INDEX_LIMIT = 4000
CHECK_PRIME = 1099511627689  # largest prime below 2^40


def check_L(ell, c, d, r, window=40, product_window=None):
    """Valuation bound pi(L_r) >= A_r on ``window`` coefficients, and agreement of L_r
    with its partition-generating product form.

    The product form is compared exactly when the oracle indices stay below
    EXACT_INDEX_LIMIT and otherwise modulo CHECK_PRIME * ell^(A_r + 2).
    """
    params = sequence_params(ell, c, d, r, with_A=ell != 11)
    mu = params.mus[r]
    L = build_L(ell, c, d, r, mu + window)
    report = {"ell": ell, "c": c, "d": d, "r": r, "mu": mu, "window": window}
    if params.A is not None:
        A = params.A[r]
        v = series_min_valuation(L.extend_lead(mu), ell, window)
        report.update(A=A, valuation=None if v == float("inf") else v, bound_ok=v >= A)
    if product_window is None:
        product_window = window
        while product_window > 5 and ell ** r * (mu + product_window) + params.ns[r] > EXACT_INDEX_LIMIT:
            product_window -= 1
    top_index = ell ** r * (mu + product_window) + params.ns[r]
    exact = top_index <= EXACT_INDEX_LIMIT
    modulus = None if exact else CHECK_PRIME * ell ** ((params.A[r] if params.A else 0) + 2)
    if modulus is not None and modulus * (top_index + 1) >= 1 << 63:
        modulus = CHECK_PRIME
    values = oracle_values(ell, c, d, r, mu, mu + product_window, modulus)
    prec = mu + product_window
    P = product_form_L(ell, c, d, r, prec, values)
    mismatch = None
    for n in range(mu, prec):
        a, b = L[n], P[n]
        if (a != b) if exact else ((a - b) % modulus):
            mismatch = n
            break
    report.update(product_window=product_window,
                  comparison="exact" if exact else f"mod {modulus}",
                  product_match=mismatch is None, first_mismatch=mismatch)
    return report


# -- claims ----------------------------------------------------------------

@dataclass(frozen=True)
class CongruenceClaim:
    family: str
    ell: int
    c: int
    d: int
    r: int
    exponent: object  # int, or "auto" for A_r
    direction: str
    residue: int = None

    @property
    def step(self):
        return self.ell ** self.r

    def key(self):
        return (self.family, self.ell, self.c, self.d, self.r, str(self.exponent),
                self.direction, -1 if self.residue is None else self.residue)

    def label(self):
        res = self.resolved_residue()
        f = {"generalized": f"p[1^{self.c} {self.ell}^{self.d}]", "classical": "p",
             "regular": f"b_{self.ell}", "core": f"a_{self.ell}",
             "frobenius": f"cphi_{self.ell}"}[self.family]
        rel = "==" if self.direction == "congruence" else "!="
        try:
            e = self.resolved_exponent()
        except (ThetaUnavailable, ValueError):
            e = self.exponent
        return f"{f}({self.step}m+{res}) {rel} 0 mod {self.ell}^{e}"

    def cd(self):
        if self.family == "classical":
            return 1, 0
        if self.family == "regular":
            return 1, -1
        if self.family == "core":
            return 1, -self.ell
        if self.family == "frobenius":
            return 0, 1
        return self.c, self.d

    def resolved_residue(self):
        if self.residue is not None:
            return self.residue % self.step
        c, d = self.cd()
        return canonical_residue(c + self.ell * d, self.ell, self.r)

    def resolved_exponent(self):
        if self.exponent != "auto":
            return int(self.exponent)
        if self.direction == "incongruence":
            return 1
        if self.family == "frobenius":
            raise ValueError("frobenius claims need an explicit modulus exponent")
        c, d = self.cd()
        return sequence_params(self.ell, c, d, self.r).A[self.r]


def parse_claim(line):
    """'family ell c d r modulus_exponent direction [residue]'."""
    parts = line.split()
    if len(parts) not in (7, 8):
        raise ValueError(f"claim needs 7 or 8 fields: {line!r}")
    family, ell, c, d, r, exponent, direction = parts[:7]
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    if direction not in DIRECTIONS:
        raise ValueError(f"unknown direction {direction!r}")
    ell, c, d, r = int(ell), int(c), int(d), int(r)
    if ell not in ELLS:
        raise ValueError(f"ell must be one of {ELLS}")
    if r < 1:
        raise ValueError("r must be positive")
    if exponent != "auto":
        exponent = int(exponent)
        if exponent < 0:
            raise ValueError("modulus exponent must be nonnegative")
    residue = int(parts[7]) if len(parts) == 8 else None
    return CongruenceClaim(family, ell, c, d, r, exponent, direction, residue)


def parse_claims(text):
    claims = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            claims.append(parse_claim(line))
    return claims


def format_claim(claim):
    fields = [claim.family, claim.ell, claim.c, claim.d, claim.r, claim.exponent, claim.direction]
    if claim.residue is not None:
        fields.append(claim.residue)
    return " ".join(str(x) for x in fields)


ORACLE_MAX_INDEX = 2_000_000


def family_table(claim, N, modulus):
    """Values of the claim's counting function at 0..N reduced mod ``modulus``."""
    if N > ORACLE_MAX_INDEX:
        raise OracleRangeExceeded(f"index {N} beyond the oracle limit {ORACLE_MAX_INDEX}")
    if claim.family == "frobenius":
        return frobenius_representation(claim.ell, N, modulus)
    c, d = claim.cd()
    return gp_table(GeneralizedPartitionSpec(c, d, claim.ell), N, modulus)


def verify_claim(claim, M=None):
    """Check the claim on m = 0..M along step*m + residue (residue reduced into [0, step)).

    With the canonical residue, m >= 0 covers exactly the indices n_r + ell^r m' >= 0,
    i.e. m' >= mu_r.
    """
    if M is None:
        if claim.direction == "incongruence":
            M = DEFAULT_WITNESS_BOUND
        else:
            M = DEFAULT_CONGRUENCE_BOUND_LARGE if claim.ell in (13, 17) else DEFAULT_CONGRUENCE_BOUND
    step = claim.step
    res = claim.resolved_residue()
    try:
        e = claim.resolved_exponent()
    except ThetaUnavailable as exc:
        return {"claim": format_claim(claim), "label": claim.label(), "status": "skipped",
                "details": {"reason": str(exc)}}
    modulus = claim.ell ** (max(e, 1) + 1)
    N = step * M + res
    table = family_table(claim, N, modulus)
    details = {"step": step, "residue": res, "exponent": e, "m_range": [0, M]}
    if claim.direction == "congruence":
        bad = next((m for m in range(M + 1) if table[step * m + res] % claim.ell ** e), None)
        if bad is None:
            status = "verified"
        else:
            status = "violated"
            v = table[step * bad + res]
            details.update(first_violation={"m": bad, "n": step * bad + res,
                                            "value_mod": [v, modulus],
                                            "valuation": min(valuation(v, claim.ell), e + 1)})
    else:
        hit = next((m for m in range(M + 1) if table[step * m + res] % claim.ell), None)
        if hit is None:
            status = "witness_not_found"
        else:
            status = "witness_found"
            details.update(witness={"m": hit, "n": step * hit + res,
                                    "value_mod_ell": table[step * hit + res] % claim.ell})
    return {"claim": format_claim(claim), "label": claim.label(), "status": status,
            "details": details}


def verify_claims(claims, M=None, workers=1):
    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(workers) as pool:
            reports = list(pool.map(lambda cl: verify_claim(cl, M), claims))
    else:
        reports = [verify_claim(cl, M) for cl in claims]
    order = sorted(range(len(claims)), key=lambda i: claims[i].key())
    return [reports[i] for i in order]


def report_ok(report):
    return report["status"] in ("verified", "witness_found", "skipped")


def reports_json(reports):
    return json.dumps(reports, indent=2, sort_keys=True)


def reports_text(reports):
    width = max((len(r["label"]) for r in reports), default=10)
    return "".join(f"{r['label']:<{width}}  {r['status']}\n" for r in reports)


# -- built-in claim sets ---------------------------------------------------

DESK_PRIMES = (5, 7, 13)
CLASSICAL_MAX_INDEX = 500


def desk_pairs(ell):
    """The (c, d) pairs checked at desk scale for each prime."""
    return [(1, 0), (2, 0), (0, 1), (6, -5), (4, -3), (8, -7), (1, -1), (1, -ell)]


def classical_claims():
    """Ramanujan's and Watson's congruences for p(n), as (claim, bound) with n <= 500."""
    out = []
    for ell, r, e in ((5, 1, 1), (5, 2, 2), (7, 1, 1), (7, 2, 2), (11, 1, 1)):
        cl = CongruenceClaim("classical", ell, 1, 0, r, e, "congruence")
        out.append((cl, (CLASSICAL_MAX_INDEX - cl.resolved_residue()) // cl.step))
    return out


def theorem_desk_claims(r_max=2):
    return [CongruenceClaim("generalized", ell, c, d, r, "auto", "congruence")
            for ell in DESK_PRIMES for c, d in desk_pairs(ell) for r in range(1, r_max + 1)]


def witness_claims():
    """Incongruences expected to have a witness among the first 51 terms."""
    inc = "incongruence"
    return [CongruenceClaim("frobenius", 13, 0, 1, 2, 1, inc, 91),
            CongruenceClaim("regular", 13, 1, -1, 2, 1, inc),
            CongruenceClaim("regular", 17, 1, -1, 1, 1, inc),
            CongruenceClaim("core", 13, 1, -13, 2, 1, inc),
            CongruenceClaim("core", 17, 1, -17, 1, 1, inc)]


CLAIM_SETS = {"classical": lambda: classical_claims(),
              "theorem": lambda: [(cl, None) for cl in theorem_desk_claims()],
              "witnesses": lambda: [(cl, None) for cl in witness_claims()]}


def run_claim_set(name, M=None, workers=1):
    pairs = CLAIM_SETS[name]()
    if M is not None:
        pairs = [(cl, M) for cl, _ in pairs]
    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(workers) as pool:
            reports = list(pool.map(lambda p: verify_claim(*p), pairs))
    else:
        reports = [verify_claim(*p) for p in pairs]
    order = sorted(range(len(pairs)), key=lambda i: pairs[i][0].key())
    return [reports[i] for i in order]


def desk_L_checks(ells=DESK_PRIMES, r_bound=2, r_product=3, window=40, product_window=None):
    """check_L over the desk pairs: valuation windows for r <= r_bound, product form up to r_product.

    For r above r_bound only the product-form agreement is recorded, on a short window.
    """
    out = []
    for ell in ells:
        for c, d in desk_pairs(ell):
            for r in range(1, r_product + 1):
                w = window if r <= r_bound else 6
                rep = check_L(ell, c, d, r, window=w, product_window=product_window)
                rep["valuation_checked"] = r <= r_bound
                out.append(rep)
    return out


def desk_L_ok(report):
    return report["product_match"] and (not report["valuation_checked"] or report["bound_ok"])
