"""Modular equations for ell = 5, 7, 13 and the power sums of their roots.

The equation for ell relates phi_ell(z) and g_ell(ell z). Replacing z by
(z + k)/ell for k = 0..ell-1 gives the ell roots phi_ell((z+k)/ell) of one
monic polynomial whose coefficients are Laurent polynomials in g_ell(z).
Their r-th power sums S_r are again Laurent polynomials in g_ell, and
S_r = ell * U_ell(phi_ell^r).
"""

import threading
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .arith import INF, valuation
from .errors import BoundViolated, IdentityViolated
from .qseries import (QSeries, U, delta, dilate, expand_eta_quotient, g_eta,
                      g_series, phi_eta, phi_series)

SUPPORTED = (5, 7, 13)
DEFAULT_R_CAP = {5: 40, 7: 40, 13: 15}


class GPolynomial:
    """Laurent polynomial in g_ell with integer coefficients, stored as {power: coeff}."""

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        self._terms = {p: c for p, c in (terms or {}).items() if c}

    @classmethod
    def monomial(cls, p, c=1):
        return cls({p: c})

    @property
    def terms(self):
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def support(self):
        return sorted(self._terms)

    def __getitem__(self, p):
        return self._terms.get(p, 0)

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, int):
            other = GPolynomial({0: other})
        if not isinstance(other, GPolynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(tuple(self.items()))

    def __repr__(self):
        if not self._terms:
            return "GPolynomial(0)"
        return "GPolynomial(" + " + ".join(f"{c}*g^{p}" for p, c in self.items()) + ")"

    def _coerce(self, other):
        if isinstance(other, int):
            return GPolynomial({0: other})
        return other

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self._terms)
        for p, c in other._terms.items():
            out[p] = out.get(p, 0) + c
        return GPolynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return GPolynomial({p: -c for p, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            return GPolynomial({p: c * other for p, c in self._terms.items()})
        out = {}
        for p, a in self._terms.items():
            for s, b in other._terms.items():
                out[p + s] = out.get(p + s, 0) + a * b
        return GPolynomial(out)

    __rmul__ = __mul__

    def shift(self, k):
        """Multiply by g^k."""
        return GPolynomial({p + k: c for p, c in self._terms.items()})

    def divide_by_monomial(self, mono):
        """Exact division by a monomial +-g^k."""
        (k, c), = mono.items()
        if c not in (1, -1):
            raise ValueError(f"cannot divide by the non-unit monomial {c}*g^{k}")
        return GPolynomial({p - k: a * c for p, a in self._terms.items()})

    def min_valuation(self, ell):
        if not self._terms:
            return INF
        return min(valuation(c, ell) for c in self._terms.values())

    def evaluate(self, ell, prec):
        """q-expansion of sum c * g_ell^p, exact below ``prec``."""
        total = None
        for p, c in self.items():
            term = expand_eta_quotient(g_eta(ell, p), max(prec, p + 1)).scale(c)
            total = term if total is None else total + term
        if total is None:
            return QSeries([0], 0, prec)
        return total.truncate(prec)


@dataclass(frozen=True)
class ModularEquation:
    """phi^ell + sum_{i=1..ell} c_i(G) phi^(ell-i) = 0 with G = g_ell(ell z)."""

    ell: int
    coeffs: tuple  # c_1 .. c_ell as GPolynomials

    @property
    def degree(self):
        return self.ell

    def coefficient(self, i):
        """c_i, the coefficient of phi^(ell - i); c_0 = 1."""
        if i == 0:
            return GPolynomial({0: 1})
        return self.coeffs[i - 1]

    def entries(self):
        """Triples (phi_power, g_power, coeff), phi powers descending."""
        out = [(self.ell, 0, 1)]
        for i in range(1, self.ell + 1):
            for p, c in self.coefficient(i).items():
                out.append((self.ell - i, p, c))
        return out

    def perturbed(self, phi_power, g_power, delta_=1):
        """Copy with one coefficient changed; used to test that mutations are caught."""
        i = self.ell - phi_power
        coeffs = list(self.coeffs)
        coeffs[i - 1] = coeffs[i - 1] + GPolynomial.monomial(g_power, delta_)
        return ModularEquation(self.ell, tuple(coeffs))

    def reciprocal(self):
        """Monic equation satisfied by 1/phi.

        Dividing by phi^ell gives 1 + sum c_i Y^i = 0 with Y = 1/phi; the top
        coefficient c_ell is a unit monomial in g, so dividing by it keeps
        every coefficient a Laurent polynomial.
        """
        top = self.coefficient(self.ell)
        if len(top.support()) != 1:
            raise ValueError("constant coefficient is not a monomial in g")
        new = [self.coefficient(self.ell - i).divide_by_monomial(top)
               for i in range(1, self.ell + 1)]
        return ModularEquation(self.ell, tuple(new))


def parse_equation(text, ell):
    coeffs = [GPolynomial() for _ in range(ell)]
    leading = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            raise ValueError(f"bad equation line: {raw!r}")
        j, p, c = (int(x) for x in fields)
        if j == ell:
            if p != 0:
                raise ValueError("leading term must be phi^ell with no g factor")
            leading = c
            continue
        if not 0 <= j < ell:
            raise ValueError(f"phi power {j} out of range for ell={ell}")
        coeffs[ell - j - 1] = coeffs[ell - j - 1] + GPolynomial.monomial(p, c)
    if leading != 1:
        raise ValueError("equation file is not monic in phi")
    return ModularEquation(ell, tuple(coeffs))


def format_equation(eq):
    """Data lines only, in the canonical order used by the shipped files."""
    return "".join(f"{j}\t{p}\t{c}\n" for j, p, c in eq.entries())


def strip_comments(text):
    return "".join(line + "\n" for line in
                   (raw.split("#", 1)[0].rstrip() for raw in text.splitlines()) if line)


def equation_text(ell):
    return resources.files("etacong").joinpath("data").joinpath(f"modeq_{ell}.tsv").read_text()


@lru_cache(maxsize=None)
def load_equation(ell):
    if ell not in SUPPORTED:
        raise ValueError(f"no modular equation shipped for ell={ell}")
    return parse_equation(equation_text(ell), ell)


def verify_modular_equation(ell, prec, equation=None):
    """Check the equation coefficientwise on q^0 .. q^(prec-1).

    Raises IdentityViolated at the first exponent where the monic form does
    not vanish; ``lhs`` is the phi^ell coefficient there and ``rhs`` is minus
    the sum of the other terms.
    """
    eq = equation or load_equation(ell)
    phi = phi_series(ell, prec)
    G = dilate(g_series(ell, -(-prec // ell) + 1), ell).truncate(prec)
    phi_pows = [QSeries([1], 0, prec)]
    for _ in range(ell):
        phi_pows.append(phi_pows[-1] * phi)
    max_g = max(p for _, p, _ in eq.entries())
    G_pows = [QSeries([1], 0, prec)]
    for _ in range(max_g):
        G_pows.append(G_pows[-1] * G)
    lhs = phi_pows[ell].truncate(prec).extend_lead(0)
    rest = QSeries([0], 0, prec)
    for j, p, c in eq.entries()[1:]:
        rest = rest + (phi_pows[j] * G_pows[p]).truncate(prec).scale(c)
    for n in range(prec):
        if lhs[n] + rest[n]:
            raise IdentityViolated(n, lhs[n], -rest[n], f"modular equation ell={ell}")
    return {"ell": ell, "status": "verified", "max_exponent": prec - 1,
            "terms": len(eq.entries())}


# -- power sums ----------------------------------------------------------

class _PowerSums:
    """Newton's identities over one monic equation, memoized by degree h >= 1."""

    def __init__(self, eq):
        self.eq = eq
        self.sums = [None]  # index 0 unused
        self.lock = threading.Lock()

    def get(self, h):
        with self.lock:
            ell = self.eq.ell
            c = self.eq.coefficient
            while len(self.sums) <= h:
                k = len(self.sums)
                acc = GPolynomial()
                for i in range(1, min(k - 1, ell) + 1):
                    acc = acc + c(i) * self.sums[k - i]
                if k <= ell:
                    acc = acc + c(k) * k
                self.sums.append(-acc)
            return self.sums[h]


@lru_cache(maxsize=None)
def _power_sums(ell, reciprocal):
    eq = load_equation(ell)
    return _PowerSums(eq.reciprocal() if reciprocal else eq)


@dataclass(frozen=True)
class SPolynomial:
    ell: int
    r: int
    poly: GPolynomial

    def items(self):
        return self.poly.items()


def newton_S(ell, r, cap=None):
    """S_r as a Laurent polynomial in g_ell, for nonzero r."""
    if r == 0:
        raise ValueError("r must be nonzero")
    cap = DEFAULT_R_CAP[ell] if cap is None else cap
    if abs(r) > cap:
        raise ValueError(f"|r|={abs(r)} exceeds the cap {cap} for ell={ell}")
    sums = _power_sums(ell, r < 0)
    return SPolynomial(ell, r, sums.get(abs(r)))


def newton_residual(ell, h, reciprocal=False):
    """S_h - p_1 S_(h-1) + ... + (-1)^h h p_h for 1 <= h <= ell, with p_i = (-1)^i c_i."""
    eq = load_equation(ell)
    if reciprocal:
        eq = eq.reciprocal()
    sums = _power_sums(ell, reciprocal)
    total = sums.get(h)
    for i in range(1, h):
        p_i = eq.coefficient(i) * (-1) ** i
        total = total + p_i * sums.get(h - i) * (-1) ** i
    p_h = eq.coefficient(h) * (-1) ** h
    return total + p_h * h * (-1) ** h


def verify_S_identity(ell, r, prec):
    """Compare S_r evaluated at g_ell with ell * U_ell(phi_ell^r) below q^prec."""
    S = newton_S(ell, r)
    lhs = S.poly.evaluate(ell, prec)
    d = delta(ell)
    rhs = U(expand_eta_quotient(phi_eta(ell, r), max(ell * prec, d * r + 1)), ell).scale(ell)
    lo = min(lhs.lead, rhs.lead)
    for n in range(lo, prec):
        if lhs[n] != rhs[n]:
            raise IdentityViolated(n, lhs[n], rhs[n], f"S_{{{r},{ell}}}")
    return {"ell": ell, "r": r, "status": "verified", "window": [lo, prec - 1],
            "terms": len(S.poly.support())}


# -- valuation lemmas ----------------------------------------------------

# exceptional residues of r mod ell where the power sum is divisible by ell^2
EXCEPTIONAL = {5: (1, 2), 7: (1, 4), 13: (10,)}


def valuation_floor(ell, r, p):
    """Lower bound on the ell-adic valuation of the g^p coefficient of S_r."""
    if ell == 5:
        return (5 * p - r + 1) // 2
    if ell == 7:
        return (7 * p - 2 * r + 3) // 4
    if ell == 13:
        return (13 * p - 7 * r + 13) // 14
    raise ValueError(ell)


def support_range(ell, r):
    """(lowest, highest) admissible g-power of S_r; ``highest`` is None where unbounded."""
    d = delta(ell)
    if ell == 5:
        lo = (r + 4) // 5
    elif ell == 7:
        lo = (2 * r + 6) // 7
    else:
        lo = (7 * r + 12) // 13
    if r > 0:
        return lo, d * r
    return lo, (0 if ell == 13 else None)


def check_valuation_bounds(ell, r_values, strict=True):
    """Check valuation floors, support, and the exact-valuation dichotomy for each r.

    Returns a report; with ``strict`` a failure raises BoundViolated instead.
    """
    rows = []
    failures = []

    def fail(r, p, why):
        failures.append({"r": r, "p": p, "reason": why})
        if strict:
            raise BoundViolated(r, p, why)

    for r in r_values:
        if r == 0:
            continue
        S = newton_S(ell, r).poly
        lo, hi = support_range(ell, r)
        for p, a in S.items():
            if valuation(a, ell) < 1:
                fail(r, p, f"coefficient {a} not divisible by {ell}")
            if valuation(a, ell) < valuation_floor(ell, r, p):
                fail(r, p, f"valuation {valuation(a, ell)} < floor {valuation_floor(ell, r, p)}")
            if p < lo or (hi is not None and p > hi):
                fail(r, p, f"power outside support [{lo}, {hi}]")
        v = S.min_valuation(ell)
        exceptional = r % ell in EXCEPTIONAL[ell]
        if exceptional and v < 2:
            fail(r, None, f"r = {r % ell} mod {ell} but valuation is {v}")
        if not exceptional and v != 1:
            fail(r, None, f"valuation {v} where exactly 1 was expected")
        # the minimal valuation is carried by the g^lo coefficient for every
        # sign of r; the largest power does not carry it when r < 0
        if not exceptional and valuation(S[lo], ell) != 1:
            fail(r, lo, "lowest admissible coefficient is not of valuation exactly 1")
        powers = S.support()
        least_ok = valuation(S[powers[0]], ell) == v
        if r > 0 and not least_ok:
            fail(r, powers[0], "least-power coefficient does not carry the minimal valuation")
        full = hi is not None and all(S[p] for p in range(lo, hi + 1))
        rows.append({"r": r, "valuation": v, "powers": [powers[0], powers[-1]],
                     "least_power_carries_valuation": least_ok,
                     "largest_power_carries_valuation": valuation(S[powers[-1]], ell) == v,
                     "fills_support": full})
    return {"ell": ell, "checked": len(rows), "failures": failures, "rows": rows,
            "status": "verified" if not failures else "violated"}
