"""Exact truncated Laurent series in q.

A :class:`QSeries` stores integer coefficients for the exponents
``lead <= n < prec``. Every coefficient below ``lead`` is zero (all series
here come from eta products and ring operations on them), while nothing is
known from ``prec`` on. Each operation derives the precision of its result
from its operands and never claims more than that:

=============  =======================================================
operation      result window
=============  =======================================================
a + b          lead = min(leads), prec = min(precs)
a * b          lead = a.val + b.val,
               prec = min(a.prec + b.val, b.prec + a.val)
inverse(a)     lead = -v, prec = a.prec - 2v   (v = valuation of a)
dilate(a, t)   lead = t*lead, prec = t*prec
U(a, p)        lead = ceil(lead/p), prec = ceil(prec/p)
=============  =======================================================

where ``val`` is the exponent of the first nonzero coefficient (or
``lead`` for a window of zeros).
"""

import math
import threading
from dataclasses import dataclass

from . import _polymul
from .arith import INF, ceil_div, valuation
from .errors import NonIntegralPrefactor, NonUnitLeading, PrecisionError


class QSeries:
    """Truncated Laurent series with exact integer coefficients.

    Instances are immutable. Integers act as exact constants in arithmetic
    (they have infinite precision).
    """

    __slots__ = ("_lead", "_coeffs", "_prec")

    def __init__(self, coeffs, lead=0, prec=None):
        coeffs = tuple(int(c) for c in coeffs)
        if prec is None:
            prec = lead + len(coeffs)
        if prec <= lead:
            raise PrecisionError(f"empty window: lead={lead}, prec={prec}")
        n = prec - lead
        if len(coeffs) < n:
            coeffs = coeffs + (0,) * (n - len(coeffs))
        elif len(coeffs) > n:
            coeffs = coeffs[:n]
        self._lead = lead
        self._coeffs = coeffs
        self._prec = prec

    # -- construction ---------------------------------------------------

    @classmethod
    def _raw(cls, coeffs, lead, prec):
        # trusted fast path: coeffs is already a tuple of length prec - lead
        obj = object.__new__(cls)
        obj._lead = lead
        obj._coeffs = coeffs
        obj._prec = prec
        return obj

    @classmethod
    def constant(cls, c, prec):
        return cls([c], 0, prec)

    @classmethod
    def monomial(cls, exponent, prec, coeff=1):
        return cls([coeff], exponent, prec)

    @classmethod
    def from_dict(cls, terms, prec, lead=None):
        if lead is None:
            lead = min(terms) if terms else prec - 1
        out = [0] * (prec - lead)
        for e, c in terms.items():
            if e < lead:
                raise ValueError(f"term q^{e} lies below lead {lead}")
            if e < prec:
                out[e - lead] += c
        return cls(out, lead, prec)

    # -- accessors ------------------------------------------------------

    @property
    def lead(self):
        return self._lead

    @property
    def prec(self):
        return self._prec

    @property
    def coeffs(self):
        return self._coeffs

    def __len__(self):
        return self._prec - self._lead

    def __getitem__(self, n):
        if isinstance(n, slice):
            start = self._lead if n.start is None else n.start
            stop = self._prec if n.stop is None else n.stop
            return [self[k] for k in range(start, stop)]
        if n >= self._prec:
            raise PrecisionError(f"q^{n} is beyond the known window (prec={self._prec})")
        if n < self._lead:
            return 0
        return self._coeffs[n - self._lead]

    def items(self):
        """(exponent, coefficient) pairs over the known window."""
        return zip(range(self._lead, self._prec), self._coeffs)

    def valuation(self):
        """Exponent of the first nonzero known coefficient, or ``None``."""
        for i, c in enumerate(self._coeffs):
            if c:
                return self._lead + i
        return None

    def is_zero(self):
        return not any(self._coeffs)

    def normalized(self):
        """Same series with leading zeros dropped from storage."""
        v = self.valuation()
        if v is None or v == self._lead:
            return self
        return QSeries._raw(self._coeffs[v - self._lead:], v, self._prec)

    def truncate(self, prec):
        if prec >= self._prec:
            return self
        return QSeries(self._coeffs[:max(prec - self._lead, 0)], self._lead, prec)

    def extend_lead(self, lead):
        """Store explicit zeros down to ``lead``."""
        if lead >= self._lead:
            return self
        return QSeries._raw((0,) * (self._lead - lead) + self._coeffs, lead, self._prec)

    # -- comparison -----------------------------------------------------

    def first_difference(self, other):
        """First exponent in the common window where the two series differ."""
        lo = min(self._lead, other._lead)
        hi = min(self._prec, other._prec)
        for n in range(lo, hi):
            if self[n] != other[n]:
                return n
        return None

    def agrees_with(self, other):
        return self.first_difference(other) is None

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return (self._prec == other._prec
                and self.first_difference(other) is None)

    def __hash__(self):
        n = self.normalized()
        return hash((n._lead, n._coeffs, n._prec))

    def __repr__(self):
        shown = []
        for e, c in self.items():
            if c:
                shown.append(f"{c}*q^{e}")
            if len(shown) == 6:
                shown.append("...")
                break
        body = " + ".join(shown) if shown else "0"
        return f"QSeries({body} + O(q^{self._prec}))"

    def dumps(self):
        """One ``exponent<TAB>coefficient`` line per known coefficient."""
        return "".join(f"{e}\t{c}\n" for e, c in self.items())

    @classmethod
    def loads(cls, text):
        exps, vals = [], []
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            e, c = line.split("\t")
            exps.append(int(e))
            vals.append(int(c))
        if not exps:
            raise ValueError("empty dump")
        if exps != list(range(exps[0], exps[0] + len(exps))):
            raise ValueError("dump exponents must be consecutive and ascending")
        return cls(vals, exps[0], exps[-1] + 1)

    # -- ring operations ------------------------------------------------

    def __neg__(self):
        return QSeries._raw(tuple(-c for c in self._coeffs), self._lead, self._prec)

    def __pos__(self):
        return self

    def _add(self, other, sign):
        if isinstance(other, int):
            if not other:
                return self
            other = QSeries._raw((other,), 0, INF_PREC)
        elif not isinstance(other, QSeries):
            return NotImplemented
        lead = min(self._lead, other._lead)
        prec = min(self._prec, other._prec)
        if prec <= lead:
            raise PrecisionError("sum has an empty window")
        out = [0] * (prec - lead)
        for i, c in enumerate(self._coeffs[:prec - self._lead]):
            out[self._lead - lead + i] = c
        off = other._lead - lead
        for i, c in enumerate(other._coeffs[:max(prec - other._lead, 0)]):
            if sign > 0:
                out[off + i] += c
            else:
                out[off + i] -= c
        return QSeries._raw(tuple(out), lead, prec)

    def __add__(self, other):
        return self._add(other, 1)

    def __radd__(self, other):
        return self._add(other, 1)

    def __sub__(self, other):
        return self._add(other, -1)

    def __rsub__(self, other):
        return (-self)._add(other, 1)

    def scale(self, k):
        return QSeries._raw(tuple(k * c for c in self._coeffs), self._lead, self._prec)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        if not isinstance(other, QSeries):
            return NotImplemented
        return mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k):
        return power(self, k)

    def inverse(self):
        return inverse(self)

    def dilate(self, t):
        return dilate(self, t)

    def U(self, p):
        return U(self, p)


# Sentinel precision for exact integer constants promoted to series.
INF_PREC = 1 << 62


def mul(a, b):
    a = a.normalized()
    b = b.normalized()
    lead = a._lead + b._lead
    prec = min(a._prec + b._lead, b._prec + a._lead)
    n = prec - lead
    if n <= 0:
        raise PrecisionError("product has an empty window")
    out = _polymul.mul_trunc(list(a._coeffs), list(b._coeffs), n)
    return QSeries._raw(tuple(out), lead, prec)


def inverse(a):
    """Multiplicative inverse of a series whose first nonzero coefficient is +-1."""
    a = a.normalized()
    c0 = a._coeffs[0]
    if c0 not in (1, -1):
        raise NonUnitLeading(f"leading coefficient {c0} is not a unit")
    v = a._lead
    n = a._prec - v
    inv = _inverse_coeffs(list(a._coeffs), n)
    return QSeries._raw(tuple(inv), -v, a._prec - 2 * v)


def _inverse_coeffs(a, n):
    c0 = a[0]
    if n <= 64:
        b = [0] * n
        b[0] = c0  # c0 = +-1 is its own inverse
        for k in range(1, n):
            s = 0
            for i in range(1, min(k, len(a) - 1) + 1):
                s += a[i] * b[k - i]
            b[k] = -c0 * s
        return b
    # Newton iteration b <- b (2 - a b), doubling the correct length
    m = (n + 1) // 2
    b = _inverse_coeffs(a, m)
    ab = _polymul.mul_trunc(a[:n], b, n)
    corr = [-x for x in ab]
    corr[0] += 2
    return _polymul.mul_trunc(b, corr, n)


def power(a, k):
    """``a**k`` by square-and-multiply; negative ``k`` goes through the inverse."""
    if k == 0:
        a = a.normalized()
        n = a._prec - a._lead
        return QSeries._raw((1,) + (0,) * (n - 1), 0, n)
    if k < 0:
        return power(inverse(a), -k)
    result = None
    base = a
    while True:
        if k & 1:
            result = base if result is None else mul(result, base)
        k >>= 1
        if not k:
            return result
        base = mul(base, base)


def dilate(a, t):
    """Substitute q -> q^t."""
    if t < 1:
        raise ValueError("dilation factor must be a positive integer")
    if t == 1:
        return a
    out = [0] * (t * (a._prec - a._lead))
    out[::t] = a._coeffs
    return QSeries._raw(tuple(out), t * a._lead, t * a._prec)


def U(a, p):
    """Keep the coefficients at exponents divisible by ``p`` and divide them by ``p``."""
    if p < 1:
        raise ValueError("U_p needs a positive integer p")
    lead = ceil_div(a._lead, p)
    prec = ceil_div(a._prec, p)
    if prec <= lead:
        raise PrecisionError("U_p result has an empty window")
    start = lead * p - a._lead
    coeffs = a._coeffs[start::p]
    return QSeries._raw(tuple(coeffs[:prec - lead]), lead, prec)


def series_min_valuation(a, ell, window):
    """Smallest ``ell``-adic valuation among the first ``window`` known coefficients.

    Zero coefficients count as ``+inf``; a window of zeros returns ``math.inf``.
    The answer says nothing about coefficients past the window.
    """
    if window > len(a):
        raise PrecisionError(f"window {window} exceeds the {len(a)} known coefficients")
    best = INF
    for c in a.coeffs[:window]:
        if c:
            v = valuation(c, ell)
            if v < best:
                best = v
                if best == 0:
                    break
    return best


# -- Euler products ------------------------------------------------------

def pentagonal_coeffs(n):
    """Coefficients of (q;q)_inf up to q^(n-1), from the pentagonal number theorem."""
    out = [0] * n
    if n:
        out[0] = 1
    k = 1
    while True:
        e1 = k * (3 * k - 1) // 2
        if e1 >= n:
            break
        sign = -1 if k & 1 else 1
        out[e1] += sign
        e2 = e1 + k
        if e2 < n:
            out[e2] += sign
        k += 1
    return out


def partition_coeffs(n):
    """Coefficients of 1/(q;q)_inf, inverting the pentagonal series term by term."""
    pent = [(e, c) for e, c in enumerate(pentagonal_coeffs(n)) if c and e]
    p = [0] * n
    if n:
        p[0] = 1
    for m in range(1, n):
        s = 0
        for e, c in pent:
            if e > m:
                break
            s -= c * p[m - e]
        p[m] = s
    return p


class _EulerCache:
    """Memoized coefficient lists of (q;q)_inf^e, grown on demand."""

    def __init__(self):
        self._lock = threading.Lock()
        self._store = {}

    def get(self, e, n):
        with self._lock:
            hit = self._store.get(e)
        if hit is not None and len(hit) >= n:
            return hit[:n]
        coeffs = self._compute(e, n)
        with self._lock:
            old = self._store.get(e)
            if old is None or len(old) < n:
                self._store[e] = coeffs
        return coeffs[:n]

    def _compute(self, e, n):
        if e == 0:
            return [1] + [0] * (n - 1)
        if e == 1:
            return pentagonal_coeffs(n)
        if e == -1:
            return partition_coeffs(n)
        base = self.get(1 if e > 0 else -1, n)
        k = abs(e)
        result = None
        while True:
            if k & 1:
                result = base if result is None else _polymul.mul_trunc(result, base, n)
            k >>= 1
            if not k:
                return result
            base = _polymul.mul_trunc(base, base, n)

    def clear(self):
        with self._lock:
            self._store.clear()


euler_cache = _EulerCache()


def euler_power(e, n):
    """First ``n`` coefficients of (q;q)_inf^e."""
    return euler_cache.get(e, n)


@dataclass(frozen=True)
class EtaQuotient:
    """The product of eta(m z)^e over ``factors`` = ((m, e), ...)."""

    factors: tuple

    def __post_init__(self):
        merged = {}
        for m, e in self.factors:
            if m < 1:
                raise ValueError("eta scales must be positive")
            merged[m] = merged.get(m, 0) + e
        object.__setattr__(self, "factors",
                           tuple(sorted((m, e) for m, e in merged.items() if e)))

    @classmethod
    def of(cls, *pairs):
        return cls(tuple(pairs))

    def __mul__(self, other):
        return EtaQuotient(self.factors + other.factors)

    def __pow__(self, k):
        return EtaQuotient(tuple((m, k * e) for m, e in self.factors))

    def prefactor_24(self):
        """24 times the exponent of the q prefactor."""
        return sum(m * e for m, e in self.factors)

    def prefactor(self):
        s = self.prefactor_24()
        if s % 24:
            raise NonIntegralPrefactor(f"prefactor exponent {s}/24 is not an integer")
        return s // 24


def expand_euler_product(factors, n):
    """Coefficients of prod (q^m; q^m)_inf^e for q^0..q^(n-1), without any prefactor."""
    acc = None
    for m, e in factors:
        if not e:
            continue
        base = euler_power(e, ceil_div(n, m))
        if m > 1:
            spread = [0] * n
            spread[::m] = base
            base = spread
        acc = base if acc is None else _polymul.mul_trunc(acc, base, n)
    if acc is None:
        acc = [1] + [0] * (n - 1)
    return acc


def expand_eta_quotient(eq, prec):
    """q-expansion of an eta quotient, exact on exponents below ``prec``."""
    lead = eq.prefactor()
    if prec <= lead:
        raise PrecisionError(f"prec {prec} does not exceed the prefactor exponent {lead}")
    return QSeries._raw(tuple(expand_euler_product(eq.factors, prec - lead)), lead, prec)


def euler_product_series(factors, prec):
    """prod (q^m; q^m)_inf^e as a series starting at q^0 (the eta prefactor dropped)."""
    return QSeries._raw(tuple(expand_euler_product(factors, prec)), 0, prec)


# -- the two functions used throughout -------------------------------------

def delta(ell):
    """(ell^2 - 1)/24, the q-order of phi_ell at infinity."""
    return (ell * ell - 1) // 24


def g_exponent(ell):
    """Least r > 0 with r (ell - 1) = 0 mod 24."""
    return 24 // math.gcd(24, ell - 1)


def phi_eta(ell, power=1):
    """phi_ell^power = (eta(ell^2 z)/eta(z))^power."""
    return EtaQuotient.of((ell * ell, power), (1, -power))


def g_eta(ell, power=1):
    """g_ell^power with g_ell = (eta(ell z)/eta(z))^(24/gcd(24, ell-1))."""
    r = g_exponent(ell) * power
    return EtaQuotient.of((ell, r), (1, -r))


def phi_series(ell, prec, power=1):
    return expand_eta_quotient(phi_eta(ell, power), prec)


def g_series(ell, prec, power=1):
    return expand_eta_quotient(g_eta(ell, power), prec)
