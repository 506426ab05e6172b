"""Brute-force partition counters used as ground truth.

Nothing here imports the q-series engine: coefficient tables are built by
repeated one-factor updates of a plain list, and the Frobenius counts come
from enumerating lattice points of the quadratic form directly.

p_[1^c l^d](n) is the coefficient of q^n in
    1 / ((q; q)_inf^c (q^l; q^l)_inf^d).
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from operator import add, sub

import numpy as np

from .errors import CapExceeded, OracleRangeExceeded

DEFAULT_LATTICE_CAP = 10 ** 8
# modulus-mode entries live in int64 and need headroom for one doubling
_MAX_MODULUS = 1 << 60
EXACT_LIMIT = 200_000


@dataclass(frozen=True)
class GeneralizedPartitionSpec:
    c: int
    d: int
    ell: int


@dataclass(frozen=True)
class FrobeniusSpec:
    k: int

    @property
    def dimension(self):
        return self.k - 1


# -- one-factor updates ----------------------------------------------------

def _divide_exact(a, j):
    """a <- a / (1 - q^j): running sums along each residue class mod j."""
    n = len(a)
    for s in range(j, n, j):
        e = min(s + j, n)
        a[s:e] = map(add, a[s:e], a[s - j:e - j])


def _multiply_exact(a, j):
    """a <- a * (1 - q^j), working downwards so old values are used."""
    n = len(a)
    top = (n - 1) // j * j
    for s in range(top, 0, -j):
        e = min(s + j, n)
        a[s:e] = map(sub, a[s:e], a[s - j:e - j])


class _ModArray:
    """int64 coefficient array reduced modulo m lazily.

    Entries are kept below m * 2^grow in absolute value; every shifted add
    or subtract raises grow by one and a reduction happens before int64
    could overflow.
    """

    def __init__(self, n, m):
        self.a = np.zeros(n, dtype=np.int64)
        self.a[0] = 1
        self.m = m
        self.bits = m.bit_length()
        self.grow = 0

    def _room(self):
        if self.bits + self.grow + 1 > 62:
            np.remainder(self.a, self.m, out=self.a)
            self.grow = 0

    def shift_add(self, s, sign):
        # numpy buffers the overlapping operands, so the right side is read
        # before any element is written
        self._room()
        if sign > 0:
            self.a[s:] += self.a[:-s]
        else:
            self.a[s:] -= self.a[:-s]
        self.grow += 1

    def divide(self, j):
        # 1/(1 - q^j) = (1 + q^j)(1 + q^2j)(1 + q^4j)...
        n = self.a.shape[0]
        s = j
        while s < n:
            self.shift_add(s, 1)
            s *= 2

    def multiply(self, j):
        if j < self.a.shape[0]:
            self.shift_add(j, -1)

    def values(self):
        return np.remainder(self.a, self.m)


def _apply_factor(a, scale, exponent, N):
    """Multiply by (q^scale; q^scale)_inf^(-exponent) up to q^N."""
    exact = isinstance(a, list)
    for j in range(scale, N + 1, scale):
        for _ in range(abs(exponent)):
            if exact:
                (_divide_exact if exponent > 0 else _multiply_exact)(a, j)
            elif exponent > 0:
                a.divide(j)
            else:
                a.multiply(j)
    return a


@lru_cache(maxsize=64)
def _gp_cached(c, d, ell, N, modulus):
    if modulus is None:
        a = [1] + [0] * N
    else:
        a = _ModArray(N + 1, modulus)
    a = _apply_factor(a, 1, c, N)
    a = _apply_factor(a, ell, d, N)
    return tuple(int(x) for x in (a if modulus is None else a.values()))


def gp_table(spec, N, modulus=None):
    """p_[1^c l^d](0..N), exactly or reduced modulo ``modulus``."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    if modulus is None and N > EXACT_LIMIT:
        raise OracleRangeExceeded(f"exact table to N={N} is beyond the limit {EXACT_LIMIT}")
    if modulus is not None:
        if modulus < 2:
            raise ValueError("modulus must be at least 2")
        if modulus > _MAX_MODULUS:
            raise OracleRangeExceeded(f"modulus {modulus} too large for int64 mode")
    return list(_gp_cached(spec.c, spec.d, spec.ell, N, modulus))


def gp_value(table, n):
    """Table lookup with p(n) = 0 for n < 0."""
    return table[n] if n >= 0 else 0


def partition_table(N, modulus=None):
    return gp_table(GeneralizedPartitionSpec(1, 0, 1), N, modulus)


def regular_table(ell, N, modulus=None):
    """b_ell(0..N): partitions with no part divisible by ell."""
    return gp_table(GeneralizedPartitionSpec(1, -1, ell), N, modulus)


def core_table(ell, N, modulus=None):
    """a_ell(0..N): ell-core partitions."""
    return gp_table(GeneralizedPartitionSpec(1, -ell, ell), N, modulus)


# -- Frobenius partitions --------------------------------------------------

def quadratic_form(m):
    """sum m_i^2 + sum_{i<j} m_i m_j, i.e. ((sum m)^2 + sum m^2) / 2."""
    s = sum(m)
    return (s * s + sum(x * x for x in m)) // 2


def lattice_point_estimate(d, N):
    """Volume of {Q <= N} in R^d, which approximates the number of visited points."""
    if d == 0:
        return 1.0
    unit_ball = math.pi ** (d / 2) / math.gamma(d / 2 + 1)
    det = (d + 1) / 2 ** d
    return unit_ball * N ** (d / 2) / math.sqrt(det)


def theta_counts(d, N, cap=DEFAULT_LATTICE_CAP):
    """Number of m in Z^d with Q(m) = t, for t = 0..N."""
    if lattice_point_estimate(d, N) > cap:
        raise CapExceeded(f"about {lattice_point_estimate(d, N):.3g} lattice points "
                          f"for d={d}, N={N} exceed the cap {cap}")
    counts = [0] * (N + 1)
    if d == 0:
        counts[0] = 1
        return counts
    budget = 2 * N
    visited = 0

    # Given partial sum s and partial sum of squares t with `left` coordinates
    # still free, the smallest reachable 2Q is t + s^2/(left + 1).
    def rec(left, s, t):
        nonlocal visited
        if left == 0:
            visited += 1
            if visited > cap:
                raise CapExceeded(f"lattice enumeration passed {cap} points")
            counts[(s * s + t) // 2] += 1
            return
        # choose the next coordinate x; after it, left-1 coordinates remain
        # and the floor is (t + x^2) + (s + x)^2 / left
        r = math.isqrt(budget - t)
        for x in range(-r, r + 1):
            t2 = t + x * x
            s2 = s + x
            if left * t2 + s2 * s2 > left * budget:
                continue
            rec(left - 1, s2, t2)

    rec(d, 0, 0)
    return counts


@lru_cache(maxsize=None)
def _inverse_euler_power(k, N):
    a = [1] + [0] * N
    for j in range(1, N + 1):
        for _ in range(k):
            _divide_exact(a, j)
    return tuple(a)


def frobenius_table(spec, N, cap=DEFAULT_LATTICE_CAP):
    """c-phi_k(0..N) from the lattice-sum definition."""
    k = spec.k
    if k < 1:
        raise ValueError("k must be positive")
    theta = theta_counts(spec.dimension, N, cap)
    base = _inverse_euler_power(k, N)
    return [sum(theta[t] * base[n - t] for t in range(n + 1) if theta[t])
            for n in range(N + 1)]


def frobenius_representation(k, N, modulus=None):
    """c-phi_k(0..N) from its decomposition into p_[1^c l^d] pieces, k in {5, 7, 11, 13}."""
    if k == 5:
        head = gp_table(GeneralizedPartitionSpec(0, 1, 5), N, modulus)
        tail = gp_table(GeneralizedPartitionSpec(6, -5, 5), N, modulus)
        out = [head[n] + 25 * gp_value(tail, n - 1) for n in range(N + 1)]
    elif k == 7:
        head = gp_table(GeneralizedPartitionSpec(0, 1, 7), N, modulus)
        mid = gp_table(GeneralizedPartitionSpec(4, -3, 7), N, modulus)
        tail = gp_table(GeneralizedPartitionSpec(8, -7, 7), N, modulus)
        out = [head[n] + 49 * gp_value(mid, n - 1) + 343 * gp_value(tail, n - 2)
               for n in range(N + 1)]
    elif k == 11:
        head = gp_table(GeneralizedPartitionSpec(0, 1, 11), N, modulus)
        p = partition_table(11 * N, modulus)
        out = [head[n] + 11 * gp_value(p, 11 * n - 5) for n in range(N + 1)]
    elif k == 13:
        head = gp_table(GeneralizedPartitionSpec(0, 1, 13), N, modulus)
        p = partition_table(13 * N, modulus)
        tail = gp_table(GeneralizedPartitionSpec(2, -1, 13), N, modulus)
        out = [head[n] + 13 * gp_value(p, 13 * n - 7) + 26 * gp_value(tail, n - 1)
               for n in range(N + 1)]
    else:
        raise ValueError(f"no representation route for k={k}")
    if modulus is not None:
        out = [x % modulus for x in out]
    return out


# -- direct enumeration of partitions -------------------------------------

def partitions(n, max_part=None):
    """All partitions of n as non-increasing tuples."""
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


def hook_lengths(part):
    conj = [sum(1 for p in part if p > j) for j in range(part[0])] if part else []
    return [part[i] - j + conj[j] - i - 1 for i in range(len(part)) for j in range(part[i])]


def count_cores(ell, n):
    return sum(1 for lam in partitions(n)
               if all(h % ell for h in hook_lengths(lam)))


def count_regular(ell, n):
    return sum(1 for lam in partitions(n) if all(p % ell for p in lam))
