"""Small integer helpers shared across modules."""

import math

INF = math.inf


def valuation(n, p):
    """Exponent of the prime ``p`` in ``n``; ``math.inf`` for ``n == 0``."""
    if n == 0:
        return INF
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def ceil_div(a, b):
    return -((-a) // b)


def inverse_mod(a, m):
    return pow(a, -1, m)


def canonical_residue(k, ell, r):
    """The residue n in [0, ell^r) with 24 n = k (mod ell^r)."""
    mod = ell ** r
    return (k * inverse_mod(24, mod)) % mod


def is_prime(n):
    if n < 2:
        return False
    for d in range(2, math.isqrt(n) + 1):
        if n % d == 0:
            return False
    return True
