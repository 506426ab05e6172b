"""Truncated products of integer coefficient lists.

Long operands go through Kronecker substitution: both lists are packed
into single big integers at a fixed bit stride, multiplied once, and
unpacked. gmpy2 does the big multiplication when it is importable.
"""

try:
    import gmpy2
except ImportError:  # pragma: no cover - exercised only without gmpy2
    gmpy2 = None

SCHOOLBOOK_CUTOFF = 48


def _maxbits(a):
    m = 0
    for x in a:
        if x:
            b = x.bit_length() if x > 0 else (-x).bit_length()
            if b > m:
                m = b
    return m


def _bias(count, nbytes, half):
    return int.from_bytes(half.to_bytes(nbytes, "little") * count, "little")


def _pack(a, nbytes, half):
    # offset every digit by `half` so all digits are nonnegative, then undo
    # the offset with one subtraction of the geometric bias.
    raw = b"".join((x + half).to_bytes(nbytes, "little") for x in a)
    return int.from_bytes(raw, "little") - _bias(len(a), nbytes, half)


def _unpack(z, full, count, nbytes, half):
    # the bias must cover every digit of the product, not only the ones kept,
    # or a negative high digit would borrow through the whole integer
    z += _bias(full, nbytes, half)
    raw = z.to_bytes(full * nbytes, "little")
    fb = int.from_bytes
    return [fb(raw[i:i + nbytes], "little") - half
            for i in range(0, count * nbytes, nbytes)]


def _schoolbook(a, b, n):
    out = [0] * n
    if len(a) > len(b):
        a, b = b, a
    for i, x in enumerate(a):
        if not x:
            continue
        lim = n - i
        if lim <= 0:
            break
        for j, y in enumerate(b[:lim]):
            out[i + j] += x * y
    return out


def mul_trunc(a, b, n):
    """First ``n`` coefficients of the product of coefficient lists ``a``, ``b``."""
    if n <= 0:
        return []
    a = a[:n]
    b = b[:n]
    if not a or not b:
        return [0] * n
    if min(len(a), len(b)) <= SCHOOLBOOK_CUTOFF:
        return _schoolbook(a, b, n)
    ma, mb = _maxbits(a), _maxbits(b)
    if ma == 0 or mb == 0:
        return [0] * n
    # |c_k| <= min(len) * 2^ma * 2^mb, plus one sign bit and slack
    bits = ma + mb + min(len(a), len(b)).bit_length() + 2
    nbytes = (bits + 7) // 8
    half = 1 << (8 * nbytes - 1)
    x = _pack(a, nbytes, half)
    y = _pack(b, nbytes, half)
    if gmpy2 is not None:
        z = int(gmpy2.mpz(x) * gmpy2.mpz(y))
    else:
        z = x * y
    full = len(a) + len(b) - 1
    count = min(n, full)
    out = _unpack(z, full, count, nbytes, half)
    if count < n:
        out.extend([0] * (n - count))
    return out


def square_trunc(a, n):
    return mul_trunc(a, a, n)
