"""Kronecker packing of dense integer polynomials into single big integers.

A coefficient list ``c_0, c_1, ...`` is mapped to ``sum(c_i * 2**(W*i))``.
Slots are byte aligned so packing and unpacking go through ``bytes`` in
linear time; multiplication and division are delegated to GMP.
"""

from functools import lru_cache

import gmpy2

_NAIVE_CUTOFF = 256


def slot_width(bound):
    """Byte-aligned slot width able to hold signed values of magnitude <= bound."""
    w = int(bound).bit_length() + 2
    return (w + 7) // 8 * 8


@lru_cache(maxsize=64)
def _offset(count, width):
    nb = width // 8
    return int.from_bytes((b"\x00" * (nb - 1) + b"\x80") * count, "little")


def pack(coeffs, width):
    """Pack signed coefficients; every |c| must be < 2**(width-1)."""
    nb = width // 8
    half = 1 << (width - 1)
    buf = b"".join((c + half).to_bytes(nb, "little") for c in coeffs)
    return int.from_bytes(buf, "little") - _offset(len(coeffs), width)


def unpack(value, count, width):
    """Inverse of :func:`pack`; raises OverflowError if value does not fit."""
    nb = width // 8
    half = 1 << (width - 1)
    raw = (int(value) + _offset(count, width)).to_bytes(count * nb, "little")
    return [int.from_bytes(raw[i:i + nb], "little") - half
            for i in range(0, count * nb, nb)]


def pack_unsigned(coeffs, width):
    nb = width // 8
    return int.from_bytes(b"".join(c.to_bytes(nb, "little") for c in coeffs), "little")


def unpack_unsigned(value, count, width):
    nb = width // 8
    raw = int(value).to_bytes(count * nb, "little")
    return [int.from_bytes(raw[i:i + nb], "little") for i in range(0, count * nb, nb)]


def mpz(value):
    return gmpy2.mpz(value)


def _height(coeffs):
    return max((abs(c) for c in coeffs), default=0)


def mul_dense(a, b):
    """Product of two dense integer polynomials (lowest degree first)."""
    if not a or not b:
        return []
    if len(a) * len(b) <= _NAIVE_CUTOFF:
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return out
    n = len(a) + len(b) - 1
    width = slot_width(_height(a) * _height(b) * min(len(a), len(b)))
    prod = gmpy2.mpz(pack(a, width)) * gmpy2.mpz(pack(b, width))
    return unpack(prod, n, width)


def mul_dense_mod(a, b, modulus):
    """Product of dense polynomials with residues in [0, modulus)."""
    if not a or not b:
        return []
    n = len(a) + len(b) - 1
    if len(a) * len(b) <= _NAIVE_CUTOFF:
        out = [0] * n
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return [c % modulus for c in out]
    width = slot_width((modulus - 1) ** 2 * min(len(a), len(b)))
    prod = gmpy2.mpz(pack_unsigned(a, width)) * gmpy2.mpz(pack_unsigned(b, width))
    return [c % modulus for c in unpack_unsigned(prod, n, width)]
