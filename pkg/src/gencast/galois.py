"""GF(2^m) arithmetic with log/antilog tables (m = 4 or 8).

Addition is XOR.  Multiplication goes through exp/log tables built from the
field's primitive element x; a dense q x q product table backs the
vectorized payload operations.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

# primitive reduction polynomials, indexed by m
_POLYS = {
    4: 0x13,   # x^4 + x + 1
    8: 0x11D,  # x^8 + x^4 + x^3 + x^2 + 1
}


class Field:
    """Arithmetic tables for GF(2^m)."""

    def __init__(self, m: int):
        if m not in _POLYS:
            raise ValueError(f"unsupported field degree m={m}; supported: {sorted(_POLYS)}")
        self.m = m
        self.q = 1 << m
        self.poly = _POLYS[m]
        q = self.q
        exp = [0] * (2 * q)
        log = [0] * q
        x = 1
        for i in range(q - 1):
            exp[i] = x
            log[x] = i
            x <<= 1
            if x & q:
                x ^= self.poly
        for i in range(q - 1, 2 * (q - 1)):
            exp[i] = exp[i - (q - 1)]
        self.exp = exp
        self.log = log
        # dense product table for vectorized ops: mul_table[a, b] = a*b
        tab = np.zeros((q, q), dtype=np.uint8)
        for a in range(1, q):
            la = log[a]
            for b in range(1, q):
                tab[a, b] = exp[la + log[b]]
        tab.setflags(write=False)
        self.mul_table = tab

    def add(self, a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[self.log[a] + self.log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no multiplicative inverse")
        return self.exp[(self.q - 1) - self.log[a]]

    def mul_vec(self, c: int, vec: np.ndarray) -> np.ndarray:
        """Elementwise c * vec for a field-element array."""
        if c == 0:
            return np.zeros_like(vec)
        if c == 1:
            return vec.copy()
        return self.mul_table[c][vec]

    def __repr__(self):
        return f"Field(GF({self.q}), poly=0x{self.poly:X})"


@lru_cache(maxsize=None)
def get_field(q: int) -> Field:
    """Shared Field instance for order q (16 or 256)."""
    m = q.bit_length() - 1
    if 1 << m != q or m not in _POLYS:
        raise ValueError(f"unsupported field order q={q}; supported: {[1 << m for m in _POLYS]}")
    return Field(m)


GF256 = get_field(256)
GF16 = get_field(16)


def gf_add(a: int, b: int) -> int:
    return a ^ b


def gf_mul(a: int, b: int, field: Field = GF256) -> int:
    return field.mul(a, b)


def gf_inv(a: int, field: Field = GF256) -> int:
    return field.inv(a)
