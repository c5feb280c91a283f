"""Exponent vectors packed into single integers.

Variable x0 occupies the most significant field, so comparing keys as
integers is lexicographic comparison of exponent vectors.  Every field holds a
value below 2^(bits-1); the top bit of each field is a guard used by the
borrow test in dual multiplication.
"""

from __future__ import annotations

import functools
from typing import Sequence

WORD_BITS = 64


class Layout:
    __slots__ = ("nv", "bits", "limit", "mask", "ones", "guard", "total_bits")

    def __init__(self, nv: int, bits: int):
        self.nv = nv
        self.bits = bits
        self.limit = 1 << (bits - 1)  # exclusive bound on a field value
        self.mask = (1 << bits) - 1
        ones = 0
        for _ in range(nv):
            ones = (ones << bits) | 1
        self.ones = ones
        self.guard = ones * self.limit
        self.total_bits = nv * bits

    def __repr__(self) -> str:
        return f"Layout(nv={self.nv}, bits={self.bits})"

    @property
    def fits_word(self) -> bool:
        return self.total_bits <= WORD_BITS

    def pack(self, exps: Sequence[int]) -> int:
        key = 0
        b = self.bits
        lim = self.limit
        for e in exps:
            if not 0 <= e < lim:
                raise OverflowError(f"exponent {e} does not fit {b}-bit field")
            key = (key << b) | e
        return key

    def unpack(self, key: int) -> tuple[int, ...]:
        b, m = self.bits, self.mask
        out = [0] * self.nv
        for i in range(self.nv - 1, -1, -1):
            out[i] = key & m
            key >>= b
        return tuple(out)

    def field(self, key: int, i: int) -> int:
        return (key >> ((self.nv - 1 - i) * self.bits)) & self.mask

    def unit(self, i: int) -> int:
        return 1 << ((self.nv - 1 - i) * self.bits)

    def cap_offset(self, cap: int) -> int:
        """Add this to a key; the guard bits stay clear iff every field <= cap."""
        return (self.limit - 1 - cap) * self.ones


@functools.lru_cache(maxsize=None)
def get_layout(nv: int, bits: int) -> Layout:
    return Layout(nv, bits)


def default_bits(nv: int) -> int:
    return max(WORD_BITS // nv, 4) if nv else 4


def bits_for(nv: int, max_value: int) -> int:
    """Smallest canonical width whose fields hold values up to ``max_value``."""
    b = default_bits(nv)
    while (1 << (b - 1)) <= max_value:
        b += 1
    return b


def layout_for(nv: int, max_value: int) -> Layout:
    return get_layout(nv, bits_for(nv, max_value))


def repack(terms: dict, src: Layout, dst: Layout) -> dict:
    if src is dst:
        return terms
    return {dst.pack(src.unpack(k)): c for k, c in terms.items()}
