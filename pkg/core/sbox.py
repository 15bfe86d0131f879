"""
core/sbox.py
Bijective n-bit S-boxes: validated construction, Fisher-Yates initialisation,
the swap mutation and component Boolean functions.
"""
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from config import MIN_N, MAX_N
from core.exceptions import (
    ConfigurationError,
    IdenticalIndicesError,
    IndexOutOfRangeError,
    LengthMismatchError,
    NotBijectiveError,
    ZeroSelectorError,
)

# AES SubBytes (FIPS-197), row-major.
AES_SBOX = (
    0x63, 0x7c, 0x77, 0x7b, 0xf2, 0x6b, 0x6f, 0xc5, 0x30, 0x01, 0x67, 0x2b, 0xfe, 0xd7, 0xab, 0x76,
    0xca, 0x82, 0xc9, 0x7d, 0xfa, 0x59, 0x47, 0xf0, 0xad, 0xd4, 0xa2, 0xaf, 0x9c, 0xa4, 0x72, 0xc0,
    0xb7, 0xfd, 0x93, 0x26, 0x36, 0x3f, 0xf7, 0xcc, 0x34, 0xa5, 0xe5, 0xf1, 0x71, 0xd8, 0x31, 0x15,
    0x04, 0xc7, 0x23, 0xc3, 0x18, 0x96, 0x05, 0x9a, 0x07, 0x12, 0x80, 0xe2, 0xeb, 0x27, 0xb2, 0x75,
    0x09, 0x83, 0x2c, 0x1a, 0x1b, 0x6e, 0x5a, 0xa0, 0x52, 0x3b, 0xd6, 0xb3, 0x29, 0xe3, 0x2f, 0x84,
    0x53, 0xd1, 0x00, 0xed, 0x20, 0xfc, 0xb1, 0x5b, 0x6a, 0xcb, 0xbe, 0x39, 0x4a, 0x4c, 0x58, 0xcf,
    0xd0, 0xef, 0xaa, 0xfb, 0x43, 0x4d, 0x33, 0x85, 0x45, 0xf9, 0x02, 0x7f, 0x50, 0x3c, 0x9f, 0xa8,
    0x51, 0xa3, 0x40, 0x8f, 0x92, 0x9d, 0x38, 0xf5, 0xbc, 0xb6, 0xda, 0x21, 0x10, 0xff, 0xf3, 0xd2,
    0xcd, 0x0c, 0x13, 0xec, 0x5f, 0x97, 0x44, 0x17, 0xc4, 0xa7, 0x7e, 0x3d, 0x64, 0x5d, 0x19, 0x73,
    0x60, 0x81, 0x4f, 0xdc, 0x22, 0x2a, 0x90, 0x88, 0x46, 0xee, 0xb8, 0x14, 0xde, 0x5e, 0x0b, 0xdb,
    0xe0, 0x32, 0x3a, 0x0a, 0x49, 0x06, 0x24, 0x5c, 0xc2, 0xd3, 0xac, 0x62, 0x91, 0x95, 0xe4, 0x79,
    0xe7, 0xc8, 0x37, 0x6d, 0x8d, 0xd5, 0x4e, 0xa9, 0x6c, 0x56, 0xf4, 0xea, 0x65, 0x7a, 0xae, 0x08,
    0xba, 0x78, 0x25, 0x2e, 0x1c, 0xa6, 0xb4, 0xc6, 0xe8, 0xdd, 0x74, 0x1f, 0x4b, 0xbd, 0x8b, 0x8a,
    0x70, 0x3e, 0xb5, 0x66, 0x48, 0x03, 0xf6, 0x0e, 0x61, 0x35, 0x57, 0xb9, 0x86, 0xc1, 0x1d, 0x9e,
    0xe1, 0xf8, 0x98, 0x11, 0x69, 0xd9, 0x8e, 0x94, 0x9b, 0x1e, 0x87, 0xe9, 0xce, 0x55, 0x28, 0xdf,
    0x8c, 0xa1, 0x89, 0x0d, 0xbf, 0xe6, 0x42, 0x68, 0x41, 0x99, 0x2d, 0x0f, 0xb0, 0x54, 0xbb, 0x16,
)


@lru_cache(maxsize=None)
def parity_table(n: int) -> np.ndarray:
    """parity_table(n)[v] = popcount(v) mod 2 for v in [0, 2^n), n <= 16."""
    v = np.arange(1 << n, dtype=np.int64)
    for shift in (8, 4, 2, 1):
        v = v ^ (v >> shift)
    table = (v & 1).astype(np.uint8)
    table.flags.writeable = False
    return table


@lru_cache(maxsize=None)
def popcount_table(n: int) -> np.ndarray:
    """popcount_table(n)[v] = number of set bits of v for v in [0, 2^n)."""
    v = np.arange(1 << n, dtype=np.int64)
    counts = np.zeros_like(v)
    for bit in range(n):
        counts += (v >> bit) & 1
    counts.flags.writeable = False
    return counts


def _check_width(n: int) -> None:
    if not MIN_N <= n <= MAX_N:
        raise ConfigurationError(f"S-box width n={n} outside supported range [{MIN_N}, {MAX_N}]")


@dataclass(frozen=True, eq=False)
class SBox:
    """An immutable bijective lookup table on {0, ..., 2^n - 1}."""
    n: int
    table: np.ndarray

    @property
    def size(self) -> int:
        return 1 << self.n

    def __getitem__(self, x: int) -> int:
        return int(self.table[x])

    def __eq__(self, other) -> bool:
        if not isinstance(other, SBox):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.table, other.table)

    def __hash__(self) -> int:
        return hash((self.n, self.table.tobytes()))

    def __repr__(self) -> str:
        head = ", ".join(str(v) for v in self.table[:8])
        return f"SBox(n={self.n}, table=[{head}, ...])"

    def tolist(self) -> list[int]:
        return [int(v) for v in self.table]

    @classmethod
    def _trusted(cls, n: int, table: np.ndarray) -> "SBox":
        """Wraps a table already known to be a permutation (internal fast path)."""
        table.flags.writeable = False
        return cls(n, table)


@dataclass(frozen=True, eq=False)
class TruthTable:
    """Truth table of an n-variable Boolean function, bits[x] in {0, 1}."""
    n: int
    bits: np.ndarray

    @property
    def weight(self) -> int:
        return int(self.bits.sum())

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruthTable):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.bits, other.bits)

    def __hash__(self) -> int:
        return hash((self.n, self.bits.tobytes()))


def sbox_from_table(n: int, values: Sequence[int]) -> SBox:
    """Validates `values` as a permutation of {0, ..., 2^n - 1} and wraps it."""
    _check_width(n)
    size = 1 << n
    if len(values) != size:
        raise LengthMismatchError(f"expected {size} values for n={n}, got {len(values)}")

    table = np.array(values, dtype=np.int64)
    if table.min() < 0 or table.max() >= size:
        raise NotBijectiveError(f"values must lie in [0, {size}), got range [{table.min()}, {table.max()}]")

    counts = np.bincount(table, minlength=size)
    if (counts != 1).any():
        dup = int(np.flatnonzero(counts > 1)[0])
        raise NotBijectiveError(f"value {dup} appears {counts[dup]} times")

    return SBox._trusted(n, table.astype(np.uint16))


def identity_sbox(n: int) -> SBox:
    _check_width(n)
    return SBox._trusted(n, np.arange(1 << n, dtype=np.uint16))


def random_sbox(n: int, rng: np.random.Generator) -> SBox:
    """Uniformly random permutation (numpy's permutation is a Fisher-Yates shuffle)."""
    _check_width(n)
    return SBox._trusted(n, rng.permutation(1 << n).astype(np.uint16))


def swap_mutate(s: SBox, i: int, j: int) -> SBox:
    """Returns a copy of `s` with positions i and j exchanged."""
    size = s.size
    if not (0 <= i < size and 0 <= j < size):
        raise IndexOutOfRangeError(f"swap indices ({i}, {j}) outside [0, {size})")
    if i == j:
        raise IdenticalIndicesError(f"swap indices must differ, got {i} twice")

    table = s.table.copy()
    table[i], table[j] = table[j], table[i]
    return SBox._trusted(s.n, table)


def random_swap(s: SBox, rng: np.random.Generator) -> SBox:
    """Applies one transposition at random distinct positions; j is redrawn on collision."""
    i = int(rng.integers(s.size))
    j = int(rng.integers(s.size))
    while j == i:
        j = int(rng.integers(s.size))
    return swap_mutate(s, i, j)


def component_function(s: SBox, b: int) -> TruthTable:
    """Truth table of x -> b . S(x)."""
    if b == 0:
        raise ZeroSelectorError("component selector b must be nonzero")
    if not 0 < b < s.size:
        raise IndexOutOfRangeError(f"component selector {b} outside [1, {s.size})")
    bits = parity_table(s.n)[np.bitwise_and(s.table, b)]
    return TruthTable(s.n, bits)


def component_matrix(s: SBox) -> np.ndarray:
    """Rows b = 1..2^n-1 of component truth tables, shape (2^n - 1, 2^n), uint8."""
    selectors = np.arange(1, s.size, dtype=np.int64)[:, None]
    return parity_table(s.n)[selectors & s.table.astype(np.int64)[None, :]]
