"""
core/properties.py
Non-spectral cryptographic criteria of an S-box: difference distribution table,
differential uniformity, algebraic degree (Möbius transform over all component
combinations) and algebraic immunity of the graph indicator, computed as the
least degree admitting a nonzero annihilator.
"""
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import List, Tuple

import numpy as np

from core.gf2 import gf2_nullspace, gf2_rank, pack_rows
from core.sbox import SBox, TruthTable, component_matrix, popcount_table
from core.spectral import nonlinearity, is_balanced


@dataclass(frozen=True, eq=False)
class DifferenceTable:
    """counts[a][b] = #{x : S(x) xor S(x xor a) = b}."""
    n: int
    counts: np.ndarray


@dataclass(frozen=True)
class PropertyReport:
    nl: int
    delta: int
    degree: int
    ai: int
    balanced: bool


@dataclass(frozen=True)
class GraphIndicator:
    """Support of f_S: the points x | S(x) << n of the 2n-variable cube."""
    n: int
    support: Tuple[int, ...]


# ---------------------------------------------------------------------------
# Differential uniformity
# ---------------------------------------------------------------------------
def difference_table(s: SBox) -> DifferenceTable:
    size = s.size
    x = np.arange(size, dtype=np.int64)
    table = s.table.astype(np.int64)
    # out[a][x] = S(x) xor S(x xor a), offset by a * size so one bincount fills all rows
    out = table[None, :] ^ table[x[:, None] ^ x[None, :]]
    flat = np.bincount((out + x[:, None] * size).ravel(), minlength=size * size)
    return DifferenceTable(s.n, flat.reshape(size, size))


def differential_uniformity(s: SBox) -> int:
    """max over a != 0 of the DDT row maxima, one row at a time."""
    size = s.size
    x = np.arange(size, dtype=np.int64)
    table = s.table.astype(np.int64)
    delta = 0
    for a in range(1, size):
        row = np.bincount(table ^ table[x ^ a], minlength=size)
        delta = max(delta, int(row.max()))
    return delta


# ---------------------------------------------------------------------------
# Algebraic degree
# ---------------------------------------------------------------------------
def _moebius(bits: np.ndarray) -> np.ndarray:
    """Binary Möbius transform along the last axis of a 2-D 0/1 array."""
    rows, size = bits.shape
    a = bits.astype(np.uint8)
    h = 1
    while h < size:
        a = a.reshape(rows, size // (2 * h), 2, h)
        lo, hi = a[:, :, 0, :], a[:, :, 1, :]
        a = np.stack((lo, lo ^ hi), axis=2)
        h *= 2
    return a.reshape(rows, size)


def algebraic_normal_form(tt: TruthTable) -> np.ndarray:
    """ANF coefficients: anf[u] = 1 iff monomial prod_{i in u} x_i is present."""
    return _moebius(tt.bits[None, :])[0]


def algebraic_degree(s: SBox) -> int:
    """max over v != 0 of deg(v . S)."""
    anf = _moebius(component_matrix(s))
    weights = popcount_table(s.n)
    present = anf.any(axis=0)
    return int(weights[present].max()) if present.any() else 0


# ---------------------------------------------------------------------------
# Algebraic immunity
# ---------------------------------------------------------------------------
def graph_indicator(s: SBox) -> GraphIndicator:
    x = np.arange(s.size, dtype=np.int64)
    support = x | (s.table.astype(np.int64) << s.n)
    return GraphIndicator(s.n, tuple(int(z) for z in support))


@lru_cache(maxsize=None)
def monomials(num_vars: int, max_degree: int) -> Tuple[int, ...]:
    """Monomial masks of degree <= max_degree, ordered by degree then lexicographically
    on variable index sets. Degree-d lists are prefixes of degree-(d+1) lists."""
    masks = []
    for degree in range(max_degree + 1):
        for vars_ in combinations(range(num_vars), degree):
            masks.append(sum(1 << v for v in vars_))
    return tuple(masks)


def ai_upper_bound(n: int) -> int:
    """Least d whose monomial count in 2n variables exceeds the 2^n graph points."""
    total = 0
    for d in range(2 * n + 1):
        total += comb(2 * n, d)
        if total > (1 << n):
            return d
    return 2 * n


def _evaluation_rows(s: SBox, degree: int) -> Tuple[List[int], int]:
    """Rows = graph points, columns = monomials; entry 1 iff the monomial is 1 at the point."""
    masks = np.array(monomials(2 * s.n, degree), dtype=np.int64)
    points = np.array(graph_indicator(s).support, dtype=np.int64)
    matrix = (points[:, None] & masks[None, :]) == masks[None, :]
    return pack_rows(matrix), len(masks)


def annihilators(s: SBox, degree: int) -> List[int]:
    """Basis of the degree-<=d annihilators of f_S, as coefficient bitmasks over monomials(2n, d)."""
    rows, n_cols = _evaluation_rows(s, degree)
    return gf2_nullspace(rows, n_cols)


def algebraic_immunity(s: SBox) -> int:
    for degree in range(1, 2 * s.n + 1):
        rows, n_cols = _evaluation_rows(s, degree)
        if gf2_rank(rows) < n_cols:
            return degree
    return 2 * s.n


def full_report(s: SBox) -> PropertyReport:
    return PropertyReport(
        nl=nonlinearity(s),
        delta=differential_uniformity(s),
        degree=algebraic_degree(s),
        ai=algebraic_immunity(s),
        balanced=is_balanced(s),
    )
