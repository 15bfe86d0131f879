"""Small GF(2) linear algebra helpers using int bitsets (bit c of a row = column c)."""

from typing import List, Tuple

import numpy as np


def pack_rows(matrix: np.ndarray) -> List[int]:
    """Packs a 0/1 matrix into one int per row, column c at bit c."""
    packed = np.packbits(matrix.astype(np.uint8), axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]


def gf2_rank(rows: List[int]) -> int:
    """Rank over GF(2), reducing each row against a basis keyed by leading bit."""
    basis: dict[int, int] = {}
    for row in rows:
        while row:
            lead = row.bit_length() - 1
            if lead not in basis:
                basis[lead] = row
                break
            row ^= basis[lead]
    return len(basis)


def gf2_rref(rows: List[int], n_cols: int) -> Tuple[List[int], List[int]]:
    """Reduced row echelon form. Returns (nonzero rows, pivot columns), pivots ascending."""
    work = rows[:]
    pivots: List[int] = []
    row_idx = 0
    for col in range(n_cols):
        bit = 1 << col
        pivot = None
        for r in range(row_idx, len(work)):
            if work[r] & bit:
                pivot = r
                break
        if pivot is None:
            continue
        work[row_idx], work[pivot] = work[pivot], work[row_idx]
        for r in range(len(work)):
            if r != row_idx and work[r] & bit:
                work[r] ^= work[row_idx]
        pivots.append(col)
        row_idx += 1
        if row_idx == len(work):
            break
    return work[:row_idx], pivots


def gf2_nullspace(rows: List[int], n_cols: int) -> List[int]:
    """Basis of {v : row . v = 0 for every row}, one vector per free column, ascending."""
    reduced, pivots = gf2_rref(rows, n_cols)
    pivot_set = set(pivots)
    basis = []
    for free in range(n_cols):
        if free in pivot_set:
            continue
        vec = 1 << free
        for row, pc in zip(reduced, pivots):
            if (row >> free) & 1:
                vec |= 1 << pc
        basis.append(vec)
    return basis


__all__ = ["pack_rows", "gf2_rank", "gf2_rref", "gf2_nullspace"]
