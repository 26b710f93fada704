"""Linear algebra over F_2 with rows packed into Python ints.

A matrix is a sequence of ints; bit j of row i is entry (i, j).  For the
linear maps used elsewhere in the package the rows are the images of the
basis vectors, so rank and nullity are those of the map.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np


def _as_rows(matrix) -> tuple[list[int], int]:
    """Accept packed rows or a 2-D 0/1 array; return (rows, ncols)."""
    if isinstance(matrix, np.ndarray) and matrix.ndim == 2:
        nrows, ncols = matrix.shape
        weights = 1 << np.arange(ncols, dtype=object)
        rows = [int(sum(int(w) for w, bit in zip(weights, r) if bit)) for r in matrix]
        return rows, ncols
    rows = [int(r) for r in matrix]
    return rows, max((r.bit_length() for r in rows), default=0)


def xor_basis(rows: Sequence[int]) -> dict[int, int]:
    """Reduced echelon basis keyed by leading bit."""
    basis: dict[int, int] = {}
    for r in rows:
        while r:
            h = r.bit_length() - 1
            b = basis.get(h)
            if b is None:
                basis[h] = r
                break
            r ^= b
    return basis


def rank_f2(matrix) -> int:
    rows, _ = _as_rows(matrix)
    return len(xor_basis(rows))


def kernel_dim_f2(matrix, nrows: int | None = None) -> int:
    """Nullity of the map whose basis images are the rows of ``matrix``.

    ``nrows`` defaults to the number of rows (the dimension of the domain).
    """
    rows, _ = _as_rows(matrix)
    n = len(rows) if nrows is None else nrows
    return n - len(xor_basis(rows))


def kernel_basis(rows: Sequence[int]) -> list[int]:
    """Basis of {v : XOR of rows[i] over bits i of v = 0}."""
    basis: dict[int, tuple[int, int]] = {}   # lead -> (reduced row, combination)
    kernel = []
    for i, r in enumerate(rows):
        combo = 1 << i
        r = int(r)
        while r:
            h = r.bit_length() - 1
            if h not in basis:
                basis[h] = (r, combo)
                break
            br, bc = basis[h]
            r ^= br
            combo ^= bc
        if not r:
            kernel.append(combo)
    return kernel


def inverse_f2(rows: Sequence[int], n: int) -> list[int]:
    """Inverse of a square n x n map (rows = basis images); raises ValueError if singular."""
    work = [(int(r), 1 << i) for i, r in enumerate(rows)]
    if len(work) != n:
        raise ValueError("matrix is not square")
    for col in range(n):
        piv = next((i for i in range(col, n) if (work[i][0] >> col) & 1), None)
        if piv is None:
            raise ValueError("singular matrix")
        work[col], work[piv] = work[piv], work[col]
        pr, pc = work[col]
        for i in range(n):
            if i != col and (work[i][0] >> col) & 1:
                work[i] = (work[i][0] ^ pr, work[i][1] ^ pc)
    # after reduction row i is e_i and its combination records which input
    # basis vectors map to e_i; so the inverse sends e_i to that combination
    return [c for _, c in work]


def apply_rows(rows: Sequence[int], v: int) -> int:
    """Image of the bit vector v under the map with the given basis images."""
    out = 0
    i = 0
    while v:
        if v & 1:
            out ^= rows[i]
        v >>= 1
        i += 1
    return out


def reference_rank(dense: list[list[int]]) -> int:
    """Schoolbook Gaussian elimination on a list-of-lists 0/1 matrix."""
    a = [list(r) for r in dense]
    if not a:
        return 0
    nrows, ncols = len(a), len(a[0])
    rank = 0
    for c in range(ncols):
        piv = None
        for r in range(rank, nrows):
            if a[r][c]:
                piv = r
                break
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        for r in range(nrows):
            if r != rank and a[r][c]:
                a[r] = [x ^ y for x, y in zip(a[r], a[rank])]
        rank += 1
    return rank
