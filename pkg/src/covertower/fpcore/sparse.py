"""Exact rank of sparse matrices over a prime field.

Elimination keeps rows as dicts and picks pivots by a Markowitz-style cost
(fill minimization); once the live block is small or has filled in, the
remainder is handed to a dense numpy elimination.
"""

import numpy as np

from ..errors import ParameterError
from ..arith import is_prime

_DENSE_DIM = 400
_DENSE_FILL = 0.18


class SparseMatModP:
    """Entries stored as {(row, col): value mod P} with zero values dropped.

    Duplicate (row, col) triples passed to the constructor are summed.
    """

    __slots__ = ("nrows", "ncols", "p", "entries")

    def __init__(self, nrows: int, ncols: int, p: int, triples=()):
        if not is_prime(p):
            raise ParameterError(f"modulus {p} is not prime")
        if nrows < 0 or ncols < 0:
            raise ParameterError("negative matrix dimension")
        self.nrows = nrows
        self.ncols = ncols
        self.p = p
        acc = {}
        for r, c, v in triples:
            if not (0 <= r < nrows and 0 <= c < ncols):
                raise ParameterError(f"entry ({r},{c}) outside {nrows}x{ncols}")
            key = (r, c)
            acc[key] = (acc.get(key, 0) + v) % p
        self.entries = {k: v for k, v in acc.items() if v}

    def row_dicts(self):
        rows = [dict() for _ in range(self.nrows)]
        for (r, c), v in self.entries.items():
            rows[r][c] = v
        return rows

    def to_dense(self) -> np.ndarray:
        a = np.zeros((self.nrows, self.ncols), dtype=np.int64)
        for (r, c), v in self.entries.items():
            a[r, c] = v
        return a


def rank_dense_mod_p(a: np.ndarray, p: int) -> int:
    """Gaussian elimination rank of an int64 array mod p (a is consumed)."""
    a = np.ascontiguousarray(a % p)
    m, n = a.shape
    rank = 0
    for col in range(n):
        piv = None
        colvals = a[rank:, col]
        nz = np.nonzero(colvals)[0]
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            a[[rank, piv]] = a[[piv, rank]]
        inv = pow(int(a[rank, col]), p - 2, p)
        a[rank] = a[rank] * inv % p
        rest = nz[1:] + rank
        if rest.size:
            a[rest] = (a[rest] - np.outer(a[rest, col], a[rank])) % p
        rank += 1
        if rank == m:
            break
    return rank


def sparse_rank_mod_p(mat: SparseMatModP) -> int:
    """Deterministic rank over F_p."""
    p = mat.p
    rows = [r for r in mat.row_dicts() if r]
    rank = 0
    col_count = {}
    for r in rows:
        for c in r:
            col_count[c] = col_count.get(c, 0) + 1
    while rows:
        live_cols = len(col_count)
        nnz = sum(len(r) for r in rows)
        if (
            len(rows) <= _DENSE_DIM
            and live_cols <= _DENSE_DIM
            or nnz > _DENSE_FILL * len(rows) * max(live_cols, 1)
        ):
            return rank + _finish_dense(rows, col_count, p)
        # Markowitz-style pivot: shortest row, then rarest column inside it
        pi = min(range(len(rows)), key=lambda i: (len(rows[i]), i))
        prow = rows.pop(pi)
        pc = min(prow, key=lambda c: (col_count[c], c))
        rank += 1
        inv = pow(prow[pc], p - 2, p)
        prow = {c: v * inv % p for c, v in prow.items()}
        for c in prow:
            col_count[c] -= 1
            if not col_count[c]:
                del col_count[c]
        out = []
        for r in rows:
            f = r.get(pc)
            if f is None:
                out.append(r)
                continue
            for c in r:
                col_count[c] -= 1
            new = dict(r)
            for c, v in prow.items():
                w = (new.get(c, 0) - f * v) % p
                if w:
                    new[c] = w
                else:
                    new.pop(c, None)
            if new:
                for c in new:
                    col_count[c] = col_count.get(c, 0) + 1
                out.append(new)
        for c in list(col_count):
            if col_count[c] <= 0:
                del col_count[c]
        rows = out
    return rank


def _finish_dense(rows, col_count, p) -> int:
    cols = sorted(col_count)
    cmap = {c: j for j, c in enumerate(cols)}
    a = np.zeros((len(rows), len(cols)), dtype=np.int64)
    for i, r in enumerate(rows):
        for c, v in r.items():
            a[i, cmap[c]] = v
    return rank_dense_mod_p(a, p)
