"""Dense linear algebra over a :class:`~scrollforge.gf.GF` on integer-coded entries.

Matrices are lists of rows.  Everything here is exact; the batch routines
operate on numpy stacks of small matrices for the census hot loop.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .gf import GF

Matrix = list[list[int]]


def rref(rows: Sequence[Sequence[int]], F: GF, ncols: int | None = None) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form.  Returns the nonzero rows and pivot columns."""
    M = [list(r) for r in rows]
    if not M:
        return [], []
    if ncols is None:
        ncols = len(M[0])
    nrows = len(M)
    pivots: list[int] = []
    r = 0
    prime = F.k == 1
    p = F.p
    add, mul, inv, neg = F.add, F.mul, F.inv, F.neg
    for c in range(ncols):
        piv = -1
        for i in range(r, nrows):
            if M[i][c]:
                piv = i
                break
        if piv < 0:
            continue
        M[r], M[piv] = M[piv], M[r]
        row = M[r]
        iv = inv(row[c])
        if iv != 1:
            row = [x * iv % p for x in row] if prime else [mul(iv, x) for x in row]
            M[r] = row
        for i in range(nrows):
            if i == r:
                continue
            f = M[i][c]
            if not f:
                continue
            if prime:
                M[i] = [(a - f * b) % p for a, b in zip(M[i], row)]
            else:
                nf = neg(f)
                M[i] = [add(a, mul(nf, b)) if b else a for a, b in zip(M[i], row)]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return M[:r], pivots


def rank(rows: Sequence[Sequence[int]], F: GF) -> int:
    return len(rref(rows, F)[0])


def nullspace(rows: Sequence[Sequence[int]], F: GF, ncols: int) -> Matrix:
    """Basis (in RREF) of {x : r . x = 0 for every row r}."""
    R, pivots = rref(rows, F, ncols) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for row, pc in zip(R, pivots):
            v[pc] = F.neg(row[fc])
        basis.append(v)
    return rref(basis, F, ncols)[0] if basis else []


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]], F: GF) -> Matrix:
    Bt = list(zip(*B))
    return [[F.dot(a, col) for col in Bt] for a in A]


def matvec(A: Sequence[Sequence[int]], v: Sequence[int], F: GF) -> list[int]:
    return [F.dot(row, v) for row in A]


def transpose(A: Sequence[Sequence[int]]) -> Matrix:
    return [list(c) for c in zip(*A)]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def inverse(A: Sequence[Sequence[int]], F: GF) -> Matrix:
    n = len(A)
    aug = [list(row) + e for row, e in zip(A, identity(n))]
    R, pivots = rref(aug, F, n)
    if pivots != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in R]


def solve(A: Sequence[Sequence[int]], b: Sequence[int], F: GF) -> list[int]:
    """The unique solution of A x = b for square invertible A."""
    return matvec(inverse(A, F), b, F)


def combine(coeffs: Sequence[int], vectors: Sequence[Sequence[int]], F: GF) -> list[int]:
    out = [0] * len(vectors[0])
    for c, v in zip(coeffs, vectors):
        if c:
            out = [F.add(o, F.mul(c, x)) for o, x in zip(out, v)]
    return out


# -- batch kernels -------------------------------------------------------------

def batch_rank(M: np.ndarray, F: GF, cols: Sequence[int] | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Gaussian elimination on a stack of matrices, shape (B, R, C).

    Each pivot row is consumed (reduced to zero) once it has cleared its
    column, so the pivot count is the rank.  Elimination can be limited to
    ``cols``; the returned residue then holds the rows left after clearing
    those columns.  Returns (pivot counts, residue).
    """
    M = np.array(M, dtype=np.int64, copy=True)
    B, R, C = M.shape
    counts = np.zeros(B, dtype=np.int64)
    batch = np.arange(B)
    for c in cols if cols is not None else range(C):
        col = M[:, :, c]
        nz = col != 0
        has = nz.any(axis=1)
        if not has.any():
            continue
        idx = batch[has]
        prow = nz[idx].argmax(axis=1)
        sub = M[idx]
        pivot = sub[np.arange(len(idx)), prow]
        scale = F.np_inv(pivot[:, c])
        pivot = F.np_mul(scale[:, None], pivot)
        factors = sub[:, :, c]
        sub = F.np_sub(sub, F.np_mul(factors[:, :, None], pivot[:, None, :]))
        M[idx] = sub
        counts[idx] += 1
    return counts, M
