"""Dense exact linear algebra over any field-like scalars.

Works for :class:`~gcx.poly.GaussRat` and :class:`~gcx.poly.RationalFn`
entries; only ``+ - * /`` and truthiness (nonzero test) are used.
Matrices are lists of rows.
"""

from __future__ import annotations

from typing import List, Sequence, Tuple

from .poly import ONE, ZERO, GaussRat

Matrix = List[list]


def zeros(rows: int, cols: int, zero=ZERO) -> Matrix:
    return [[zero] * cols for _ in range(rows)]


def identity(n: int, zero=ZERO, one=ONE) -> Matrix:
    return [[one if r == c else zero for c in range(n)] for r in range(n)]


def transpose(A: Sequence[Sequence]) -> Matrix:
    return [list(col) for col in zip(*A)] if A else []


def matmul(A: Sequence[Sequence], B: Sequence[Sequence], zero=ZERO) -> Matrix:
    Bt = transpose(B)
    out = []
    for row in A:
        out_row = []
        for col in Bt:
            acc = zero
            for a, b in zip(row, col):
                if a and b:
                    acc = acc + a * b
            out_row.append(acc)
        out.append(out_row)
    return out


def matvec(A: Sequence[Sequence], v: Sequence, zero=ZERO) -> list:
    out = []
    for row in A:
        acc = zero
        for a, b in zip(row, v):
            if a and b:
                acc = acc + a * b
        out.append(acc)
    return out


def rref(A: Sequence[Sequence]) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form and pivot columns."""
    M = [list(r) for r in A]
    if not M:
        return M, []
    rows, cols = len(M), len(M[0])
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        p = next((i for i in range(r, rows) if M[i][c]), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = ONE / M[r][c] if isinstance(M[r][c], GaussRat) else None
        if inv is not None:
            M[r] = [x * inv if x else x for x in M[r]]
        else:
            piv = M[r][c]
            M[r] = [x / piv if x else x for x in M[r]]
        for i in range(rows):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [a - f * b if b else a for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    return M, pivots


def rank(A: Sequence[Sequence]) -> int:
    return len(rref(A)[1]) if A else 0


def nullspace(A: Sequence[Sequence], ncols: int | None = None, zero=ZERO, one=ONE) -> List[list]:
    """Basis of ``{x : A x = 0}``."""
    if not A:
        n = ncols or 0
        return [[one if i == j else zero for i in range(n)] for j in range(n)]
    R, piv = rref(A)
    n = len(A[0])
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        v = [zero] * n
        v[f] = one
        for r, pc in enumerate(piv):
            if R[r][f]:
                v[pc] = -R[r][f]
        basis.append(v)
    return basis


def solve(A: Sequence[Sequence], b: Sequence, zero=ZERO):
    """One solution of ``A x = b`` or ``None`` if the system is inconsistent."""
    n = len(A[0]) if A else 0
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    R, piv = rref(aug)
    if n in piv:
        return None
    x = [zero] * n
    for r, pc in enumerate(piv):
        x[pc] = R[r][n]
    return x


def inverse(A: Sequence[Sequence], zero=ZERO, one=ONE):
    """Matrix inverse, or ``None`` if singular."""
    n = len(A)
    aug = [list(row) + [one if i == j else zero for j in range(n)] for i, row in enumerate(A)]
    R, piv = rref(aug)
    if piv[:n] != list(range(n)):
        return None
    return [row[n:] for row in R]


def row_space(vectors: Sequence[Sequence]) -> Matrix:
    """Independent rows spanning the same space (the nonzero rref rows)."""
    if not vectors:
        return []
    R, piv = rref(vectors)
    return R[: len(piv)]


def same_span(U: Sequence[Sequence], V: Sequence[Sequence]) -> bool:
    ru, rv = rank(U), rank(V)
    return ru == rv and rank(list(U) + list(V)) == ru


def in_span(v: Sequence, U: Sequence[Sequence]) -> bool:
    return rank(list(U) + [list(v)]) == rank(U)
