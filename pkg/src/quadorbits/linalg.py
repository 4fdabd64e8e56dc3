"""Exact dense linear algebra over Q (matrices are lists of rows of mpq)."""

from __future__ import annotations

from typing import List, Sequence, Tuple

from .polycore import ONE, ZERO, Q, Rational

Matrix = List[List[Rational]]


def as_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[Q(v) for v in row] for row in rows]


def identity(n: int) -> Matrix:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def zeros(r: int, c: int) -> Matrix:
    return [[ZERO] * c for _ in range(r)]


def transpose(M: Matrix) -> Matrix:
    return [list(col) for col in zip(*M)] if M else []


def matmul(A: Matrix, B: Matrix) -> Matrix:
    Bt = transpose(B)
    return [[sum((a * b for a, b in zip(row, col)), ZERO) for col in Bt] for row in A]


def matvec(A: Matrix, v: Sequence[Rational]) -> List[Rational]:
    return [sum((a * b for a, b in zip(row, v)), ZERO) for row in A]


def rref(M: Matrix) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form and pivot columns."""
    A = [list(r) for r in M]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = ONE / A[r][c]
        A[r] = [v * inv for v in A[r]]
        for i in range(rows):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return A, pivots


def rank(M: Matrix) -> int:
    """Rank by fraction-free elimination on an integer-scaled copy."""
    if not M or not M[0]:
        return 0
    from math import lcm
    A = []
    for row in M:
        den = 1
        for v in row:
            den = lcm(den, int(Q(v).denominator))
        A.append([int(Q(v) * den) for v in row])
    rows, cols = len(A), len(A[0])
    r = 0
    prev = 1
    for c in range(cols):
        piv = next((i for i in range(r, rows) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        p = A[r][c]
        for i in range(r + 1, rows):
            a = A[i][c]
            A[i] = [(p * A[i][j] - a * A[r][j]) // prev for j in range(cols)]
        prev = p
        r += 1
        if r == rows:
            break
    return r


def det(M: Matrix) -> Rational:
    n = len(M)
    A = [list(r) for r in M]
    d = ONE
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c]), None)
        if piv is None:
            return ZERO
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            d = -d
        d *= A[c][c]
        inv = ONE / A[c][c]
        for i in range(c + 1, n):
            if A[i][c]:
                f = A[i][c] * inv
                A[i] = [a - f * b for a, b in zip(A[i], A[c])]
    return d


def inverse(M: Matrix) -> Matrix:
    n = len(M)
    aug = [list(row) + e for row, e in zip(M, identity(n))]
    R, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in R]


def nullspace(M: Matrix) -> List[List[Rational]]:
    """Basis of the right kernel."""
    cols = len(M[0]) if M else 0
    R, piv = rref(M)
    free = [c for c in range(cols) if c not in piv]
    basis = []
    for f in free:
        v = [ZERO] * cols
        v[f] = ONE
        for i, p in enumerate(piv):
            v[p] = -R[i][f]
        basis.append(v)
    return basis


def charpoly(M: Matrix) -> List[Rational]:
    """Characteristic polynomial det(tI - M), coefficients low to high (Faddeev-LeVerrier)."""
    n = len(M)
    coeffs = [ZERO] * (n + 1)
    coeffs[n] = ONE
    Mk = zeros(n, n)
    I = identity(n)
    c = ONE
    for k in range(1, n + 1):
        Mk = matmul(M, [[a + c * b for a, b in zip(r1, r2)] for r1, r2 in zip(Mk, I)]) if k > 1 else [list(r) for r in M]
        c = -sum((Mk[i][i] for i in range(n)), ZERO) / k
        coeffs[n - k] = c
    return coeffs
