"""Smith normal form over the integers with unimodular transforms.

Exact Python-int arithmetic throughout.  The result satisfies
``B == U @ S @ V`` with U, V unimodular and S diagonal, d_1 | d_2 | ...
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

Matrix = list[list[int]]


@dataclass(frozen=True)
class SNFResult:
    U: tuple[tuple[int, ...], ...]
    S: tuple[tuple[int, ...], ...]
    V: tuple[tuple[int, ...], ...]

    @property
    def diagonal(self) -> list[int]:
        return [self.S[i][i] for i in range(min(len(self.S), len(self.S[0]) if self.S else 0))]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> Matrix:
    if not A:
        return []
    inner = len(B)
    cols = len(B[0]) if B else 0
    return [[sum(A[i][k] * B[k][j] for k in range(inner)) for j in range(cols)] for i in range(len(A))]


def det(M: Sequence[Sequence[int]]) -> int:
    """Exact integer determinant (Bareiss fraction-free elimination)."""
    n = len(M)
    A = [list(row) for row in M]
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1] if n else 1


class _Reducer:
    def __init__(self, B: Sequence[Sequence[int]]):
        self.A = [[int(v) for v in row] for row in B]
        self.m = len(self.A)
        self.n = len(self.A[0])
        self.U = identity(self.m)
        self.V = identity(self.n)

    # row operations on A, compensated on the columns of U
    def swap_rows(self, i, j):
        if i != j:
            self.A[i], self.A[j] = self.A[j], self.A[i]
            for row in self.U:
                row[i], row[j] = row[j], row[i]

    def add_row(self, i, j, c):  # row_i += c * row_j
        if c:
            Ai, Aj = self.A[i], self.A[j]
            for t in range(self.n):
                Ai[t] += c * Aj[t]
            for row in self.U:
                row[j] -= c * row[i]

    def negate_row(self, i):
        self.A[i] = [-v for v in self.A[i]]
        for row in self.U:
            row[i] = -row[i]

    # column operations on A, compensated on the rows of V
    def swap_cols(self, i, j):
        if i != j:
            for row in self.A:
                row[i], row[j] = row[j], row[i]
            self.V[i], self.V[j] = self.V[j], self.V[i]

    def add_col(self, i, j, c):  # col_i += c * col_j
        if c:
            for row in self.A:
                row[i] += c * row[j]
            Vi, Vj = self.V[i], self.V[j]
            for t in range(self.n):
                Vj[t] -= c * Vi[t]

    def run(self) -> SNFResult:
        A = self.A
        for t in range(min(self.m, self.n)):
            piv = self._min_entry(t)
            if piv is None:
                break
            self.swap_rows(t, piv[0])
            self.swap_cols(t, piv[1])
            while True:
                # smallest entry of row t / column t becomes the pivot, which
                # keeps coefficient growth in check
                cands = [(abs(A[i][t]), 0, i) for i in range(t, self.m) if A[i][t]]
                cands += [(abs(A[t][j]), 1, j) for j in range(t + 1, self.n) if A[t][j]]
                _, axis, idx = min(cands)
                if axis == 0:
                    self.swap_rows(t, idx)
                else:
                    self.swap_cols(t, idx)
                p = A[t][t]
                for i in range(t + 1, self.m):
                    if A[i][t]:
                        self.add_row(i, t, -(A[i][t] // p))
                for j in range(t + 1, self.n):
                    if A[t][j]:
                        self.add_col(j, t, -(A[t][j] // p))
                if any(A[i][t] for i in range(t + 1, self.m)) or any(A[t][j] for j in range(t + 1, self.n)):
                    continue
                bad = next(
                    (i for i in range(t + 1, self.m) for j in range(t + 1, self.n) if A[i][j] % p),
                    None,
                )
                if bad is None:
                    break
                self.add_row(t, bad, 1)
            if A[t][t] < 0:
                self.negate_row(t)
        return SNFResult(
            tuple(map(tuple, self.U)), tuple(map(tuple, A)), tuple(map(tuple, self.V))
        )

    def _min_entry(self, t):
        best = None
        for i in range(t, self.m):
            for j in range(t, self.n):
                v = abs(self.A[i][j])
                if v and (best is None or v < best[0]):
                    best = (v, i, j)
        return None if best is None else best[1:]


def smith_normal_form(B: Sequence[Sequence[int]]) -> SNFResult:
    """Diagonalize an integer matrix: B = U S V, U and V unimodular,
    diagonal of S nonnegative with each entry dividing the next."""
    if not B or not B[0]:
        raise ValueError("matrix must be nonempty")
    if any(len(row) != len(B[0]) for row in B):
        raise ValueError("ragged matrix")
    return _Reducer(B).run()
