"""Small exact linear algebra over the rationals.

Matrices are lists of rows of :class:`fractions.Fraction`.  Everything here is
sized for mesh-category computations in Dynkin type, where spaces have
dimension at most a handful, so plain Gaussian elimination is the right tool.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Vector = list
Matrix = list


def zeros(rows: int, cols: int) -> Matrix:
    return [[Fraction(0)] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def matvec(m: Matrix, v: Sequence[Fraction]) -> Vector:
    return [sum((a * b for a, b in zip(row, v)), Fraction(0)) for row in m]


def is_zero(v: Sequence[Fraction]) -> bool:
    return all(x == 0 for x in v)


def rref(rows: Sequence[Sequence[Fraction]]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form of ``rows``; returns (nonzero rows, pivot columns)."""
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    return len(rref(rows)[1])


class Quotient:
    """The quotient ``k^n / span(generators)`` with a fixed complement basis.

    The complement is spanned by the standard vectors at the non-pivot
    positions of the RREF of the generators, which makes the choice
    deterministic.
    """

    def __init__(self, n: int, generators: Sequence[Sequence[Fraction]]):
        self.n = n
        self.rows, self.pivots = rref([list(g) for g in generators if not is_zero(g)])
        pivot_set = set(self.pivots)
        self.free = [k for k in range(n) if k not in pivot_set]

    @property
    def dim(self) -> int:
        return len(self.free)

    def project(self, v: Sequence[Fraction]) -> Vector:
        """Coordinates of the class of ``v`` in the complement basis."""
        w = list(v)
        for row, p in zip(self.rows, self.pivots):
            c = w[p]
            if c != 0:
                w = [a - c * b for a, b in zip(w, row)]
        return [w[k] for k in self.free]

    def matrix_of(self, cols: Sequence[Sequence[Fraction]]) -> Matrix:
        """Matrix (dim x len(cols)) of the projection restricted to given columns."""
        images = [self.project(c) for c in cols]
        return [[images[j][i] for j in range(len(cols))] for i in range(self.dim)]
