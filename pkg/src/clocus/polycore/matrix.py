"""Matrices of polynomials and their minors."""

from __future__ import annotations

import itertools
from typing import Sequence

from ..errors import DimensionMismatchError
from .field import FieldSpec
from .poly import MultiPoly

MAX_DET_SIZE = 8


class PolyMatrix:
    """Immutable rows x cols matrix of polynomials sharing one ring."""

    __slots__ = ("rows", "cols", "_entries")

    def __init__(self, entries: Sequence[Sequence[MultiPoly]]):
        rows = [tuple(r) for r in entries]
        if not rows or not rows[0]:
            raise ValueError("matrix must be non-empty")
        cols = len(rows[0])
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged matrix")
        ref = rows[0][0]
        for r in rows:
            for e in r:
                if e.nvars != ref.nvars or e.field != ref.field:
                    raise DimensionMismatchError("matrix entries live in different rings")
        self.rows = len(rows)
        self.cols = cols
        self._entries = tuple(rows)

    @classmethod
    def from_scalars(cls, field: FieldSpec, nvars: int, mat: Sequence[Sequence]) -> "PolyMatrix":
        return cls([[MultiPoly.constant(field, nvars, x) for x in row] for row in mat])

    @property
    def field(self) -> FieldSpec:
        return self._entries[0][0].field

    @property
    def nvars(self) -> int:
        return self._entries[0][0].nvars

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij) -> MultiPoly:
        i, j = ij
        return self._entries[i][j]

    def row(self, i: int) -> tuple[MultiPoly, ...]:
        return self._entries[i]

    def column(self, j: int) -> tuple[MultiPoly, ...]:
        return tuple(r[j] for r in self._entries)

    def tolist(self) -> list[list[MultiPoly]]:
        return [list(r) for r in self._entries]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "PolyMatrix":
        return PolyMatrix([[self._entries[i][j] for j in cols] for i in rows])

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix([list(c) for c in zip(*self._entries)])

    def left_multiply(self, g: Sequence[Sequence]) -> "PolyMatrix":
        """``G * self`` for a scalar matrix ``G`` (row operations)."""
        f = self.field
        zero = MultiPoly.zero(f, self.nvars)
        out = []
        for grow in g:
            new = []
            for j in range(self.cols):
                acc = zero
                for gij, i in zip(grow, range(self.rows)):
                    if gij != 0:
                        acc = acc + self._entries[i][j].scale(gij)
                new.append(acc)
            out.append(new)
        return PolyMatrix(out)

    def evaluate(self, point: Sequence) -> list[list]:
        return [[e.evaluate(point) for e in r] for r in self._entries]

    def __eq__(self, other):
        return isinstance(other, PolyMatrix) and self._entries == other._entries

    def __hash__(self):
        return hash(self._entries)

    def __str__(self):
        cells = [[str(e) for e in r] for r in self._entries]
        width = max(len(c) for r in cells for c in r)
        return "\n".join("[ " + "  ".join(c.rjust(width) for c in r) + " ]" for r in cells)

    def __repr__(self):
        return f"PolyMatrix({self.rows}x{self.cols})"

    def determinant(self) -> MultiPoly:
        return poly_determinant(self)

    def minors(self, size: int) -> list[MultiPoly]:
        return maximal_minors(self, size)


def poly_determinant(m: PolyMatrix) -> MultiPoly:
    """Cofactor expansion along rows, memoized on the set of unused columns."""
    if m.rows != m.cols:
        raise ValueError(f"determinant of a non-square {m.rows}x{m.cols} matrix")
    n = m.rows
    if n > MAX_DET_SIZE:
        raise ValueError(f"determinant size {n} exceeds {MAX_DET_SIZE}")
    entries = m.tolist()
    zero = MultiPoly.zero(m.field, m.nvars)
    one = MultiPoly.constant(m.field, m.nvars, 1)
    memo: dict[int, MultiPoly] = {0: one}

    def expand(mask: int) -> MultiPoly:
        # mask holds the columns still available; the current row is fixed by its popcount
        if mask in memo:
            return memo[mask]
        r = n - bin(mask).count("1")
        total = zero
        pos = 0
        for j in range(n):
            if not mask >> j & 1:
                continue
            a = entries[r][j]
            if a:
                sub = expand(mask & ~(1 << j))
                if sub:
                    term = a * sub
                    total = total - term if pos & 1 else total + term
            pos += 1
        memo[mask] = total
        return total

    return expand((1 << n) - 1)


def maximal_minors(m: PolyMatrix, size: int | None = None) -> list[MultiPoly]:
    """All ``size x size`` minors, row subsets outermost, both in lexicographic order."""
    if size is None:
        size = min(m.rows, m.cols)
    if size < 1 or size > min(m.rows, m.cols):
        raise ValueError(f"minor size {size} invalid for a {m.rows}x{m.cols} matrix")
    out = []
    for rs in itertools.combinations(range(m.rows), size):
        for cs in itertools.combinations(range(m.cols), size):
            out.append(poly_determinant(m.submatrix(rs, cs)))
    return out
