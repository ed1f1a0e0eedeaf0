"""Exact dense linear algebra over a :class:`FieldSpec`.

Matrices are lists of row lists.  Everything here is Gaussian elimination;
the numpy path is used only for ranks of the large coefficient matrices that
appear in Hilbert-function computations over a prime field.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .field import FieldSpec, Scalar

Matrix = list[list[Scalar]]

# Below this many entries the pure-Python path is faster than numpy setup.
_NUMPY_THRESHOLD = 400


def as_matrix(field: FieldSpec, rows: Sequence[Sequence]) -> Matrix:
    return [[field(x) for x in row] for row in rows]


def identity(field: FieldSpec, n: int) -> Matrix:
    return [[field.one if i == j else field.zero for j in range(n)] for i in range(n)]


def zeros(field: FieldSpec, rows: int, cols: int) -> Matrix:
    return [[field.zero] * cols for _ in range(rows)]


def transpose(a: Sequence[Sequence[Scalar]]) -> Matrix:
    return [list(col) for col in zip(*a)]


def matmul(field: FieldSpec, a: Sequence[Sequence[Scalar]], b: Sequence[Sequence[Scalar]]) -> Matrix:
    if a and len(a[0]) != len(b):
        raise ValueError("inner dimensions differ")
    bt = transpose(b) if b else []
    return [[field.reduce(sum(x * y for x, y in zip(row, col))) for col in bt] for row in a]


def matvec(field: FieldSpec, a: Sequence[Sequence[Scalar]], v: Sequence[Scalar]) -> list[Scalar]:
    return [field.reduce(sum(x * y for x, y in zip(row, v))) for row in a]


def rref(field: FieldSpec, a: Sequence[Sequence[Scalar]]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = [list(row) for row in a]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = field.inv(m[r][c])
        m[r] = [field.reduce(x * inv) for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [field.reduce(x - f * y) for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(field: FieldSpec, a: Sequence[Sequence[Scalar]]) -> int:
    if not a or not a[0]:
        return 0
    if field.is_prime and len(a) * len(a[0]) > _NUMPY_THRESHOLD:
        return rank_mod_p(np.array(a, dtype=np.int64), field.modulus)
    return len(rref(field, a)[1])


def rank_mod_p(a: np.ndarray, p: int) -> int:
    """Rank of an integer matrix over GF(p); requires p < 3.03e9 so products fit int64."""
    a = np.array(a, dtype=np.int64) % p
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r, c:] = (a[r, c:] * inv) % p
        below = r + 1 + np.flatnonzero(a[r + 1:, c])
        if below.size:
            f = a[below, c][:, None]
            a[below, c:] = (a[below, c:] - f * a[r, c:]) % p
        r += 1
    return r


def determinant(field: FieldSpec, a: Sequence[Sequence[Scalar]]) -> Scalar:
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("determinant needs a square matrix")
    m = [list(row) for row in a]
    det = field.one
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return field.zero
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = field.neg(det)
        det = field.reduce(det * m[c][c])
        inv = field.inv(m[c][c])
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = field.reduce(m[i][c] * inv)
                m[i] = [field.reduce(x - f * y) for x, y in zip(m[i], m[c])]
    return det


def inverse(field: FieldSpec, a: Sequence[Sequence[Scalar]]) -> Matrix:
    n = len(a)
    aug = [list(row) + ident for row, ident in zip(a, identity(field, n))]
    red, pivots = rref(field, aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in red]


def nullspace(field: FieldSpec, a: Sequence[Sequence[Scalar]], ncols: int | None = None) -> Matrix:
    """Basis (as a list of vectors) of the right kernel ``{v : a v = 0}``."""
    if ncols is None:
        ncols = len(a[0]) if a else 0
    if not a:
        return identity(field, ncols)
    red, pivots = rref(field, a)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [field.zero] * ncols
        v[f] = field.one
        for row, pc in zip(red, pivots):
            v[pc] = field.neg(row[f])
        basis.append(v)
    return basis


def left_nullspace(field: FieldSpec, a: Sequence[Sequence[Scalar]]) -> Matrix:
    """Basis of ``{w : w a = 0}``."""
    if not a:
        return []
    return nullspace(field, transpose(a), len(a))


def solve(field: FieldSpec, a: Sequence[Sequence[Scalar]], b: Sequence[Scalar]) -> list[Scalar] | None:
    """One solution of ``a x = b`` or ``None`` when inconsistent."""
    ncols = len(a[0])
    aug = [list(row) + [bi] for row, bi in zip(a, b)]
    red, pivots = rref(field, aug)
    if ncols in pivots:
        return None
    x = [field.zero] * ncols
    for row, pc in zip(red, pivots):
        x[pc] = row[ncols]
    return x


def random_matrix(field: FieldSpec, rows: int, cols: int, rng) -> Matrix:
    return [[field.random_element(rng) for _ in range(cols)] for _ in range(rows)]


def random_full_rank(field: FieldSpec, rows: int, cols: int, rng, attempts: int = 32) -> Matrix:
    target = min(rows, cols)
    for _ in range(attempts):
        m = random_matrix(field, rows, cols, rng)
        if rank(field, m) == target:
            return m
    raise ArithmeticError(f"no full-rank {rows}x{cols} sample in {attempts} attempts")


def random_invertible(field: FieldSpec, n: int, rng, attempts: int = 32) -> Matrix:
    return random_full_rank(field, n, n, rng, attempts)
