"""Slow reference implementations used to cross-check the fast paths.

Nothing here shares code with the routines it checks: monomials, products
and elimination are all rebuilt from scratch on plain dicts and lists.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Sequence


def _monomials(nvars: int, d: int) -> list[tuple[int, ...]]:
    return [m for m in itertools.product(range(d + 1), repeat=nvars) if sum(m) == d]


def _to_dict(poly) -> dict[tuple[int, ...], Fraction]:
    return {m: c for m, c in poly.terms.items()}


def _reduce(x, p: int | None):
    if p is None:
        return Fraction(x)
    return int(x) % p


def _row_reduce_rank(rows: list[list], p: int | None) -> int:
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        lead = rows[rank][col]
        inv = Fraction(1) / lead if p is None else pow(lead, p - 2, p)
        rows[rank] = [_reduce(v * inv, p) for v in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [_reduce(a - f * b, p) for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def naive_hilbert_value(generators: Sequence, d: int) -> int:
    """``dim (R/I)_d`` by dense elimination over Fractions (or integers mod p)."""
    field = generators[0].field
    nvars = generators[0].nvars
    p = field.modulus if field.is_prime else None
    cols = _monomials(nvars, d)
    index = {m: j for j, m in enumerate(cols)}
    rows = []
    for g in generators:
        terms = _to_dict(g)
        if not terms:
            continue
        dg = sum(next(iter(terms)))
        if dg > d:
            continue
        for mult in _monomials(nvars, d - dg):
            row = [_reduce(0, p)] * len(cols)
            for m, c in terms.items():
                j = index[tuple(a + b for a, b in zip(m, mult))]
                row[j] = _reduce(row[j] + c, p)
            rows.append(row)
    return len(cols) - (_row_reduce_rank(rows, p) if rows else 0)


def naive_hilbert_function(generators: Sequence, d_max: int) -> dict[int, int]:
    return {d: naive_hilbert_value(generators, d) for d in range(d_max + 1)}


def bounds_oracle(n: int, k: int, hs: Sequence[int]) -> str:
    """Case table for the numerical bounds, phrased directly in center dimensions.

    Checks every pair of centers rather than the two extreme ones.
    """
    if n < 1 or any(h < 0 or h >= k for h in hs) or sum(hs) < k + 1:
        return "ProfileInfeasible"
    c = sum(hs) - k
    dim_x = k - c
    if dim_x < 0:
        return "ProfileInfeasible"
    centers = [k - h - 1 for h in hs]
    if any(d >= dim_x for d in centers):
        return "ForcedReducible"
    if (n >= 4 and c >= 2) or (n >= 5 and c == 1):
        return "ForcedSingular"
    for a, b in itertools.combinations(centers, 2):
        if a + b - k >= 0:
            return "ForcedSingular"
    return "MaybeSmoothIrreducible"
