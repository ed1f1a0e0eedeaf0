"""Measuring homogeneous ideals: Hilbert functions, points, Jacobians, slices."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import comb, factorial
from typing import Sequence

import numpy as np

from .errors import (
    DimensionGuardError,
    InconsistencyError,
    NeedsHigherDegreeError,
    NonGenericError,
    NotOnVarietyError,
)
from .polycore import linalg
from .polycore.field import FieldSpec
from .polycore.matrix import PolyMatrix
from .polycore.poly import (
    MultiPoly,
    count_monomials,
    monomials_of_degree,
    restrict_to_linear_subspace,
    univariate_from_binary,
    univariate_gcd,
)

HILBERT_DEGREE_CAP = 20
ENUMERATION_MAX_PRIME = 31
ENUMERATION_MAX_VARS = 5
RESAMPLE_ATTEMPTS = 32


def _ring(generators: Sequence[MultiPoly]) -> tuple[FieldSpec, int]:
    if not generators:
        raise ValueError("need at least one generator")
    return generators[0].field, generators[0].nvars


# graded pieces ----------------------------------------------------------------

def graded_piece_rows(generators: Sequence[MultiPoly], d: int) -> tuple[list[dict[int, object]], int]:
    """Sparse coefficient rows of ``{m * g : deg(m g) = d}`` and the column count."""
    field, nv = _ring(generators)
    cols = monomials_of_degree(nv, d)
    index = {m: j for j, m in enumerate(cols)}
    rows = []
    for g in generators:
        dg = g.degree()
        if g.is_zero() or dg > d:
            continue
        terms = list(g.terms.items())
        for mult in monomials_of_degree(nv, d - dg):
            rows.append({index[tuple(a + b for a, b in zip(mult, t))]: c for t, c in terms})
    return rows, len(cols)


def _sparse_rank(field: FieldSpec, rows: list[dict[int, object]]) -> int:
    pivots: dict[int, dict[int, object]] = {}
    for row in rows:
        row = dict(row)
        while row:
            lead = min(row)
            if lead not in pivots:
                inv = field.inv(row[lead])
                pivots[lead] = {j: field.reduce(v * inv) for j, v in row.items()}
                break
            f = row[lead]
            for j, v in pivots[lead].items():
                nv = field.reduce(row.get(j, 0) - f * v)
                if nv == 0:
                    row.pop(j, None)
                else:
                    row[j] = nv
    return len(pivots)


def graded_piece_rank(generators: Sequence[MultiPoly], d: int) -> int:
    """Dimension of the degree-``d`` piece of the ideal generated by ``generators``."""
    field, _ = _ring(generators)
    rows, ncols = graded_piece_rows(generators, d)
    if not rows:
        return 0
    if field.is_prime:
        dense = np.zeros((len(rows), ncols), dtype=np.int64)
        for i, row in enumerate(rows):
            for j, v in row.items():
                dense[i, j] = v
        return linalg.rank_mod_p(dense, field.modulus)
    return _sparse_rank(field, rows)


def graded_rank_comparison(gens_a: Sequence[MultiPoly], gens_b: Sequence[MultiPoly], degrees) -> list[tuple[int, int, int, int]]:
    """``(d, rank I_d, rank J_d, rank (I+J)_d)`` for each degree."""
    out = []
    for d in degrees:
        ra = graded_piece_rank(gens_a, d)
        rb = graded_piece_rank(gens_b, d)
        rab = graded_piece_rank(list(gens_a) + list(gens_b), d)
        out.append((d, ra, rb, rab))
    return out


def same_graded_pieces(gens_a, gens_b, degrees) -> bool:
    return all(ra == rb == rab for _, ra, rb, rab in graded_rank_comparison(gens_a, gens_b, degrees))


# Hilbert function ---------------------------------------------------------------

@dataclass(frozen=True)
class HilbertProfile:
    values: dict[int, int]
    fitted: tuple[Fraction, ...]  # coefficients of the Hilbert polynomial, constant term first
    stabilization_degree: int
    nvars: int

    @property
    def dimension(self) -> int:
        return len(self.fitted) - 1

    def polynomial_value(self, d: int) -> Fraction:
        return sum((c * d ** i for i, c in enumerate(self.fitted)), Fraction(0))


def _differences(seq: list[int]) -> list[int]:
    return [b - a for a, b in zip(seq, seq[1:])]


def _tail_degree(tail: list[int]) -> int:
    """Degree of the polynomial interpolating ``tail`` (−1 if identically zero)."""
    if not any(tail):
        return -1
    row = tail
    r = 0
    while True:
        nxt = _differences(row)
        if not any(nxt):
            return r
        row = nxt
        r += 1


def _newton_to_coefficients(diffs: list[int], start: int) -> tuple[Fraction, ...]:
    # sum_j diffs[j] * binom(d - start, j), expanded in powers of d
    coeffs = [Fraction(0)] * max(len(diffs), 1)
    basis = [Fraction(1)]  # coefficients of binom(d - start, j)
    for j, dj in enumerate(diffs):
        for i, b in enumerate(basis):
            coeffs[i] += dj * b
        # basis_{j+1} = basis_j * (d - start - j) / (j + 1)
        nxt = [Fraction(0)] * (len(basis) + 1)
        for i, b in enumerate(basis):
            nxt[i + 1] += b / (j + 1)
            nxt[i] -= b * (start + j) / (j + 1)
        basis = nxt
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    if len(coeffs) == 1 and coeffs[0] == 0:
        return ()
    return tuple(coeffs)


def fit_hilbert_polynomial(values: Sequence[int]) -> tuple[tuple[Fraction, ...], int]:
    """Fit the eventual polynomial of an integer sequence ``values[0..D]``.

    A tail ``values[s..D]`` is accepted as polynomial of degree ``r`` only if it
    has at least ``r + 3`` entries, i.e. the ``r``-th differences are constant
    on ``r + 2``... positions with two confirming zero ``(r+1)``-th differences.
    The lowest degree over all accepted tails wins, then the earliest start.
    """
    values = list(values)
    best = None
    for s in range(len(values)):
        tail = values[s:]
        r = _tail_degree(tail)
        if len(tail) < max(r, 0) + 3:
            continue
        if best is None or r < best[0]:
            best = (r, s)
    if best is None:
        raise NeedsHigherDegreeError(f"no stable tail among {len(values)} Hilbert values")
    r, s = best
    tail = values[s:]
    diffs = []
    row = tail
    for _ in range(r + 1):
        diffs.append(row[0])
        row = _differences(row)
    return _newton_to_coefficients(diffs, s), s


def hilbert_function(generators: Sequence[MultiPoly], d_max: int, cache: dict[int, int] | None = None) -> HilbertProfile:
    field, nv = _ring(generators)
    cache = {} if cache is None else cache
    values = {}
    for d in range(d_max + 1):
        if d not in cache:
            cache[d] = count_monomials(nv, d) - graded_piece_rank(generators, d)
        values[d] = cache[d]
    fitted, s = fit_hilbert_polynomial([values[d] for d in range(d_max + 1)])
    return HilbertProfile(values, fitted, s, nv)


def measure_hilbert(generators: Sequence[MultiPoly], dim_hint: int | None = None, cap: int = HILBERT_DEGREE_CAP) -> HilbertProfile:
    """Hilbert profile with ``d_max`` raised until the fit stabilizes (at most ``cap``)."""
    _, nv = _ring(generators)
    top = max(g.degree() for g in generators)
    guess = nv - 1 if dim_hint is None else max(dim_hint, 0)
    d_max = top + guess + 3
    cache: dict[int, int] = {}
    while True:
        try:
            return hilbert_function(generators, d_max, cache)
        except NeedsHigherDegreeError:
            if d_max >= cap:
                raise
            d_max += 1


def dimension_and_degree(profile: HilbertProfile, k: int | None = None) -> tuple[int, int]:
    dim = profile.dimension
    if k is not None and dim > k:
        raise InconsistencyError(f"dimension {dim} exceeds ambient dimension {k}")
    if dim < 0:
        return -1, 0
    deg = profile.fitted[-1] * factorial(dim)
    if deg.denominator != 1 or deg <= 0:
        raise InconsistencyError(f"non-integral degree {deg}: fit did not stabilize")
    return dim, int(deg)


# points over small prime fields -------------------------------------------------

def _check_enumerable(field: FieldSpec, nv: int) -> None:
    if not field.is_prime or field.modulus > ENUMERATION_MAX_PRIME:
        raise ValueError(f"point enumeration needs a prime field with p <= {ENUMERATION_MAX_PRIME}")
    if nv > ENUMERATION_MAX_VARS:
        raise ValueError(f"point enumeration supports at most P^{ENUMERATION_MAX_VARS - 1}")


def _evaluate_many(poly: MultiPoly, pts: np.ndarray, p: int, powers: dict) -> np.ndarray:
    out = np.zeros(len(pts), dtype=np.int64)
    for m, c in poly.terms.items():
        term = np.full(len(pts), c, dtype=np.int64)
        for j, e in enumerate(m):
            if e:
                key = (j, e)
                if key not in powers:
                    acc = np.ones(len(pts), dtype=np.int64)
                    for _ in range(e):
                        acc = acc * pts[:, j] % p
                    powers[key] = acc
                term = term * powers[key] % p
        out = (out + term) % p
    return out


def _chart_points(nv: int, p: int, i: int) -> np.ndarray:
    free = nv - 1 - i
    if free:
        grid = np.indices((p,) * free).reshape(free, -1).T
    else:
        grid = np.zeros((1, 0), dtype=np.int64)
    pts = np.zeros((len(grid), nv), dtype=np.int64)
    pts[:, i] = 1
    pts[:, i + 1:] = grid
    return pts


def enumerate_points(generators: Sequence[MultiPoly], field: FieldSpec | None = None) -> list[tuple[int, ...]]:
    """All GF(p)-points of ``V(I)``: first nonzero coordinate scaled to 1, chart by chart.

    Cost is ``(p^(k+1) - 1) / (p - 1)`` evaluations per generator; about 9.2e5
    points for P^4 over GF(31).
    """
    fld, nv = _ring(generators)
    field = field or fld
    _check_enumerable(field, nv)
    p = field.modulus
    found = []
    for i in range(nv):
        pts = _chart_points(nv, p, i)
        keep = np.ones(len(pts), dtype=bool)
        powers: dict = {}
        for g in generators:
            keep &= _evaluate_many(g, pts, p, powers) == 0
        found.extend(tuple(int(x) for x in row) for row in pts[keep])
    return found


def jacobian_at(generators: Sequence[MultiPoly], point: Sequence) -> tuple[list[list], int]:
    field, nv = _ring(generators)
    if any(g.evaluate(point) != 0 for g in generators):
        raise NotOnVarietyError(f"{tuple(point)} is not a zero of the ideal")
    jac = [[g.diff(j).evaluate(point) for j in range(nv)] for g in generators]
    return jac, linalg.rank(field, jac)


@dataclass
class SmoothnessSurvey:
    field: FieldSpec
    codim: int
    points_tested: int
    singular_points: list[tuple[int, ...]]
    jacobian_ranks: dict[int, int] = dc_field(default_factory=dict)

    @property
    def smooth(self) -> bool:
        return not self.singular_points

    def to_json(self):
        return {
            "field": self.field.to_json(),
            "codim": self.codim,
            "points_tested": self.points_tested,
            "singular_points": [list(p) for p in self.singular_points],
            "jacobian_ranks": {str(r): n for r, n in sorted(self.jacobian_ranks.items())},
            "note": "absence of GF(p)-singular points does not certify smoothness over C",
        }


def smoothness_survey(generators: Sequence[MultiPoly], codim: int, field: FieldSpec | None = None) -> SmoothnessSurvey:
    """Jacobian rank at every GF(p)-point of ``V(I)``; rank < codim marks a singular point."""
    fld, nv = _ring(generators)
    field = field or fld
    _check_enumerable(field, nv)
    top = max(g.degree() for g in generators)
    if field.modulus <= top:
        raise ValueError(f"characteristic {field.modulus} must exceed the generator degree {top}")
    p = field.modulus
    points = enumerate_points(generators, field)
    if not points:
        return SmoothnessSurvey(field, codim, 0, [], {})
    pts = np.array(points, dtype=np.int64)
    powers: dict = {}
    partials = [[_evaluate_many(g.diff(j), pts, p, powers) for j in range(nv)] for g in generators]
    ranks: Counter = Counter()
    singular = []
    for idx, point in enumerate(points):
        jac = [[int(partials[gi][j][idx]) for j in range(nv)] for gi in range(len(generators))]
        r = linalg.rank(field, jac)
        ranks[r] += 1
        if r < codim:
            singular.append(point)
    return SmoothnessSurvey(field, codim, len(points), singular, dict(ranks))


# slicing -------------------------------------------------------------------------

def restricted_gcd(generators: Sequence[MultiPoly], param: Sequence[Sequence]) -> list | None:
    """Monic gcd of the generators restricted to a line, dehomogenized at ``t = 1``.

    Returns ``None`` when every generator vanishes on the line.
    """
    field, _ = _ring(generators)
    g: list = []
    any_nonzero = False
    for gen in generators:
        form = restrict_to_linear_subspace(gen, param)
        if form.is_zero():
            continue
        any_nonzero = True
        g = univariate_gcd(field, g, univariate_from_binary(form))
    return g if any_nonzero else None


def line_slice_degree(generators: Sequence[MultiPoly], rng, attempts: int = RESAMPLE_ATTEMPTS) -> int:
    """Intersection count (with multiplicity) of ``V(I)`` with a random line."""
    field, nv = _ring(generators)
    for _ in range(attempts):
        u = [field.random_element(rng) for _ in range(nv)]
        v = [field.random_element(rng) for _ in range(nv)]
        param = [[a, b] for a, b in zip(u, v)]
        if linalg.rank(field, param) < 2:
            continue
        # a zero at u would be a root at infinity of the dehomogenized form
        if any(g.evaluate(u) == 0 for g in generators if g):
            continue
        g = restricted_gcd(generators, param)
        if g is None:
            continue
        return len(g) - 1
    raise NonGenericError(f"no admissible line in {attempts} attempts")


# the distinguished linear space for three views -----------------------------

@dataclass(frozen=True)
class LinearSpace:
    basis: tuple[tuple, ...]  # spanning vectors in k+1 coordinates

    @property
    def projective_dimension(self) -> int:
        return len(self.basis) - 1

    def parametrization(self) -> list[list]:
        return linalg.transpose(self.basis)

    def sample(self, field: FieldSpec, rng) -> list:
        while True:
            t = [field.random_element(rng) for _ in self.basis]
            if any(t):
                return [field.reduce(sum(ti * b[j] for ti, b in zip(t, self.basis))) for j in range(len(self.basis[0]))]


def distinguished_forms(N: PolyMatrix) -> list[MultiPoly]:
    c = N.rows - 2
    return [N[i, 0] for i in range(c + 1)] + [N[c + 1, 1], N[c + 1, 2]]


def singular_linear_space_L(N: PolyMatrix, c: int) -> LinearSpace:
    """Zero set of ``N[0..c][0]``, ``N[c+1][1]``, ``N[c+1][2]`` for a normalized three-view N."""
    if N.cols != 3 or N.rows != c + 2:
        raise ValueError(f"expected a {c + 2}x3 matrix")
    k = N.nvars - 1
    if k - c < 3:
        raise DimensionGuardError(f"locus has dimension {k - c}; the argument needs at least 3")
    field = N.field
    coeffs = [f.linear_coefficients() for f in distinguished_forms(N)]
    if linalg.rank(field, coeffs) < c + 3:
        raise NonGenericError("the defining forms of L are dependent")
    return LinearSpace(tuple(tuple(v) for v in linalg.nullspace(field, coeffs, k + 1)))


@dataclass(frozen=True)
class LPointReport:
    point: tuple
    jacobian_rank: int
    submatrix_rank: int
    singular: bool


def survey_linear_space(N: PolyMatrix, c: int, generators: Sequence[MultiPoly], samples: int, rng) -> list[LPointReport]:
    space = singular_linear_space_L(N, c)
    field = N.field
    out = []
    for _ in range(samples):
        pt = space.sample(field, rng)
        _, jr = jacobian_at(generators, pt)
        sub = [[N[i, j].evaluate(pt) for j in (1, 2)] for i in range(c + 1)]
        sr = linalg.rank(field, sub)
        out.append(LPointReport(tuple(pt), jr, sr, jr < c or sr < 2))
    return out


def plucker_relation(field: FieldSpec, mat: Sequence[Sequence], a: int, b: int, j: int, h: int):
    """``(ab)(jh) - (aj)(bh) + (ah)(bj)`` for 2x2 row minors ``(xy)`` of a two-column matrix."""
    def br(x, y):
        return field.reduce(mat[x][0] * mat[y][1] - mat[x][1] * mat[y][0])

    return field.reduce(br(a, b) * br(j, h) - br(a, j) * br(b, h) + br(a, h) * br(b, j))


def expected_hilbert_count(k: int, d: int) -> int:
    return comb(d + k, k)


def singular_locus_dimension(form: MultiPoly) -> int:
    """Projective dimension of the singular locus of a hypersurface (−1 if smooth).

    Uses the ideal of all partial derivatives; the form itself is in it when the
    characteristic does not divide the degree.
    """
    gens = [form] + [form.diff(j) for j in range(form.nvars)]
    gens = [g for g in gens if g]
    return measure_hilbert(gens, dim_hint=form.nvars - 2).dimension
