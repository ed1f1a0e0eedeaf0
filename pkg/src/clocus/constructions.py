"""Building camera setups whose critical locus is a prescribed classical variety.

Each builder draws its "general" scalars from a seeded stream, guards every
rank condition, and only returns once the block reduction of the new setup
reproduces the target matrix exactly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .criticalloci import CriticalSetup, block_reduction, reduce_to_n
from .errors import ConstructionFailedError, InvalidLinesError, InvalidSetupError, NonGenericError
from .multiview import Projection, center_of
from .polycore import linalg
from .polycore.field import FieldSpec
from .polycore.matrix import PolyMatrix, maximal_minors
from .polycore.poly import MultiPoly
from .rng import SplitMix64, derive_seed

RESAMPLE_ATTEMPTS = 32


def _is_linear(f: MultiPoly) -> bool:
    return f.is_zero() or (f.degree() == 1 and f.is_homogeneous())


def _forms_rank(field: FieldSpec, forms: Sequence[MultiPoly]) -> int:
    return linalg.rank(field, [f.linear_coefficients() for f in forms])


def _camera(k: int, rows: Sequence[Sequence], field: FieldSpec) -> Projection:
    return Projection(k, len(rows) - 1, tuple(tuple(r) for r in rows), field)


def _stream(seed: int, label: str) -> SplitMix64:
    return SplitMix64(derive_seed(seed, *label.encode()))


def _combine(field: FieldSpec, coeffs: Sequence, forms: Sequence[MultiPoly]) -> MultiPoly:
    acc = MultiPoly.zero(field, forms[0].nvars)
    for c, f in zip(coeffs, forms):
        if c:
            acc = acc + f.scale(c)
    return acc


def _finish(setup_factory, target: PolyMatrix, what: str) -> CriticalSetup:
    for _ in range(RESAMPLE_ATTEMPTS):
        try:
            setup = setup_factory()
        except (InvalidSetupError, ZeroDivisionError, ArithmeticError):
            continue
        if setup is None:
            continue
        if reduce_to_n(setup) == target:
            return setup
    raise ConstructionFailedError(f"{what}: no valid sample in {RESAMPLE_ATTEMPTS} attempts")


# minimal degree varieties ----------------------------------------------------

@dataclass(frozen=True)
class ScrollMatrix:
    """A ``(c+1) x 2`` matrix of linear forms; its 2x2 minors cut the target variety."""

    entries: PolyMatrix

    def __post_init__(self):
        m = self.entries
        if m.cols != 2 or m.rows < 2:
            raise ValueError("scroll matrices are (c+1) x 2 with c >= 1")
        if not all(_is_linear(m[i, j]) for i in range(m.rows) for j in range(2)):
            raise ValueError("scroll matrix entries must be linear forms")

    @property
    def c(self) -> int:
        return self.entries.rows - 1

    @property
    def k(self) -> int:
        return self.entries.nvars - 1

    def ideal(self) -> list[MultiPoly]:
        return [g for g in maximal_minors(self.entries, 2) if g]


def rational_normal_curve_scroll(field: FieldSpec, parts: Sequence[int]) -> ScrollMatrix:
    """Scroll matrix for ``S(a_1, ..., a_r)`` in its standard coordinates.

    Each part ``a`` contributes the rows ``(x_j, x_{j+1})`` for ``a`` consecutive
    coordinates of its own block of ``a + 1`` variables.
    """
    nv = sum(a + 1 for a in parts)
    rows = []
    base = 0
    for a in parts:
        for j in range(a):
            rows.append([MultiPoly.variable(field, nv, base + j), MultiPoly.variable(field, nv, base + j + 1)])
        base += a + 1
    return ScrollMatrix(PolyMatrix(rows))


def projections_from_minimal_degree(target: ScrollMatrix | PolyMatrix, seed: int = 0) -> CriticalSetup:
    scroll = target if isinstance(target, ScrollMatrix) else ScrollMatrix(target)
    N = scroll.entries
    c, k = scroll.c, scroll.k
    if not c + 2 <= k <= 2 * c + 1:
        raise ValueError(f"need c+2 <= k <= 2c+1, got c={c}, k={k}")
    field = N.field
    nv = k + 1
    h1 = (k + c) // 2
    h2 = k + c - h1
    rng = _stream(seed, "minimal-degree")
    col1, col2 = list(N.column(0)), list(N.column(1))

    def random_forms(count: int) -> list[MultiPoly]:
        return [MultiPoly.linear_form(field, [field.random_element(rng) for _ in range(nv)]) for _ in range(count)]

    def factory():
        e = linalg.random_matrix(field, c + 1, h1 - c, rng)
        fp = linalg.random_matrix(field, c + 1, h2 - c, rng)
        q1_bottom = random_forms(h1 - c)
        q2_bottom = random_forms(h2 - c)
        q1_top = [col1[i] + _combine(field, e[i], q1_bottom) for i in range(c + 1)]
        q2_top = [col2[i] + _combine(field, fp[i], q2_bottom) for i in range(c + 1)]
        q1, q2 = q1_top + q1_bottom, q2_top + q2_bottom
        if _forms_rank(field, q1) < h1 + 1 or _forms_rank(field, q2) < h2 + 1:
            return None
        neg_eye = [[field.neg(field.one) if i == j else field.zero for j in range(c + 1)] for i in range(c + 1)]
        ef = [e[i] + neg_eye[i] + fp[i] for i in range(c + 1)]
        cmat = linalg.random_invertible(field, nv, rng)
        a = linalg.matmul(field, ef, cmat)
        p1 = a + cmat[: h1 - c]
        p2 = cmat[h1 - c:]
        if linalg.rank(field, p1) < h1 + 1 or linalg.rank(field, p2) < h2 + 1:
            return None
        ps = (_camera(k, p1, field), _camera(k, p2, field))
        qs = (
            _camera(k, [f.linear_coefficients() for f in q1], field),
            _camera(k, [f.linear_coefficients() for f in q2], field),
        )
        return CriticalSetup(k, (h1, h2), ps, qs)

    return _finish(factory, N, "minimal-degree construction")


# cubic surfaces and plane cubics ---------------------------------------------

@dataclass(frozen=True)
class CayleySalmonForm:
    """Six linear forms with cubic ``L1 L2 L3 + M1 M2 M3``."""

    L: tuple[MultiPoly, MultiPoly, MultiPoly]
    M: tuple[MultiPoly, MultiPoly, MultiPoly]

    def __post_init__(self):
        forms = list(self.L) + list(self.M)
        if len(self.L) != 3 or len(self.M) != 3:
            raise ValueError("need three L forms and three M forms")
        if not all(_is_linear(f) and f for f in forms):
            raise ValueError("Cayley-Salmon entries must be nonzero linear forms")
        if len({(f.nvars, f.field) for f in forms}) != 1:
            raise ValueError("forms live in different rings")
        if self.nvars not in (3, 4):
            raise ValueError("Cayley-Salmon forms are supported in 3 or 4 variables")
        if not self.cubic():
            raise ValueError("L1 L2 L3 + M1 M2 M3 vanishes identically")

    @property
    def field(self) -> FieldSpec:
        return self.L[0].field

    @property
    def nvars(self) -> int:
        return self.L[0].nvars

    def cubic(self) -> MultiPoly:
        l1, l2, l3 = self.L
        m1, m2, m3 = self.M
        return l1 * l2 * l3 + m1 * m2 * m3


def cayley_salmon_matrix(form: CayleySalmonForm) -> PolyMatrix:
    """``[[L1, M2, 0], [M1, 0, L3], [0, L2, M3]]``; its determinant is ``-(L1 L2 L3 + M1 M2 M3)``."""
    l1, l2, l3 = form.L
    m1, m2, m3 = form.M
    z = MultiPoly.zero(form.field, form.nvars)
    return PolyMatrix([[l1, m2, z], [m1, z, l3], [z, l2, m3]])


def cube_roots_of_unity(field: FieldSpec) -> list[int]:
    if not field.is_prime:
        raise ValueError("root search needs a prime field")
    return [t for t in range(1, field.modulus) if pow(t, 3, field.modulus) == 1]


def fermat_cayley_salmon(field: FieldSpec) -> CayleySalmonForm:
    """Split ``x0^3 + x1^3`` and ``x2^3 + x3^3`` into linear factors ``x + w y``."""
    roots = cube_roots_of_unity(field)
    if len(roots) != 3:
        raise ValueError(f"{field} has no primitive cube root of unity")
    x = [MultiPoly.variable(field, 4, i) for i in range(4)]
    # x^3 + y^3 = prod over w^3 = 1 of (x + w y)
    L = tuple(x[0] + x[1].scale(w) for w in roots)
    M = tuple(x[2] + x[3].scale(w) for w in roots)
    return CayleySalmonForm(L, M)


def projections_from_cubic(form: CayleySalmonForm, seed: int = 0) -> CriticalSetup:
    """Three views realizing the cubic: ``h = (1, 1, 2)`` from P^3 or ``(1, 1, 1)`` from P^2."""
    field = form.field
    k = form.nvars - 1
    l1, l2, l3 = form.L
    m1, m2, m3 = form.M
    rng = _stream(seed, "cubic")
    z = MultiPoly.zero(field, form.nvars)

    if k == 3:
        for _ in range(RESAMPLE_ATTEMPTS):
            a, b = field.random_element(rng), field.random_element(rng)
            third = [l1.scale(a) + m2.scale(b), l3 + m1.scale(a), m3 + l2.scale(b)]
            if _forms_rank(field, third) == 3:
                break
        else:
            raise NonGenericError("no column operation makes the third column independent")
        target = PolyMatrix([[l1, m2, third[0]], [m1, z, third[1]], [z, l2, third[2]]])
        q3 = third
        hs = (1, 1, 2)
    elif k == 2:
        target = cayley_salmon_matrix(form)
        q3 = [l3, m3]
        hs = (1, 1, 1)
    else:
        raise ValueError("cubic construction needs 3 or 4 variables")
    if _forms_rank(field, q3) < len(q3):
        raise NonGenericError("third-view forms are dependent")

    def factory():
        e31 = field.random_element(rng)
        q1 = [l1, m1]
        q2 = [l2 + m2.scale(e31), m2]
        if _forms_rank(field, q1) < 2 or _forms_rank(field, q2) < 2:
            return None
        if k == 3:
            ef = [[1, 1, 0, 0], [0, 0, 1, 0], [field.neg(e31), 0, 0, 1]]
        else:
            ef = [[1, 0, 0], [0, 1, 0], [field.neg(e31), 0, 1]]
        ef = [[field.neg(field(v)) for v in row] for row in ef]
        cmat = linalg.random_invertible(field, k + 1, rng)
        a = linalg.matmul(field, ef, cmat)
        p1, p2, p3 = a[:2], [a[2], cmat[0]], cmat[1:]
        if any(linalg.rank(field, p) < len(p) for p in (p1, p2, p3)):
            return None
        ps = tuple(_camera(k, p, field) for p in (p1, p2, p3))
        qs = tuple(_camera(k, [f.linear_coefficients() for f in q], field) for q in (q1, q2, q3))
        return CriticalSetup(k, hs, ps, qs)

    return _finish(factory, target, "cubic construction")


# four skew lines ------------------------------------------------------------------

@dataclass(frozen=True)
class FourLines:
    """Lines ``V(q_i1, q_i2)`` in P^3 and an invertible 4x4 mixing matrix ``E``."""

    forms: tuple[tuple[MultiPoly, MultiPoly], ...]
    E: tuple[tuple, ...]

    def __post_init__(self):
        if len(self.forms) != 4 or any(len(pair) != 2 for pair in self.forms):
            raise InvalidLinesError("need four lines, each cut by two linear forms")
        field = self.field
        for pair in self.forms:
            if not all(_is_linear(f) and f.nvars == 4 for f in pair):
                raise InvalidLinesError("line equations must be linear forms in 4 variables")
            if _forms_rank(field, pair) < 2:
                raise InvalidLinesError("the two equations of a line are dependent")
        for i, j in itertools.combinations(range(4), 2):
            coeffs = [f.linear_coefficients() for f in self.forms[i] + self.forms[j]]
            if linalg.determinant(field, coeffs) == 0:
                raise InvalidLinesError(f"lines {i + 1} and {j + 1} meet")
        if len(self.E) != 4 or any(len(r) != 4 for r in self.E):
            raise InvalidLinesError("E must be 4x4")
        if linalg.determinant(field, self.E) == 0:
            raise InvalidLinesError("E must be invertible")

    @property
    def field(self) -> FieldSpec:
        return self.forms[0][0].field

    def line_parametrization(self, i: int) -> list[list]:
        coeffs = [f.linear_coefficients() for f in self.forms[i]]
        return linalg.transpose(linalg.nullspace(self.field, coeffs, 4))


def random_mixing_matrix(field: FieldSpec, rng) -> tuple[tuple, ...]:
    return tuple(tuple(r) for r in linalg.random_invertible(field, 4, rng))


def lambda_family_lines(field: FieldSpec, lam, E: Sequence[Sequence] | None = None, seed: int = 0) -> FourLines:
    """``{x0=x1=0}``, ``{x2=x3=0}``, ``{x0-x2=x1-x3=0}``, ``{x0-lam x2=x1-lam x3=0}``."""
    lam = field(lam)
    if lam in (field.zero, field.one):
        raise InvalidLinesError("lambda must avoid 0 and 1")
    x = [MultiPoly.variable(field, 4, i) for i in range(4)]
    forms = (
        (x[0], x[1]),
        (x[2], x[3]),
        (x[0] - x[2], x[1] - x[3]),
        (x[0] - x[2].scale(lam), x[1] - x[3].scale(lam)),
    )
    if E is None:
        E = random_mixing_matrix(field, _stream(seed, "mixing"))
    return FourLines(forms, tuple(tuple(field(v) for v in r) for r in E))


def four_lines_matrix(lines: FourLines) -> PolyMatrix:
    (q11, q12), (q21, q22), (q31, q32), (q41, q42) = lines.forms
    field = lines.field
    z = MultiPoly.zero(field, 4)
    e = lines.E
    rows = []
    left = [(q11, z), (q12, z), (z, q21), (z, q22)]
    for i in range(4):
        third = q31.scale(e[i][0]) + q32.scale(e[i][1])
        fourth = q41.scale(e[i][2]) + q42.scale(e[i][3])
        rows.append([left[i][0], left[i][1], third, fourth])
    return PolyMatrix(rows)


def projections_from_four_lines(lines: FourLines, seed: int = 0) -> CriticalSetup:
    field = lines.field
    target = four_lines_matrix(lines)
    rng = _stream(seed, "four-lines")
    neg_e = [[field.neg(v) for v in r] for r in lines.E]

    def factory():
        cmat = linalg.random_invertible(field, 4, rng)
        a = linalg.matmul(field, neg_e, cmat)
        blocks = (a[:2], a[2:], cmat[:2], cmat[2:])
        if any(linalg.rank(field, p) < 2 for p in blocks):
            return None
        ps = tuple(_camera(3, p, field) for p in blocks)
        qs = tuple(_camera(3, [f.linear_coefficients() for f in pair], field) for pair in lines.forms)
        return CriticalSetup(3, (1, 1, 1, 1), ps, qs)

    return _finish(factory, target, "four-lines construction")


def same_subspace(field: FieldSpec, a: Sequence[Sequence], b: Sequence[Sequence]) -> bool:
    """Row spans of ``a`` and ``b`` coincide."""
    ra, rb = linalg.rank(field, a), linalg.rank(field, b)
    return ra == rb == linalg.rank(field, list(a) + list(b))


def centers_match_lines(setup: CriticalSetup, lines: FourLines) -> list[bool]:
    out = []
    for i, q in enumerate(setup.Qs):
        center = center_of(q).basis
        out.append(same_subspace(setup.field, center, linalg.transpose(lines.line_parametrization(i))))
    return out


# residual twisted cubic ------------------------------------------------------

@dataclass(frozen=True)
class ResidualCubic:
    generators: tuple[MultiPoly, ...]
    relation: tuple[tuple, ...]  # 2x2 matrix taking (n13, n23) to (n33, n43)
    lines: tuple[tuple[MultiPoly, MultiPoly], ...]  # equations of the centers of the first three views
    matrix: PolyMatrix


def residual_twisted_cubic(source: CriticalSetup | PolyMatrix) -> ResidualCubic:
    """Three quadrics cutting the twisted cubic residual to three center lines."""
    N = block_reduction(source).N if isinstance(source, CriticalSetup) else source
    if N.shape != (4, 4):
        raise ValueError("residual cubic needs the 4x4 matrix of a four-view setup")
    field = N.field
    z = [N[0, 1], N[1, 1], N[2, 0], N[3, 0]]
    if any(z):
        raise NonGenericError("first two columns are not in block form")
    u = [N[0, 2], N[1, 2]]
    v = [N[2, 2], N[3, 2]]
    ucoef = [f.linear_coefficients() for f in u]
    if linalg.rank(field, ucoef) < 2:
        raise NonGenericError("third column does not cut a line in its top rows")
    rel = []
    for f in v:
        # a1 * u1 + a2 * u2 = f, solved in coefficient space
        sol = linalg.solve(field, linalg.transpose(ucoef), f.linear_coefficients())
        if sol is None:
            raise NonGenericError("bottom entries of the third column are not in the span of the top ones")
        rel.append(sol)
    (a, b), (c, d) = rel
    if field.reduce(a * d - b * c) == 0:
        raise NonGenericError("relation matrix is singular")
    adj = [[d, field.neg(b)], [field.neg(c), a]]
    q2 = [N[2, 1], N[3, 1]]
    mid = [_combine(field, adj[i], q2) for i in range(2)]
    mat = PolyMatrix([[N[0, 0], mid[0], u[0]], [N[1, 0], mid[1], u[1]]])
    gens = tuple(g for g in maximal_minors(mat, 2) if g)
    lines = ((N[0, 0], N[1, 0]), (N[2, 1], N[3, 1]), (u[0], u[1]))
    return ResidualCubic(gens, tuple(tuple(r) for r in rel), lines, mat)


def schur_curve(N: PolyMatrix) -> list[MultiPoly]:
    """Maximal minors of the first three columns of a four-view matrix."""
    return [g for g in maximal_minors(N.submatrix(range(N.rows), range(3)), 3) if g]


def line_parametrization(field: FieldSpec, eqs: Sequence[MultiPoly]) -> list[list]:
    coeffs = [f.linear_coefficients() for f in eqs]
    return linalg.transpose(linalg.nullspace(field, coeffs, eqs[0].nvars))
