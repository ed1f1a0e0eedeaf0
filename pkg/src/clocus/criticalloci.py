"""Critical-locus ideals: the matrix M, its block reduction N, and expected invariants."""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field as dc_field
from math import comb
from typing import Sequence

from .errors import DegenerateSetupError, InvalidSetupError
from .multiview import Projection, center_of, centers_disjoint, random_projection, stacked_rank, RESAMPLE_ATTEMPTS
from .polycore import linalg
from .polycore.field import FieldSpec
from .polycore.matrix import PolyMatrix, maximal_minors
from .polycore.poly import MultiPoly, restrict_to_linear_subspace


@dataclass(frozen=True)
class CriticalSetup:
    """Conjugate cameras ``Ps`` and cameras ``Qs`` whose centers lie on the locus."""

    k: int
    hs: tuple[int, ...]
    Ps: tuple[Projection, ...]
    Qs: tuple[Projection, ...]

    def __post_init__(self):
        if not (len(self.hs) == len(self.Ps) == len(self.Qs)) or not self.hs:
            raise InvalidSetupError("need n >= 1 matching cameras on both sides")
        for i, (h, p, q) in enumerate(zip(self.hs, self.Ps, self.Qs)):
            if p.k != self.k or q.k != self.k:
                raise InvalidSetupError(f"camera {i + 1} has the wrong source space")
            if p.h != h or q.h != h:
                raise InvalidSetupError(f"camera {i + 1} does not target P^{h}")
            if p.field != self.field or q.field != self.field:
                raise InvalidSetupError("cameras use different fields")
        if not centers_disjoint(self.Ps):
            raise InvalidSetupError("centers of the P cameras share a point")
        if not centers_disjoint(self.Qs):
            raise InvalidSetupError("centers of the Q cameras share a point")

    @property
    def n(self) -> int:
        return len(self.hs)

    @property
    def field(self) -> FieldSpec:
        return self.Ps[0].field

    @property
    def codim(self) -> int:
        return sum(self.hs) - self.k

    def to_json(self):
        return {
            "k": self.k,
            "hs": list(self.hs),
            "P": [p.to_json() for p in self.Ps],
            "Q": [q.to_json() for q in self.Qs],
        }


@dataclass(frozen=True)
class CriticalIdeal:
    generators: tuple[MultiPoly, ...]
    source_matrix: PolyMatrix
    expected_dim: int
    expected_deg: int


@dataclass(frozen=True)
class BlockReduction:
    a_rows: tuple[int, ...]
    c_rows: tuple[int, ...]
    ac_inv: tuple[tuple, ...]
    N: PolyMatrix


def pairwise_general(projs: Sequence[Projection]) -> bool:
    """Every two centers meet in the expected dimension (empty when ``h_i + h_j + 2 >= k + 1``)."""
    k1 = projs[0].k + 1
    return all(
        stacked_rank([a, b]) == min(k1, a.h + b.h + 2) for a, b in itertools.combinations(projs, 2)
    )


def random_setup(k: int, hs: Sequence[int], field: FieldSpec, rng, general_position: bool = False) -> CriticalSetup:
    """Seeded random setup; ``general_position`` also rejects pairs of meeting centers."""
    hs = tuple(hs)
    for _ in range(RESAMPLE_ATTEMPTS):
        ps = tuple(random_projection(k, h, field, rng) for h in hs)
        qs = tuple(random_projection(k, h, field, rng) for h in hs)
        if not (centers_disjoint(ps) and centers_disjoint(qs)):
            continue
        if general_position and not (pairwise_general(ps) and pairwise_general(qs)):
            continue
        return CriticalSetup(k, hs, ps, qs)
    raise InvalidSetupError(f"no setup satisfying the first generality assumption in {RESAMPLE_ATTEMPTS} draws")


def random_setup_meeting_centers(k: int, hs: Sequence[int], field: FieldSpec, rng, pair: tuple[int, int] = (0, 1)) -> tuple[CriticalSetup, list]:
    """Random setup whose Q-centers ``pair`` share a random point; returns the point too."""
    hs = tuple(hs)
    i, j = pair
    for _ in range(RESAMPLE_ATTEMPTS):
        base = random_setup(k, hs, field, rng)
        center = center_of(base.Qs[i]).basis
        weights = [field.random_nonzero(rng) for _ in center]
        point = [field.reduce(sum(w * v[t] for w, v in zip(weights, center))) for t in range(k + 1)]
        annihilator = linalg.nullspace(field, [point], k + 1)
        mix = linalg.random_matrix(field, hs[j] + 1, len(annihilator), rng)
        rows = linalg.matmul(field, mix, annihilator)
        if linalg.rank(field, rows) < hs[j] + 1:
            continue
        qs = list(base.Qs)
        qs[j] = Projection(k, hs[j], tuple(tuple(r) for r in rows), field)
        try:
            return CriticalSetup(k, hs, base.Ps, tuple(qs)), point
        except InvalidSetupError:
            continue
    raise InvalidSetupError(f"no setup with meeting centers in {RESAMPLE_ATTEMPTS} draws")


def with_target_homography(setup: CriticalSetup, index: int, g: Sequence[Sequence]) -> CriticalSetup:
    """Change coordinates on the target of view ``index``: ``P_i -> G P_i`` and ``Q_i -> G Q_i``.

    Transforming ``Q_i`` alone moves the locus; the joint change only
    multiplies one row block of M by ``G``.
    """
    f = setup.field
    q, p = setup.Qs[index], setup.Ps[index]
    if linalg.rank(f, g) != q.h + 1 or len(g) != q.h + 1:
        raise ValueError("homography must be an invertible (h+1)-square matrix")
    qs, ps = list(setup.Qs), list(setup.Ps)
    qs[index] = Projection(q.k, q.h, tuple(tuple(r) for r in linalg.matmul(f, g, q.rows())), f)
    ps[index] = Projection(p.k, p.h, tuple(tuple(r) for r in linalg.matmul(f, g, p.rows())), f)
    return CriticalSetup(setup.k, setup.hs, tuple(ps), tuple(qs))


def _row_blocks(setup: CriticalSetup) -> list[tuple[int, int]]:
    """(block index, row within block) for every row of M."""
    return [(i, r) for i, h in enumerate(setup.hs) for r in range(h + 1)]


def assemble_m(setup: CriticalSetup) -> PolyMatrix:
    f = setup.field
    nv = setup.k + 1
    zero = MultiPoly.zero(f, nv)
    forms = [q.forms() for q in setup.Qs]
    rows = []
    for i, r in _row_blocks(setup):
        scal = [MultiPoly.constant(f, nv, x) for x in setup.Ps[i].matrix[r]]
        lin = [forms[i][r] if j == i else zero for j in range(setup.n)]
        rows.append(scal + lin)
    return PolyMatrix(rows)


def block_reduction(setup: CriticalSetup) -> BlockReduction:
    """Split M into ``[[A, B], [C, D]]`` with C invertible and form ``N = B - A C^-1 D``.

    The top rows (A, B) are the lexicographically first row subset whose
    complement makes C invertible, so for generic data A consists of the
    leading rows of M.
    """
    f = setup.field
    k1 = setup.k + 1
    blocks = _row_blocks(setup)
    total = len(blocks)
    top = total - k1
    if top < 0:
        raise DegenerateSetupError(f"M has {total} rows, fewer than k+1={k1}")
    scal = [list(setup.Ps[i].matrix[r]) for i, r in blocks]
    coeffs = [[list(v) for v in q.matrix] for q in setup.Qs]

    for a_rows in itertools.combinations(range(total), top):
        c_rows = [r for r in range(total) if r not in a_rows]
        cmat = [scal[r] for r in c_rows]
        if linalg.rank(f, cmat) != k1:
            continue
        amat = [scal[r] for r in a_rows]
        g = linalg.matmul(f, amat, linalg.inverse(f, cmat)) if amat else []
        entries = []
        for ai, r in enumerate(a_rows):
            bi, br = blocks[r]
            row = []
            for j in range(setup.n):
                vec = list(coeffs[j][br]) if bi == j else [f.zero] * k1
                for ci, cr in enumerate(c_rows):
                    di, dr = blocks[cr]
                    gv = g[ai][ci]
                    if di == j and gv != 0:
                        vec = [f.reduce(x - gv * y) for x, y in zip(vec, coeffs[j][dr])]
                row.append(MultiPoly.linear_form(f, vec))
            entries.append(row)
        if not entries:
            raise DegenerateSetupError("N would be empty: sum h < k+1")
        return BlockReduction(tuple(a_rows), tuple(c_rows), tuple(tuple(r) for r in g), PolyMatrix(entries))
    raise DegenerateSetupError("no choice of k+1 rows of M gives an invertible block C")


def reduce_to_n(setup: CriticalSetup) -> PolyMatrix:
    return block_reduction(setup).N


def expected_dimension(k: int, hs: Sequence[int]) -> int:
    return 2 * k - sum(hs)


def expected_degree(n: int, k: int, hs: Sequence[int]) -> int:
    if expected_dimension(k, hs) < 0:
        raise ValueError("expected dimension is negative")
    return comb(n - k - 1 + sum(hs), n - 1)


def critical_ideal(setup: CriticalSetup) -> CriticalIdeal:
    N = reduce_to_n(setup)
    gens = tuple(g for g in maximal_minors(N, setup.n) if g)
    return CriticalIdeal(gens, N, expected_dimension(setup.k, setup.hs), expected_degree(setup.n, setup.k, setup.hs))


def generators_vanish_on(generators: Sequence[MultiPoly], param: Sequence[Sequence]) -> bool:
    """True iff every generator restricts to zero on the span of ``param``'s columns."""
    return all(restrict_to_linear_subspace(g, param).is_zero() for g in generators)


def center_containment(setup: CriticalSetup, ideal: CriticalIdeal | Sequence[MultiPoly]) -> list[bool]:
    gens = ideal.generators if isinstance(ideal, CriticalIdeal) else tuple(ideal)
    return [generators_vanish_on(gens, center_of(q).parametrization()) for q in setup.Qs]


# numerical bounds -------------------------------------------------------------

class BoundsClass(enum.Enum):
    MAYBE_SMOOTH_IRREDUCIBLE = "MaybeSmoothIrreducible"
    FORCED_REDUCIBLE = "ForcedReducible"
    FORCED_SINGULAR = "ForcedSingular"
    PROFILE_INFEASIBLE = "ProfileInfeasible"


def explain_bounds(n: int, k: int, hs: Sequence[int], c: int | None = None) -> tuple[BoundsClass, str]:
    """Necessary conditions for a smooth irreducible critical locus.

    Returns the first obstruction found together with a one-line reason.
    """
    hs = sorted(hs)
    if c is None:
        c = sum(hs) - k
    if len(hs) != n:
        raise ValueError("len(hs) must equal n")
    if c != sum(hs) - k:
        raise ValueError(f"codimension must be sum(h) - k = {sum(hs) - k}, got {c}")
    if n < 1 or any(not 0 <= h < k for h in hs):
        return BoundsClass.PROFILE_INFEASIBLE, "every target must satisfy 0 <= h < k"
    if sum(hs) < k + 1:
        return BoundsClass.PROFILE_INFEASIBLE, f"sum h = {sum(hs)} < k + 1 = {k + 1}"
    if c > k:
        return BoundsClass.PROFILE_INFEASIBLE, f"expected dimension {k - c} is negative"
    if hs[0] < c - 1:
        return BoundsClass.FORCED_REDUCIBLE, f"a center has dimension {k - hs[0] - 1} > expected dimension {k - c}"
    if hs[0] == c - 1:
        return BoundsClass.FORCED_REDUCIBLE, "a center of codimension c is a component"
    if n >= 4 and c >= 2:
        return BoundsClass.FORCED_SINGULAR, "n >= 4 views with codimension >= 2"
    if n >= 5 and c == 1:
        return BoundsClass.FORCED_SINGULAR, "n >= 5 views with codimension 1"
    if n >= 2 and sum(hs[: n - 2]) >= c + 2:
        return BoundsClass.FORCED_SINGULAR, "the two smallest centers meet"
    if n >= 2 and k >= hs[0] + hs[1] + 2:
        return BoundsClass.FORCED_SINGULAR, "the two largest centers meet"
    return BoundsClass.MAYBE_SMOOTH_IRREDUCIBLE, "no obstruction from the numerical bounds"


def bounds_classifier(n: int, k: int, hs: Sequence[int], c: int | None = None) -> BoundsClass:
    return explain_bounds(n, k, hs, c)[0]


# structural normal form for three views ----------------------------------------

@dataclass
class StructureReport:
    matrix: PolyMatrix
    row_operation: list[list]
    columns_depend_on_own_view: bool
    zero_pattern: bool
    third_column_zero: bool | None
    pivot_forms_rank: int | None
    generic: bool
    notes: list[str] = dc_field(default_factory=list)


def _coeff_matrix(entries: Sequence[MultiPoly]) -> list[list]:
    return [e.linear_coefficients() for e in entries]


def structure_constraints(N: PolyMatrix, setup: CriticalSetup) -> StructureReport:
    """Row-reduce a three-view N toward the normal form used for the singularity argument.

    Targets, in 0-based indices with ``c = rows - 2``: ``N[c+1][0] = 0``,
    ``N[c][1] = 0`` and, when ``h_3 = c``, ``N[c-1][2] = 0``.  Column ``j``
    must involve only the forms of ``Q_j``.
    """
    if setup.n != 3 or N.cols != 3:
        raise ValueError("structure constraints apply to three views")
    f = setup.field
    rows = N.rows
    c = rows - 2
    notes: list[str] = []
    wanted = {c + 1: 0, c: 1}
    if setup.hs[2] == c:
        wanted[c - 1] = 2

    fixed: dict[int, list] = {}
    for r, j in wanted.items():
        kernel = linalg.left_nullspace(f, _coeff_matrix(N.column(j)))
        if not kernel:
            notes.append(f"column {j + 1} forms are independent; no zero at row {r + 1}")
            continue
        if len(kernel) > 1:
            notes.append(f"column {j + 1} spans less than expected")
        fixed[r] = kernel[0]

    g: list[list | None] = [fixed.get(r) for r in range(rows)]
    chosen = [v for v in g if v is not None]
    if chosen and linalg.rank(f, chosen) < len(chosen):
        notes.append("zero-pattern row operations are dependent")
        chosen_ok = False
    else:
        chosen_ok = True
    basis = iter(linalg.identity(f, rows))
    for r in range(rows):
        if g[r] is not None:
            continue
        for e in basis:
            trial = [v for v in g if v is not None] + [e]
            if linalg.rank(f, trial) == len(trial):
                g[r] = e
                break
    if any(v is None for v in g) or linalg.rank(f, g) < rows:
        g = linalg.identity(f, rows)
        chosen_ok = False
    normalized = N.left_multiply(g)

    spans = [q.rows() for q in setup.Qs]
    own = True
    for j in range(3):
        base = linalg.rank(f, spans[j])
        for e in normalized.column(j):
            if e and linalg.rank(f, spans[j] + [e.linear_coefficients()]) != base:
                own = False
    zero_ok = chosen_ok and normalized[c + 1, 0].is_zero() and normalized[c, 1].is_zero()
    third = None
    if setup.hs[2] == c:
        third = chosen_ok and normalized[c - 1, 2].is_zero()

    pivot_rank = None
    if setup.k + 1 >= c + 3:
        pivot = [normalized[i, 0] for i in range(c + 1)] + [normalized[c + 1, 1], normalized[c + 1, 2]]
        pivot_rank = linalg.rank(f, _coeff_matrix(pivot))
        if pivot_rank < c + 3:
            notes.append(f"distinguished forms span only {pivot_rank} of {c + 3} dimensions")
    generic = own and zero_ok and third is not False and (pivot_rank is None or pivot_rank == c + 3)
    return StructureReport(normalized, g, own, zero_ok, third, pivot_rank, generic, notes)
