"""Cameras as projections P^k --> P^h, their centers, and Grassmann tensors."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import InvalidCameraError, ProfileMismatchError
from .polycore import linalg
from .polycore.field import FieldSpec, Scalar
from .polycore.poly import MultiPoly

RESAMPLE_ATTEMPTS = 32


@dataclass(frozen=True)
class Projection:
    """A full-rank ``(h+1) x (k+1)`` camera matrix over ``field``."""

    k: int
    h: int
    matrix: tuple[tuple[Scalar, ...], ...]
    field: FieldSpec

    def rows(self) -> list[list[Scalar]]:
        return [list(r) for r in self.matrix]

    def forms(self) -> list[MultiPoly]:
        """The linear forms ``Q(X)``, one per row, in ``k+1`` variables."""
        return [MultiPoly.linear_form(self.field, r) for r in self.matrix]

    def apply(self, point: Sequence[Scalar]) -> list[Scalar]:
        return linalg.matvec(self.field, self.matrix, point)

    def to_json(self):
        return [[self.field.format(x) for x in r] for r in self.matrix]


@dataclass(frozen=True)
class Center:
    basis: tuple[tuple[Scalar, ...], ...]

    @property
    def projective_dimension(self) -> int:
        return len(self.basis) - 1

    def parametrization(self) -> list[list[Scalar]]:
        """``(k+1) x dim`` matrix whose columns span the center."""
        return linalg.transpose(self.basis)


@dataclass(frozen=True)
class SubspaceFrame:
    """Columns spanning a linear subspace of the target ``P^h``."""

    columns: tuple[tuple[Scalar, ...], ...]  # stored as (h+1) rows
    field: FieldSpec

    @property
    def h(self) -> int:
        return len(self.columns) - 1

    @property
    def width(self) -> int:
        return len(self.columns[0]) if self.columns else 0

    @property
    def codimension(self) -> int:
        return self.h + 1 - self.width


def make_projection(k: int, h: int, entries: Sequence[Sequence], field: FieldSpec) -> Projection:
    if not 0 <= h < k:
        raise InvalidCameraError(f"need 0 <= h < k, got h={h}, k={k}")
    if len(entries) != h + 1 or any(len(r) != k + 1 for r in entries):
        raise InvalidCameraError(f"camera matrix must be {h + 1}x{k + 1}")
    mat = linalg.as_matrix(field, entries)
    if linalg.rank(field, mat) != h + 1:
        raise InvalidCameraError("camera matrix is rank deficient")
    return Projection(k, h, tuple(tuple(r) for r in mat), field)


def random_projection(k: int, h: int, field: FieldSpec, rng) -> Projection:
    for _ in range(RESAMPLE_ATTEMPTS):
        m = linalg.random_matrix(field, h + 1, k + 1, rng)
        if linalg.rank(field, m) == h + 1:
            return Projection(k, h, tuple(tuple(r) for r in m), field)
    raise InvalidCameraError(f"no full-rank camera sampled in {RESAMPLE_ATTEMPTS} attempts")


def center_of(p: Projection) -> Center:
    basis = linalg.nullspace(p.field, p.rows(), p.k + 1)
    return Center(tuple(tuple(v) for v in basis))


def stacked_rank(projs: Sequence[Projection]) -> int:
    rows = [list(r) for p in projs for r in p.matrix]
    return linalg.rank(projs[0].field, rows)


def centers_disjoint(projs: Sequence[Projection]) -> bool:
    """True iff ``C_1 ∩ ... ∩ C_n`` is empty, i.e. the stacked matrix has rank ``k+1``."""
    return stacked_rank(projs) == projs[0].k + 1


@dataclass(frozen=True)
class ProfileCheck:
    valid: bool
    feasible: bool
    diagnostic: str

    def __bool__(self):
        return self.valid


def validate_profile(k: int, hs: Sequence[int], alphas: Sequence[int]) -> ProfileCheck:
    if len(hs) != len(alphas):
        raise ValueError("hs and alphas must have equal length")
    feasible = k + 1 <= sum(hs)
    problems = []
    if sum(alphas) != k + 1:
        problems.append(f"sum of codimensions is {sum(alphas)}, expected k+1={k + 1}")
    for i, (a, h) in enumerate(zip(alphas, hs)):
        if not 0 <= a <= h:
            problems.append(f"alpha_{i + 1}={a} outside [0, h_{i + 1}={h}]")
    if not feasible:
        problems.append(f"infeasible: sum h = {sum(hs)} < k+1 = {k + 1}")
    return ProfileCheck(not problems, feasible, "; ".join(problems) or "ok")


def grassmann_order(k: int, hs: Sequence[int], alphas: Sequence[int]) -> int:
    rows = len(hs) + sum(hs)
    cols = k + 1 + sum(h - a + 1 for h, a in zip(hs, alphas))
    if rows != cols:
        raise ProfileMismatchError(f"row count {rows} differs from column count {cols}")
    return rows


def assemble_grassmann_matrix(projs: Sequence[Projection], frames: Sequence[SubspaceFrame]) -> list[list[Scalar]]:
    """Block matrix ``[P_i | 0 .. S_i .. 0]`` whose determinant is the Grassmann tensor."""
    if len(projs) != len(frames):
        raise ProfileMismatchError("one frame per projection is required")
    field = projs[0].field
    k = projs[0].k
    for p, s in zip(projs, frames):
        if p.k != k:
            raise ProfileMismatchError("projections have different source spaces")
        if s.h != p.h:
            raise ProfileMismatchError(f"frame lives in P^{s.h}, camera targets P^{p.h}")
    hs = [p.h for p in projs]
    alphas = [s.codimension for s in frames]
    if not validate_profile(k, hs, alphas).valid:
        raise ProfileMismatchError(validate_profile(k, hs, alphas).diagnostic)
    order = grassmann_order(k, hs, alphas)
    out = []
    offset = k + 1
    for p, s in zip(projs, frames):
        for r in range(p.h + 1):
            row = [field.zero] * order
            row[: k + 1] = p.matrix[r]
            row[offset: offset + s.width] = s.columns[r]
            out.append(row)
        offset += s.width
    return out


def grassmann_tensor_value(projs: Sequence[Projection], frames: Sequence[SubspaceFrame]) -> Scalar:
    return linalg.determinant(projs[0].field, assemble_grassmann_matrix(projs, frames))


def are_corresponding(projs: Sequence[Projection], frames: Sequence[SubspaceFrame]) -> bool:
    return grassmann_tensor_value(projs, frames) == 0


def frame_from_columns(field: FieldSpec, columns: Sequence[Sequence]) -> SubspaceFrame:
    """Build a frame from a list of column vectors; rejects dependent columns."""
    mat = linalg.transpose([[field(x) for x in c] for c in columns])
    if linalg.rank(field, mat) != len(columns):
        raise ProfileMismatchError("frame columns are dependent")
    return SubspaceFrame(tuple(tuple(r) for r in mat), field)


def random_frame(field: FieldSpec, h: int, alpha: int, rng) -> SubspaceFrame:
    width = h - alpha + 1
    for _ in range(RESAMPLE_ATTEMPTS):
        cols = linalg.random_matrix(field, width, h + 1, rng)
        if linalg.rank(field, cols) == width:
            return frame_from_columns(field, cols)
    raise ProfileMismatchError("could not sample an independent frame")


def witness_frames(projs: Sequence[Projection], point: Sequence[Scalar], alphas: Sequence[int], rng) -> list[SubspaceFrame]:
    """Frames ``S_i = (P_i X | random)`` so all subspaces pass through the images of ``X``."""
    frames = []
    for p, a in zip(projs, alphas):
        image = p.apply(point)
        width = p.h - a + 1
        for _ in range(RESAMPLE_ATTEMPTS):
            extra = linalg.random_matrix(p.field, width - 1, p.h + 1, rng)
            cols = [image] + extra
            if linalg.rank(p.field, cols) == width:
                frames.append(frame_from_columns(p.field, cols))
                break
        else:
            raise ProfileMismatchError("image point vanishes or frame sampling failed")
    return frames


def fundamental_matrix(p1: Projection, p2: Projection) -> list[list[Scalar]]:
    """Bilinear form of two cameras P^3 --> P^2 via complementary 4x4 determinants.

    ``F[j][i] = (-1)^(i+j) det([P1 without row i; P2 without row j])``.
    """
    if (p1.k, p1.h, p2.k, p2.h) != (3, 2, 3, 2):
        raise ValueError("fundamental matrix needs two cameras P^3 --> P^2")
    f = p1.field
    out = [[f.zero] * 3 for _ in range(3)]
    for i in range(3):
        a = [r for t, r in enumerate(p1.rows()) if t != i]
        for j in range(3):
            b = [r for t, r in enumerate(p2.rows()) if t != j]
            d = linalg.determinant(f, a + b)
            out[j][i] = d if (i + j) % 2 == 0 else f.neg(d)
    return out
