"""Sparse multivariate polynomials over an exact field.

A :class:`MultiPoly` maps exponent tuples to nonzero coefficients.  Instances
are treated as immutable values; every operation returns a new polynomial.
Term order is graded lexicographic (``x0 > x1 > ...``) and is only used to make
iteration and printing deterministic.
"""

from __future__ import annotations

import itertools
import re
from functools import lru_cache
from math import comb
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from ..errors import DegenerateParametrizationError, DimensionMismatchError
from . import linalg
from .field import FieldSpec, Scalar

Monomial = tuple[int, ...]


def monomial_key(m: Monomial):
    return (sum(m), m)


@lru_cache(maxsize=None)
def monomials_of_degree(nvars: int, d: int) -> tuple[Monomial, ...]:
    """All exponent vectors of total degree ``d``, largest first in grlex."""
    if d < 0:
        return ()
    out = []
    for combo in itertools.combinations_with_replacement(range(nvars), d):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    out.sort(key=monomial_key, reverse=True)
    return tuple(out)


def count_monomials(nvars: int, d: int) -> int:
    return comb(d + nvars - 1, nvars - 1) if d >= 0 else 0


class MultiPoly:
    __slots__ = ("field", "nvars", "_terms", "_hash")

    def __init__(self, field: FieldSpec, nvars: int, terms: Mapping[Monomial, Scalar] | None = None):
        if nvars < 1:
            raise ValueError("a polynomial ring needs at least one variable")
        self.field = field
        self.nvars = nvars
        clean = {}
        for m, c in (terms or {}).items():
            if len(m) != nvars:
                raise DimensionMismatchError(f"monomial {m} has wrong length for {nvars} variables")
            c = field.reduce(c)
            if c != 0:
                clean[tuple(m)] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, field, nvars, terms):
        # terms already reduced and pruned
        p = object.__new__(cls)
        p.field, p.nvars, p._terms, p._hash = field, nvars, terms, None
        return p

    # constructors -------------------------------------------------------
    @classmethod
    def zero(cls, field: FieldSpec, nvars: int) -> "MultiPoly":
        return cls._raw(field, nvars, {})

    @classmethod
    def constant(cls, field: FieldSpec, nvars: int, c) -> "MultiPoly":
        return cls(field, nvars, {(0,) * nvars: field(c)})

    @classmethod
    def variable(cls, field: FieldSpec, nvars: int, i: int) -> "MultiPoly":
        e = [0] * nvars
        e[i] = 1
        return cls._raw(field, nvars, {tuple(e): field.one})

    @classmethod
    def linear_form(cls, field: FieldSpec, coeffs: Sequence) -> "MultiPoly":
        nvars = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            e = [0] * nvars
            e[i] = 1
            terms[tuple(e)] = field(c)
        return cls(field, nvars, terms)

    @classmethod
    def parse(cls, field: FieldSpec, nvars: int, text: str) -> "MultiPoly":
        """Parse sums of terms like ``3*x0^2*x1 - 1/2*x3 + 5``."""
        src = text.replace(" ", "").replace("**", "^")
        if not src:
            raise ValueError("empty polynomial")
        if src[0] not in "+-":
            src = "+" + src
        pieces = re.findall(r"[+-][^+-]+", src)
        if "".join(pieces) != src:
            raise ValueError(f"cannot parse polynomial {text!r}")
        total = cls.zero(field, nvars)
        for piece in pieces:
            sign, body = piece[0], piece[1:]
            coeff = field.one
            e = [0] * nvars
            for factor in body.split("*"):
                vm = re.fullmatch(r"x(\d+)(?:\^(\d+))?", factor)
                if vm:
                    i = int(vm.group(1))
                    if i >= nvars:
                        raise ValueError(f"variable x{i} out of range for {nvars} variables")
                    e[i] += int(vm.group(2) or 1)
                else:
                    coeff = field.reduce(coeff * field(factor))
            if sign == "-":
                coeff = field.neg(coeff)
            total = total + cls(field, nvars, {tuple(e): coeff})
        return total

    # basic protocol -----------------------------------------------------
    @property
    def terms(self) -> Mapping[Monomial, Scalar]:
        return MappingProxyType(self._terms)

    def sorted_terms(self) -> list[tuple[Monomial, Scalar]]:
        return sorted(self._terms.items(), key=lambda t: monomial_key(t[0]), reverse=True)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def degree(self) -> int:
        """Maximum total degree of a term; ``-1`` for the zero polynomial."""
        return max((sum(m) for m in self._terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self._terms}) <= 1

    def coefficient(self, m: Monomial) -> Scalar:
        return self._terms.get(tuple(m), self.field.zero)

    def linear_coefficients(self) -> list[Scalar]:
        """Coefficient vector of a linear form."""
        if self._terms and self.degree() != 1 or not self.is_homogeneous():
            raise ValueError("not a linear form")
        out = [self.field.zero] * self.nvars
        for m, c in self._terms.items():
            out[m.index(1)] = c
        return out

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.field == other.field and self.nvars == other.nvars and self._terms == other._terms
        if isinstance(other, int):
            return self == MultiPoly.constant(self.field, self.nvars, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field, self.nvars, frozenset(self._terms.items())))
        return self._hash

    # arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.nvars != self.nvars or other.field != self.field:
                raise DimensionMismatchError(
                    f"ring mismatch: {self.nvars} vars over {self.field} vs {other.nvars} vars over {other.field}")
            return other
        return MultiPoly.constant(self.field, self.nvars, other)

    def __add__(self, other):
        other = self._coerce(other)
        acc = dict(self._terms)
        for m, c in other._terms.items():
            acc[m] = acc.get(m, 0) + c
        return self._pruned(acc)

    __radd__ = __add__

    def __neg__(self):
        f = self.field
        return MultiPoly._raw(f, self.nvars, {m: f.neg(c) for m, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        other = self._coerce(other)
        acc: dict = {}
        for ma, ca in self._terms.items():
            for mb, cb in other._terms.items():
                m = tuple(x + y for x, y in zip(ma, mb))
                acc[m] = acc.get(m, 0) + ca * cb
        return self._pruned(acc)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative exponent")
        result = MultiPoly.constant(self.field, self.nvars, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def scale(self, c) -> "MultiPoly":
        c = self.field(c)
        if c == 0:
            return MultiPoly.zero(self.field, self.nvars)
        f = self.field
        return MultiPoly._raw(f, self.nvars, {m: f.reduce(v * c) for m, v in self._terms.items()})

    def _pruned(self, acc):
        f = self.field
        out = {}
        for m, c in acc.items():
            c = f.reduce(c)
            if c != 0:
                out[m] = c
        return MultiPoly._raw(f, self.nvars, out)

    # analysis -----------------------------------------------------------
    def evaluate(self, point: Sequence) -> Scalar:
        if len(point) != self.nvars:
            raise DimensionMismatchError(f"point has {len(point)} coordinates, ring has {self.nvars}")
        f = self.field
        pt = [f(x) for x in point]
        total = 0
        for m, c in self._terms.items():
            term = c
            for x, e in zip(pt, m):
                if e:
                    term = term * x ** e
            total += term
        return f.reduce(total)

    def diff(self, i: int) -> "MultiPoly":
        if not 0 <= i < self.nvars:
            raise IndexError(f"variable index {i} out of range")
        acc = {}
        for m, c in self._terms.items():
            if m[i]:
                e = list(m)
                e[i] -= 1
                acc[tuple(e)] = c * m[i]
        return self._pruned(acc)

    def restrict(self, param: Sequence[Sequence]) -> "MultiPoly":
        return restrict_to_linear_subspace(self, param)

    def __repr__(self):
        return f"MultiPoly({self})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            mono = "*".join(f"x{i}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(m) if e)
            cs = self.field.format(c)
            if mono:
                parts.append(mono if cs == "1" else f"{cs}*{mono}")
            else:
                parts.append(cs)
        return " + ".join(parts)


# functional surface ---------------------------------------------------------

def poly_add(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    return a + b


def poly_mul(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    return a * b


def poly_eval(p: MultiPoly, point: Sequence) -> Scalar:
    return p.evaluate(point)


def partial_derivative(p: MultiPoly, var_index: int) -> MultiPoly:
    return p.diff(var_index)


def variables(field: FieldSpec, nvars: int) -> list[MultiPoly]:
    return [MultiPoly.variable(field, nvars, i) for i in range(nvars)]


def restrict_to_linear_subspace(p: MultiPoly, param: Sequence[Sequence]) -> MultiPoly:
    """Substitute ``x_i = sum_j param[i][j] * t_j``.

    ``param`` is ``nvars x (m+1)`` of full column rank; the result lives in
    ``m+1`` variables ``t_0..t_m``.
    """
    f = p.field
    if len(param) != p.nvars:
        raise DimensionMismatchError(f"parametrization has {len(param)} rows, ring has {p.nvars} variables")
    mat = [[f(x) for x in row] for row in param]
    m1 = len(mat[0]) if mat else 0
    if m1 == 0 or m1 > p.nvars or linalg.rank(f, mat) != m1:
        raise DegenerateParametrizationError("parametrization must have full column rank")
    forms = [MultiPoly.linear_form(f, row) for row in mat]
    powers: dict[tuple[int, int], MultiPoly] = {}

    def power(i: int, e: int) -> MultiPoly:
        key = (i, e)
        if key not in powers:
            powers[key] = forms[i] if e == 1 else power(i, e - 1) * forms[i]
        return powers[key]

    total = MultiPoly.zero(f, m1)
    for mono, c in p.sorted_terms():
        term = MultiPoly.constant(f, m1, c)
        for i, e in enumerate(mono):
            if e:
                term = term * power(i, e)
        total = total + term
    return total


def coefficient_rows(polys: Iterable[MultiPoly], monomials: Sequence[Monomial]) -> list[list[Scalar]]:
    index = {m: j for j, m in enumerate(monomials)}
    rows = []
    for p in polys:
        row = [p.field.zero] * len(monomials)
        for m, c in p.terms.items():
            row[index[m]] = c
        rows.append(row)
    return rows


# univariate helpers (coefficient lists, lowest degree first) ---------------

def univariate_trim(a: list) -> list:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def univariate_divmod(field: FieldSpec, a: list, b: list) -> tuple[list, list]:
    a, b = univariate_trim(a), univariate_trim(b)
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    q = [field.zero] * max(len(a) - len(b) + 1, 0)
    inv = field.inv(b[-1])
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        coef = field.reduce(a[-1] * inv)
        q[shift] = coef
        for i, bc in enumerate(b):
            a[shift + i] = field.reduce(a[shift + i] - coef * bc)
        a = univariate_trim(a)
    return q, a


def univariate_gcd(field: FieldSpec, a: list, b: list) -> list:
    """Monic gcd; the gcd of two zero polynomials is ``[]``."""
    a, b = univariate_trim(a), univariate_trim(b)
    while b:
        _, r = univariate_divmod(field, a, b)
        a, b = b, r
    if not a:
        return []
    inv = field.inv(a[-1])
    return [field.reduce(c * inv) for c in a]


def univariate_derivative(field: FieldSpec, a: list) -> list:
    return univariate_trim([field.reduce(i * c) for i, c in enumerate(a)][1:])


def univariate_from_binary(form: MultiPoly) -> list:
    """Dehomogenize a binary form ``f(s, t)`` at ``t = 1`` to coefficients in ``s``."""
    if form.nvars != 2:
        raise DimensionMismatchError("expected a form in two variables")
    deg = max((m[0] for m in form.terms), default=-1)
    out = [form.field.zero] * (deg + 1)
    for (es, _), c in form.terms.items():
        out[es] = form.field.reduce(out[es] + c)
    return univariate_trim(out)
