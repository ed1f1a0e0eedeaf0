import itertools
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from clocus.errors import DegenerateParametrizationError, DimensionMismatchError
from clocus.polycore import linalg
from clocus.polycore.field import RATIONALS, is_prime, prime_field
from clocus.polycore.matrix import PolyMatrix, maximal_minors, poly_determinant
from clocus.polycore.poly import (
    MultiPoly,
    count_monomials,
    monomial_key,
    monomials_of_degree,
    partial_derivative,
    poly_add,
    poly_eval,
    poly_mul,
    restrict_to_linear_subspace,
    univariate_gcd,
    variables,
)
from clocus.rng import SplitMix64

from helpers import random_homogeneous

GF = prime_field()
seeds = st.integers(min_value=0, max_value=2**64 - 1)


def schoolbook_product(a, b):
    out = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            m = tuple(x + y for x, y in zip(ma, mb))
            out[m] = out.get(m, 0) + ca * cb
    return MultiPoly(a.field, a.nvars, out)


def monomial_sum(p, point):
    total = 0
    for m, c in p.terms.items():
        term = c
        for x, e in zip(point, m):
            term *= x**e
        total += term
    return p.field.reduce(total)


def leibniz(field, entries):
    n = len(entries)
    total = MultiPoly.zero(field, entries[0][0].nvars)
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = MultiPoly.constant(field, entries[0][0].nvars, 1)
        for i, j in enumerate(perm):
            term = term * entries[i][j]
        total = total - term if inversions % 2 else total + term
    return total


def random_linear_matrix(field, rows, cols, nvars, rng):
    return PolyMatrix([[random_homogeneous(field, nvars, 1, rng, density=1.0) for _ in range(cols)] for _ in range(rows)])


class TestField:
    def test_trial_division(self):
        assert [p for p in range(30) if is_prime(p)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]

    def test_rejects_composite_and_huge(self):
        with pytest.raises(ValueError):
            prime_field(32001)
        with pytest.raises(ValueError):
            prime_field(2**31 + 11)

    def test_coercion(self):
        assert GF("1/2") * 2 % 32003 == 1
        assert RATIONALS("-3/6") == Fraction(-1, 2)
        with pytest.raises(ZeroDivisionError):
            prime_field(5)(Fraction(1, 5))

    @pytest.mark.parametrize("field", [GF, prime_field(5), RATIONALS])
    @given(seed=seeds)
    def test_axioms(self, field, seed):
        rng = SplitMix64(seed)
        a, b, c = (field.random_element(rng) for _ in range(3))
        r = field.reduce
        assert r(r(a + b) + c) == r(a + r(b + c))
        assert r(r(a * b) * c) == r(a * r(b * c))
        assert r(a * r(b + c)) == r(r(a * b) + r(a * c))
        if a != 0:
            assert r(a * field.inv(a)) == field.one
        assert r(a + field.neg(a)) == field.zero


class TestPoly:
    def test_addition_examples(self):
        x0, x1 = variables(GF, 2)
        assert (x0 + (-x0)).is_zero()
        assert (x0 + x1) + x1 == x0 + x1.scale(2)
        y0 = MultiPoly.variable(prime_field(5), 1, 0)
        assert y0.scale(3) + y0.scale(3) == y0

    def test_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            poly_add(MultiPoly.variable(GF, 2, 0), MultiPoly.variable(GF, 3, 0))
        with pytest.raises(DimensionMismatchError):
            MultiPoly.variable(GF, 2, 0) + MultiPoly.variable(RATIONALS, 2, 0)

    def test_product_examples(self):
        x0, x1 = variables(RATIONALS, 2)
        assert poly_mul(x0 + x1, x0 - x1) == x0 * x0 - x1 * x1
        p = x0 * x1 + x1
        assert p * 1 == p

    def test_eval_and_derivative_examples(self):
        x0, x1 = variables(RATIONALS, 2)
        assert poly_eval(x0 * x1, [2, 3]) == 6
        assert partial_derivative(x0 * x0 * x1, 0) == (x0 * x1).scale(2)
        assert partial_derivative(MultiPoly.constant(RATIONALS, 2, 7), 1).is_zero()
        with pytest.raises(IndexError):
            partial_derivative(x0, 2)

    def test_parse(self):
        p = MultiPoly.parse(RATIONALS, 4, "3*x0^2*x1 - 1/2*x3")
        assert p.coefficient((2, 1, 0, 0)) == 3
        assert p.coefficient((0, 0, 0, 1)) == Fraction(-1, 2)

    def test_restriction_examples(self):
        x = variables(RATIONALS, 4)
        line = [[1, 0], [0, 1], [0, 0], [0, 0]]
        s, t = variables(RATIONALS, 2)
        assert restrict_to_linear_subspace(x[0], line) == s
        assert restrict_to_linear_subspace(x[0] * x[0] + x[1] * x[1], line) == s * s + t * t
        with pytest.raises(DegenerateParametrizationError):
            restrict_to_linear_subspace(x[0], [[1, 2], [1, 2], [0, 0], [0, 0]])

    def test_monomial_order_is_graded(self):
        monos = sorted(itertools.chain.from_iterable(monomials_of_degree(3, d) for d in range(4)), key=monomial_key)
        degrees = [sum(m) for m in monos]
        assert degrees == sorted(degrees)
        assert len(set(monos)) == len(monos) == sum(count_monomials(3, d) for d in range(4))

    @given(seed=seeds, da=st.integers(0, 3), db=st.integers(0, 3))
    def test_product_matches_schoolbook(self, seed, da, db):
        rng = SplitMix64(seed)
        a = random_homogeneous(GF, 4, da, rng, density=1.0)
        b = random_homogeneous(GF, 4, db, rng, density=1.0)
        prod = a * b
        assert prod == schoolbook_product(a, b)
        if a and b:
            assert prod.degree() == da + db

    @given(seed=seeds, d=st.integers(0, 4))
    def test_evaluation_matches_monomial_sum(self, seed, d):
        rng = SplitMix64(seed)
        p = random_homogeneous(GF, 4, d, rng)
        v = [GF.random_element(rng) for _ in range(4)]
        lam = GF.random_element(rng)
        assert p.evaluate(v) == monomial_sum(p, v)
        assert p.evaluate([lam * x for x in v]) == GF.reduce(pow(lam, d, GF.modulus) * p.evaluate(v))

    @given(seed=seeds, d=st.integers(1, 5))
    def test_euler_relation(self, seed, d):
        p = random_homogeneous(GF, 4, d, SplitMix64(seed))
        xs = variables(GF, 4)
        euler = MultiPoly.zero(GF, 4)
        for i, x in enumerate(xs):
            euler = euler + x * p.diff(i)
        assert euler == p.scale(d)

    @given(seed=seeds, d=st.integers(1, 4), m=st.integers(1, 3))
    def test_restriction_commutes_with_evaluation(self, seed, d, m):
        rng = SplitMix64(seed)
        p = random_homogeneous(GF, 4, d, rng)
        param = linalg.random_full_rank(GF, 4, m + 1, rng)
        v = [GF.random_element(rng) for _ in range(m + 1)]
        restricted = p.restrict(param)
        assert restricted.degree() <= d
        assert restricted.evaluate(v) == p.evaluate(linalg.matvec(GF, param, v))

    def test_univariate_gcd(self):
        # (s-1)(s-2) and (s-1)(s-3) over QQ
        gcd = univariate_gcd(RATIONALS, [2, -3, 1], [3, -4, 1])
        assert gcd == [-1, 1]


class TestLinalg:
    @given(seed=seeds, n=st.integers(1, 5))
    def test_determinant_matches_leibniz(self, seed, n):
        rng = SplitMix64(seed)
        a = linalg.random_matrix(GF, n, n, rng)
        total = 0
        for perm in itertools.permutations(range(n)):
            sign = (-1) ** sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
            term = sign
            for i, j in enumerate(perm):
                term *= a[i][j]
            total += term
        assert linalg.determinant(GF, a) == total % GF.modulus

    @given(seed=seeds, rows=st.integers(1, 6), cols=st.integers(1, 6))
    def test_rank_nullity(self, seed, rows, cols):
        a = linalg.random_matrix(prime_field(7), rows, cols, SplitMix64(seed))
        f = prime_field(7)
        kernel = linalg.nullspace(f, a)
        assert linalg.rank(f, a) + len(kernel) == cols
        for v in kernel:
            assert linalg.matvec(f, a, v) == [0] * rows

    @given(seed=seeds)
    def test_numpy_rank_agrees(self, seed):
        import numpy as np

        f = prime_field(31)
        rng = SplitMix64(seed)
        a = [[f.random_element(rng) if rng.below(3) else 0 for _ in range(9)] for _ in range(7)]
        assert linalg.rank_mod_p(np.array(a, dtype=np.int64), 31) == linalg.rank(f, a)

    def test_inverse_and_solve(self, gf):
        rng = SplitMix64(3)
        a = linalg.random_invertible(gf, 4, rng)
        assert linalg.matmul(gf, a, linalg.inverse(gf, a)) == linalg.identity(gf, 4)
        b = [1, 2, 3, 4]
        assert linalg.matvec(gf, a, linalg.solve(gf, a, b)) == b


class TestDeterminant:
    def test_examples(self):
        x0, x1 = variables(RATIONALS, 2)
        zero = MultiPoly.zero(RATIONALS, 2)
        assert poly_determinant(PolyMatrix.from_scalars(RATIONALS, 2, linalg.identity(RATIONALS, 3))) == 1
        assert poly_determinant(PolyMatrix([[x0, zero], [zero, x1]])) == x0 * x1
        with pytest.raises(ValueError):
            poly_determinant(PolyMatrix([[x0, x1]]))

    @pytest.mark.parametrize("seed", range(4))
    def test_linear_4x4_matches_leibniz(self, seed):
        m = random_linear_matrix(GF, 4, 4, 4, SplitMix64(seed))
        assert poly_determinant(m) == leibniz(GF, m.tolist())

    @given(seed=seeds)
    def test_alternating(self, seed):
        rng = SplitMix64(seed)
        m = random_linear_matrix(GF, 4, 4, 3, rng)
        i, j = rng.below(4), rng.below(4)
        if i == j:
            return
        rows = list(range(4))
        rows[i], rows[j] = rows[j], rows[i]
        assert poly_determinant(m.submatrix(rows, range(4))) == -poly_determinant(m)

    @given(seed=seeds)
    def test_laplace_along_any_row(self, seed):
        rng = SplitMix64(seed)
        m = random_linear_matrix(GF, 4, 4, 3, rng)
        r = rng.below(4)
        total = MultiPoly.zero(GF, 3)
        for j in range(4):
            minor = poly_determinant(m.submatrix([i for i in range(4) if i != r], [c for c in range(4) if c != j]))
            term = m[r, j] * minor
            total = total - term if (r + j) % 2 else total + term
        assert total == poly_determinant(m)


class TestMinors:
    def test_counts(self):
        xs = variables(GF, 6)
        m = PolyMatrix([xs[0:2], xs[2:4], xs[4:6]])
        assert len(maximal_minors(m, 2)) == 3
        rng = SplitMix64(11)
        for rows, cols, size in [(4, 3, 3), (5, 3, 2), (3, 4, 2), (4, 4, 2)]:
            mm = random_linear_matrix(GF, rows, cols, 3, rng)
            assert len(maximal_minors(mm, size)) == comb(rows, size) * comb(cols, size)
        with pytest.raises(ValueError):
            maximal_minors(m, 3)

    def test_zero_row_minors(self):
        xs = variables(GF, 3)
        zero = MultiPoly.zero(GF, 3)
        m = PolyMatrix([[xs[0], xs[1]], [zero, zero], [xs[2], xs[0]]])
        minors = maximal_minors(m, 2)
        assert minors[0].is_zero() and minors[2].is_zero()
        assert not minors[1].is_zero()

    def test_cubic_minors_of_four_by_three(self):
        minors = maximal_minors(random_linear_matrix(GF, 4, 3, 5, SplitMix64(2)))
        assert len(minors) == 4
        assert all(p.is_homogeneous() and p.degree() == 3 for p in minors)

