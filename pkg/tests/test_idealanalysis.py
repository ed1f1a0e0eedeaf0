import warnings
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clocus.criticalloci import critical_ideal, random_setup, reduce_to_n, structure_constraints
from clocus.errors import DimensionGuardError, InconsistencyError, NeedsHigherDegreeError, NonGenericError, NotOnVarietyError
from clocus.idealanalysis import (
    HilbertProfile,
    dimension_and_degree,
    enumerate_points,
    fit_hilbert_polynomial,
    graded_piece_rank,
    hilbert_function,
    jacobian_at,
    line_slice_degree,
    measure_hilbert,
    plucker_relation,
    restricted_gcd,
    singular_linear_space_L,
    singular_locus_dimension,
    smoothness_survey,
    survey_linear_space,
)
from clocus.oracles import naive_hilbert_function, naive_hilbert_value
from clocus.polycore import linalg
from clocus.polycore.field import RATIONALS, prime_field
from clocus.polycore.matrix import PolyMatrix, maximal_minors
from clocus.polycore.poly import MultiPoly, variables
from clocus.rng import SplitMix64

GF = prime_field()
seeds = st.integers(min_value=0, max_value=2**64 - 1)


def xs(field=GF, n=4):
    return variables(field, n)


def twisted_cubic(field=GF):
    x = xs(field)
    return maximal_minors(PolyMatrix([[x[0], x[1], x[2]], [x[1], x[2], x[3]]]), 2)


def bordiga(seed=3):
    return critical_ideal(random_setup(4, (2, 2, 2), GF, SplitMix64(seed))).generators


class TestGradedPieces:
    def test_examples(self):
        x = xs()
        assert graded_piece_rank([x[0]], 2) == 4
        assert graded_piece_rank([x[0], x[1]], 2) == 7

    def test_bordiga_generators_independent(self):
        gens = bordiga()
        assert graded_piece_rank(gens, 3) == 4
        assert comb(7, 3) - naive_hilbert_value(gens, 3) == 4


class TestHilbert:
    def test_hyperplane(self):
        x = xs()
        profile = hilbert_function([x[0]], 6)
        assert [profile.values[d] for d in range(7)] == [comb(d + 2, 2) for d in range(7)]
        assert dimension_and_degree(profile, 3) == (2, 1)

    def test_quadric(self):
        x = xs()
        assert dimension_and_degree(measure_hilbert([x[0] * x[3] - x[1] * x[2]]), 3) == (2, 2)

    @pytest.mark.parametrize("field", [GF, RATIONALS])
    def test_twisted_cubic_against_naive(self, field):
        gens = twisted_cubic(field)
        profile = hilbert_function(gens, 6)
        naive = naive_hilbert_function(gens, 6)
        assert profile.values == naive
        assert [naive[d] for d in range(7)] == [3 * d + 1 for d in range(7)]
        assert dimension_and_degree(profile, 3) == (1, 3)

    def test_fit_examples(self):
        coeffs, start = fit_hilbert_polynomial([3 * d + 1 for d in range(8)])
        assert coeffs == (Fraction(1), Fraction(3)) and start == 0
        coeffs, _ = fit_hilbert_polynomial([comb(d + 2, 2) for d in range(8)])
        assert coeffs == (Fraction(1), Fraction(3, 2), Fraction(1, 2))

    def test_short_sequence_needs_higher_degree(self):
        with pytest.raises(NeedsHigherDegreeError):
            fit_hilbert_polynomial([1, 4])

    def test_non_integral_degree_rejected(self):
        bad = HilbertProfile({0: 1}, (Fraction(0), Fraction(1, 2)), 0, 4)
        with pytest.raises(InconsistencyError):
            dimension_and_degree(bad)

    def test_bordiga_invariants(self):
        assert dimension_and_degree(measure_hilbert(bordiga(), dim_hint=2), 4) == (2, 6)

    @settings(max_examples=8)
    @given(seed=seeds, case=st.sampled_from([(3, (2, 2)), (4, (2, 2, 2)), (4, (3, 3))]))
    def test_two_primes_agree(self, seed, case):
        k, hs = case
        a = critical_ideal(random_setup(k, hs, prime_field(32003), SplitMix64(seed))).generators
        b = critical_ideal(random_setup(k, hs, prime_field(31991), SplitMix64(seed))).generators
        assert hilbert_function(a, 6).values == hilbert_function(b, 6).values

    @pytest.mark.parametrize("k,hs", [(3, (2, 2)), (4, (3, 3)), (4, (2, 2, 2)), (3, (1, 1, 1, 1))])
    def test_generic_setups_match_formulas(self, k, hs):
        ideal = critical_ideal(random_setup(k, hs, GF, SplitMix64(101)))
        measured = dimension_and_degree(measure_hilbert(ideal.generators, dim_hint=ideal.expected_dim), k)
        assert measured == (ideal.expected_dim, ideal.expected_deg)


class TestPoints:
    def test_hyperplane_and_line_counts(self):
        assert len(enumerate_points([xs(prime_field(3))[0]])) == 13
        x = xs(prime_field(5))
        points = enumerate_points([x[0], x[1]])
        assert len(points) == 6 and len(set(points)) == 6

    def test_one_representative_per_class(self):
        f = prime_field(7)
        x = xs(f)
        points = enumerate_points([x[0] * x[3] - x[1] * x[2]])
        for pt in points:
            lead = next(c for c in pt if c)
            assert lead == 1
        assert len(points) == (f.modulus + 1) ** 2

    def test_large_prime_refused(self):
        with pytest.raises(ValueError):
            enumerate_points([xs()[0]])

    def test_quartic_count_sanity_band(self):
        f = prime_field(11)
        ideal = critical_ideal(random_setup(3, (1, 1, 1, 1), f, SplitMix64(2)))
        count = len(enumerate_points(ideal.generators))
        p = f.modulus
        if abs(count - (p * p + p + 1)) > 22 * p:
            warnings.warn(f"{count} points on a quartic over GF({p}) is outside the expected band")
        assert count > 0


class TestJacobian:
    def test_smooth_quadric_point(self):
        x = xs(RATIONALS)
        jac, rank = jacobian_at([x[0] * x[3] - x[1] * x[2]], [1, 0, 0, 0])
        assert rank == 1 and jac == [[0, 0, 0, 1]]

    def test_cone_vertex(self):
        x = xs(RATIONALS)
        _, rank = jacobian_at([x[0] * x[1] - x[2] * x[2]], [0, 0, 0, 1])
        assert rank == 0

    def test_not_on_variety(self):
        x = xs(RATIONALS)
        with pytest.raises(NotOnVarietyError):
            jacobian_at([x[0]], [1, 0, 0, 0])

    def test_cone_survey_flags_only_vertex(self):
        f = prime_field(11)
        x = xs(f)
        survey = smoothness_survey([x[0] * x[1] - x[2] * x[2]], 1)
        assert survey.singular_points == [(0, 0, 0, 1)]
        assert survey.points_tested == sum(survey.jacobian_ranks.values())

    def test_smooth_quadric_survey(self):
        x = xs(prime_field(7))
        assert smoothness_survey([x[0] * x[3] - x[1] * x[2]], 1).smooth

    def test_small_characteristic_refused(self):
        x = xs(prime_field(3))
        with pytest.raises(ValueError):
            smoothness_survey([x[0] ** 3 + x[1] ** 3 + x[2] ** 3 + x[3] ** 3], 1)

    def test_singular_locus_dimension(self):
        x = xs(GF)
        assert singular_locus_dimension(x[0] * x[3] - x[1] * x[2]) == -1
        assert singular_locus_dimension(x[0] * x[1] - x[2] * x[2]) == 0


class TestSlicing:
    def test_quadric(self):
        x = xs()
        assert line_slice_degree([x[0] * x[3] - x[1] * x[2]], SplitMix64(1)) == 2

    def test_quartic(self):
        ideal = critical_ideal(random_setup(3, (1, 1, 1, 1), GF, SplitMix64(5)))
        assert line_slice_degree(ideal.generators, SplitMix64(5)) == 4

    def test_contained_line_gives_no_gcd(self):
        x = xs(RATIONALS)
        assert restricted_gcd([x[0] * x[3] - x[1] * x[2]], [[1, 0], [0, 1], [0, 0], [0, 0]]) is None

    def test_resampling_cap(self):
        # vanishes at every GF(2)-point, so every sampled base point is rejected
        f = prime_field(2)
        x = variables(f, 2)
        with pytest.raises(NonGenericError):
            line_slice_degree([x[0] * x[0] * x[1] + x[0] * x[1] * x[1]], SplitMix64(0), attempts=8)

    @pytest.mark.parametrize("k,hs", [(3, (2, 2)), (3, (1, 1, 1, 1)), (3, (1, 1, 2))])
    def test_slice_agrees_with_hilbert_degree(self, k, hs):
        gens = critical_ideal(random_setup(k, hs, GF, SplitMix64(33))).generators
        _, deg = dimension_and_degree(measure_hilbert(gens, dim_hint=2), k)
        assert line_slice_degree(gens, SplitMix64(33)) == deg


class TestLinearSpace:
    @given(seed=seeds, c=st.integers(3, 5))
    def test_plucker_identity(self, seed, c):
        rng = SplitMix64(seed)
        mat = linalg.random_matrix(GF, c + 1, 2, rng)
        a, b, j, h = (rng.below(c + 1) for _ in range(4))
        assert plucker_relation(GF, mat, a, b, j, h) == 0

    def test_bordiga_case_refused(self):
        s = random_setup(4, (2, 2, 2), GF, SplitMix64(1))
        report = structure_constraints(reduce_to_n(s), s)
        with pytest.raises(DimensionGuardError):
            singular_linear_space_L(report.matrix, 2)

    def test_points_of_l_are_singular(self):
        s = random_setup(6, (3, 3, 3), GF, SplitMix64(4))
        report = structure_constraints(reduce_to_n(s), s)
        gens = [g for g in maximal_minors(report.matrix) if g]
        space = singular_linear_space_L(report.matrix, 3)
        assert space.projective_dimension == 6 - 3 - 3
        for r in survey_linear_space(report.matrix, 3, gens, 5, SplitMix64(4)):
            assert r.jacobian_rank <= 2 and r.singular

    def test_rank_deficient_submatrix_fallback(self):
        x = variables(GF, 7)
        zero = MultiPoly.zero(GF, 7)
        # L is the point e6; columns 2 and 3 vanish there
        mat = PolyMatrix([
            [x[0], x[1], x[2]],
            [x[1], x[2], x[3]],
            [x[2], x[3], x[0]],
            [x[3], x[0] + x[1], zero],
            [x[6], x[4], x[5]],
        ])
        gens = [g for g in maximal_minors(mat) if g]
        reports = survey_linear_space(mat, 3, gens, 3, SplitMix64(0))
        assert all(r.submatrix_rank < 2 and r.singular for r in reports)

    def test_dependent_conditions(self):
        x = variables(GF, 7)
        mat = PolyMatrix([[x[0], x[1], x[2]], [x[0], x[2], x[3]], [x[2], x[3], x[0]], [x[3], x[0], x[1]], [x[6], x[4], x[5]]])
        with pytest.raises(NonGenericError):
            singular_linear_space_L(mat, 3)
