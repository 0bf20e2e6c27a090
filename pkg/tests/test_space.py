import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scenrisk import (
    DimensionError,
    Distribution,
    DomainError,
    FiniteProbSpace,
    Position,
    ValidationError,
    cdf,
    distribution_of,
    expectation,
    lower_quantile,
    upper_quantile,
)

from strategies import levels, prob_spaces, space_with_positions

UNIFORM4 = FiniteProbSpace.uniform(4)
X4 = np.array([-2.0, -1.0, 0.0, 3.0])


class TestTypes:
    def test_space_requires_positive_probs(self):
        with pytest.raises(ValidationError):
            FiniteProbSpace([0.5, 0.5, 0.0])

    def test_space_requires_unit_mass(self):
        with pytest.raises(ValidationError):
            FiniteProbSpace([0.5, 0.4])

    def test_space_requires_atoms(self):
        with pytest.raises(ValidationError):
            FiniteProbSpace([])

    def test_position_rejects_non_finite(self):
        with pytest.raises(ValidationError):
            Position([1.0, np.inf])

    def test_distribution_requires_increasing_outcomes(self):
        with pytest.raises(ValidationError):
            Distribution([1.0, 1.0], [0.5, 0.5])

    def test_immutable_arrays(self):
        with pytest.raises(ValueError):
            UNIFORM4.probs[0] = 0.3


class TestDistributionOf:
    def test_identity_on_distinct_outcomes(self):
        d = distribution_of(UNIFORM4, X4)
        assert d.points == ((-2.0, 0.25), (-1.0, 0.25), (0.0, 0.25), (3.0, 0.25))

    def test_merges_duplicates(self):
        d = distribution_of(FiniteProbSpace([0.5, 0.5]), [1.0, 1.0])
        assert d.points == ((1.0, 1.0),)

    def test_sorts_outcomes(self):
        d = distribution_of(FiniteProbSpace([0.2, 0.8]), [5.0, -5.0])
        assert d.points == ((-5.0, 0.8), (5.0, 0.2))

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            distribution_of(UNIFORM4, [1.0, 2.0])

    @given(space_with_positions(max_atoms=8), st.randoms(use_true_random=False))
    def test_permutation_invariance(self, sp, rnd):
        space, x = sp
        perm = list(range(space.n_atoms))
        rnd.shuffle(perm)
        permuted_space = FiniteProbSpace(space.probs[perm])
        d1 = distribution_of(space, x)
        d2 = distribution_of(permuted_space, x[perm])
        assert d1.points == d2.points


class TestCdf:
    def test_midpoint_value(self):
        d = distribution_of(UNIFORM4, X4)
        assert cdf(d, -1.0) == 0.5

    def test_below_support(self):
        d = distribution_of(UNIFORM4, X4)
        assert cdf(d, -2.5) == 0.0

    def test_at_and_past_max(self):
        d = distribution_of(UNIFORM4, X4)
        assert cdf(d, 3.0) == 1.0
        assert cdf(d, 100.0) == 1.0


class TestQuantiles:
    def test_upper_quantile_examples(self):
        d = distribution_of(UNIFORM4, X4)
        assert upper_quantile(d, 0.3) == -1.0
        assert upper_quantile(d, 0.25) == -1.0  # strict inequality at breakpoint
        assert upper_quantile(d, 1.0) == 3.0

    def test_lower_quantile_examples(self):
        d = distribution_of(UNIFORM4, X4)
        assert lower_quantile(d, 0.25) == -2.0
        assert lower_quantile(d, 0.3) == -1.0

    def test_point_mass(self):
        d = Distribution.point_mass(7.5)
        for a in (0.01, 0.25, 0.5, 1.0):
            assert upper_quantile(d, a) == 7.5
            assert lower_quantile(d, a) == 7.5

    @pytest.mark.parametrize("bad", [0.0, -0.1, 1.5, float("nan")])
    def test_level_domain(self, bad):
        d = distribution_of(UNIFORM4, X4)
        with pytest.raises(DomainError):
            upper_quantile(d, bad)
        with pytest.raises(DomainError):
            lower_quantile(d, bad)

    @given(space_with_positions(), levels)
    def test_lower_at_most_upper(self, sp, level):
        space, x = sp
        d = distribution_of(space, x)
        assert lower_quantile(d, level) <= upper_quantile(d, level)

    @given(space_with_positions(), levels, levels)
    def test_upper_quantile_nondecreasing(self, sp, a, b):
        space, x = sp
        d = distribution_of(space, x)
        lo, hi = min(a, b), max(a, b)
        assert upper_quantile(d, lo) <= upper_quantile(d, hi)

    @given(space_with_positions())
    def test_upper_quantile_steps_only_at_cumulative_masses(self, sp):
        space, x = sp
        d = distribution_of(space, x)
        cums = d.cum_probs.tolist()
        grid = [0.0] + [c for c in cums if c < 1.0] + [1.0]
        for lo, hi in zip(grid, grid[1:]):
            a = lo + 0.25 * (hi - lo)
            b = lo + 0.75 * (hi - lo)
            if 0.0 < a and b <= 1.0 and a < b:
                assert upper_quantile(d, a) == upper_quantile(d, b)

    @given(space_with_positions(), levels)
    def test_cdf_exceeds_level_at_upper_quantile(self, sp, level):
        space, x = sp
        d = distribution_of(space, x)
        if level < 1.0:
            assert cdf(d, upper_quantile(d, level)) > level


class TestExpectation:
    def test_uniform_mean(self):
        assert expectation(UNIFORM4, X4) == 0.0

    def test_unit_weights_are_identity(self):
        assert expectation(UNIFORM4, X4, np.ones(4)) == expectation(UNIFORM4, X4)

    @given(prob_spaces())
    def test_constant_position_with_any_density(self, space):
        rng = np.random.default_rng(0)
        y = rng.random(space.n_atoms) + 0.1
        y = y / float(space.probs @ y)
        assert expectation(space, np.ones(space.n_atoms), y) == pytest.approx(1.0, abs=1e-12)
