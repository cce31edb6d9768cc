import math

import numpy as np
import pytest

from esjs import (
    DEFAULT_BINS,
    Family,
    ParametricModel,
    SortedSample,
    StepSurvival,
    empirical_survival,
    km_binned_survival,
    mixture_survival,
    sample_from,
    survival_entropy,
)

from conftest import random_sample, step_integral_of_neg_slogs


class TestSortedSample:
    def test_rejects_empty(self):
        with pytest.raises(ValueError, match="empty sample"):
            SortedSample(np.array([]))
        with pytest.raises(ValueError, match="empty sample"):
            SortedSample.from_data([])

    def test_rejects_unsorted_and_nonfinite(self):
        with pytest.raises(ValueError):
            SortedSample([2.0, 1.0])
        with pytest.raises(ValueError):
            SortedSample([1.0, np.nan])

    def test_from_data_sorts(self):
        s = SortedSample.from_data([3, 1, 2])
        assert list(s.values) == [1.0, 2.0, 3.0]
        assert (s.n, s.min, s.max) == (3, 1.0, 3.0)

    def test_values_are_immutable(self):
        s = SortedSample.from_data([1, 2])
        with pytest.raises(ValueError):
            s.values[0] = 5.0


class TestEmpiricalSurvival:
    def test_basic_steps(self):
        surv = empirical_survival(SortedSample.from_data([1, 2, 3]))
        assert surv(0.5) == 1.0
        assert surv(1.0) == pytest.approx(2 / 3)
        assert surv(1.5) == pytest.approx(2 / 3)
        assert surv(2.0) == pytest.approx(1 / 3)
        assert surv(3.0) == 0.0
        assert surv(99.0) == 0.0

    def test_ties_drop_jointly(self):
        surv = empirical_survival(SortedSample.from_data([1, 1, 2]))
        assert list(surv.breakpoints) == [1.0, 2.0]
        assert surv(1.0) == pytest.approx(1 / 3)
        assert surv(2.0) == 0.0

    def test_single_observation(self):
        surv = empirical_survival(SortedSample.from_data([5.0]))
        assert surv(4.9) == 1.0
        assert surv(5.0) == 0.0

    def test_glivenko_cantelli_at_zero(self):
        # oracle: the standard normal survival at 0 is exactly 1/2
        sample = sample_from(ParametricModel(Family.NORMAL, (0, 1)), 100_000, 11)
        surv = empirical_survival(sample)
        assert abs(surv(0.0) - 0.5) < 0.01

    def test_complements_the_ecdf(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            sample = random_sample(rng)
            surv = empirical_survival(sample)
            for x in rng.uniform(sample.min - 1, sample.max + 1, 5):
                below = np.count_nonzero(sample.values <= x) / sample.n
                assert surv(x) + below == pytest.approx(1.0, abs=1e-12)


class TestKmBinnedSurvival:
    def test_grid_aligned_with_jumps_matches_empirical(self):
        sample = SortedSample.from_data([1, 2, 3])
        binned = km_binned_survival(sample, bins=2, bounds=(1.0, 3.0))
        exact = empirical_survival(sample)
        for edge in binned.breakpoints:
            assert binned(edge) == exact(edge)

    def test_two_point_sample_on_grid(self):
        # hand evaluation of the survival on edges 1..10
        sample = SortedSample.from_data([0.0, 10.0])
        binned = km_binned_survival(sample, bins=10, bounds=(0.0, 10.0))
        assert list(binned.breakpoints) == [float(k) for k in range(1, 11)]
        assert list(binned.values[:-1]) == [0.5] * 9
        assert binned.values[-1] == 0.0

    def test_default_bin_count(self):
        assert DEFAULT_BINS == 10**6
        import inspect

        sig = inspect.signature(km_binned_survival)
        assert sig.parameters["bins"].default == 10**6

    def test_invalid_inputs(self):
        sample = SortedSample.from_data([1, 2])
        with pytest.raises(ValueError):
            km_binned_survival(sample, bins=0)
        with pytest.raises(ValueError):
            km_binned_survival(sample, bins=4, bounds=(3.0, 3.0))


class TestMixtureSurvival:
    def test_idempotent(self):
        surv = empirical_survival(SortedSample.from_data([1, 2, 5]))
        mix = mixture_survival(surv, surv)
        grid = np.linspace(0, 6, 23)
        np.testing.assert_allclose(mix(grid), surv(grid))

    def test_two_singletons(self):
        p = empirical_survival(SortedSample.from_data([1.0]))
        q = empirical_survival(SortedSample.from_data([3.0]))
        mix = mixture_survival(p, q)
        assert mix(2.0) == 0.5

    def test_unequal_sizes(self):
        p = empirical_survival(SortedSample.from_data([1.0, 2.0]))
        q = empirical_survival(SortedSample.from_data([1.5]))
        mix = mixture_survival(p, q)
        assert list(mix.breakpoints) == [1.0, 1.5, 2.0]
        assert list(mix.values) == [0.75, 0.25, 0.0]

    def test_symmetric_and_bounded(self):
        rng = np.random.default_rng(17)
        for _ in range(25):
            p = empirical_survival(random_sample(rng))
            q = empirical_survival(random_sample(rng))
            ab = mixture_survival(p, q)
            ba = mixture_survival(q, p)
            grid = np.union1d(ab.breakpoints, ba.breakpoints)
            np.testing.assert_array_equal(ab(grid), ba(grid))
            lo = np.minimum(p(grid), q(grid))
            hi = np.maximum(p(grid), q(grid))
            assert np.all(ab(grid) >= lo) and np.all(ab(grid) <= hi)


class TestSurvivalEntropy:
    def test_two_point_sample(self):
        # oracle: quadrature over [0,1] where the survival is constant 1/2
        expected = 0.5 * math.log(2.0)
        assert survival_entropy(SortedSample.from_data([0, 1])) == pytest.approx(
            expected, abs=1e-15
        )
        assert expected == pytest.approx(0.34657, abs=1e-5)

    def test_singleton_is_zero(self):
        assert survival_entropy(SortedSample.from_data([5.0])) == 0.0
        assert survival_entropy(SortedSample.from_data([2.0, 2.0, 2.0])) == 0.0

    def test_three_point_sample(self):
        expected = -((2 / 3) * math.log(2 / 3) + (1 / 3) * math.log(1 / 3))
        got = survival_entropy(SortedSample.from_data([0, 1, 2]))
        assert got == pytest.approx(expected, abs=1e-15)
        assert got == pytest.approx(0.63651, abs=1e-5)

    def test_matches_exact_piecewise_integration(self):
        rng = np.random.default_rng(23)
        for _ in range(300):
            sample = random_sample(rng, n_min=2, n_max=500)
            direct = survival_entropy(sample)
            oracle = step_integral_of_neg_slogs(empirical_survival(sample))
            assert direct == pytest.approx(oracle, rel=1e-10, abs=1e-13)
            assert direct >= 0.0

    def test_shift_invariant_and_positively_homogeneous(self):
        rng = np.random.default_rng(29)
        for _ in range(40):
            sample = random_sample(rng)
            base = survival_entropy(sample)
            shifted = survival_entropy(SortedSample(sample.values + 7.25))
            scaled = survival_entropy(SortedSample(sample.values * 3.0))
            assert shifted == pytest.approx(base, rel=1e-9, abs=1e-12)
            assert scaled == pytest.approx(3.0 * base, rel=1e-12)


class TestStepSurvivalValidation:
    def test_rejects_bad_shapes(self):
        with pytest.raises(ValueError):
            StepSurvival(np.array([1.0, 1.0]), np.array([0.5, 0.0]))
        with pytest.raises(ValueError):
            StepSurvival(np.array([1.0, 2.0]), np.array([0.2, 0.5]))
        with pytest.raises(ValueError):
            StepSurvival(np.array([1.0]), np.array([1.5]))
