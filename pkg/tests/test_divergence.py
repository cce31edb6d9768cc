import math

import numpy as np
import pytest

from esjs import (
    SortedSample,
    empirical_survival,
    esjs,
    esjs_distance,
    esjs_factor,
    esjs_spacings,
    survival_entropy,
)

from conftest import random_sample, segment_esjs_oracle


def _pair(rng):
    return (
        empirical_survival(random_sample(rng)),
        empirical_survival(random_sample(rng)),
    )


class TestEsjs:
    def test_identity_is_exactly_zero(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            surv = empirical_survival(random_sample(rng))
            assert esjs(surv, surv) == 0.0

    def test_interleaved_two_point_samples(self):
        # oracle: explicit evaluation over the segments [0,1), [1,2), [2,3)
        p = empirical_survival(SortedSample.from_data([0.0, 2.0]))
        q = empirical_survival(SortedSample.from_data([1.0, 3.0]))
        expected = (
            0.5 * (0.5 * math.log(0.5 / 0.75) + 1.0 * math.log(1.0 / 0.75))
            + 0.0
            + 0.5 * 0.5 * math.log(0.5 / 0.25)
        )
        assert esjs(p, q) == pytest.approx(expected, abs=1e-15)
        assert esjs(p, q) == pytest.approx(segment_esjs_oracle(p, q), abs=1e-15)

    def test_matches_segment_oracle(self):
        rng = np.random.default_rng(7)
        for _ in range(60):
            p, q = _pair(rng)
            got = esjs(p, q)
            assert got == pytest.approx(segment_esjs_oracle(p, q), rel=1e-12, abs=1e-14)

    def test_symmetric_bitwise_and_nonnegative(self):
        rng = np.random.default_rng(11)
        for _ in range(60):
            p, q = _pair(rng)
            forward = esjs(p, q)
            assert forward == esjs(q, p)
            assert forward >= 0.0

    def test_positive_when_different(self):
        p = empirical_survival(SortedSample.from_data([0.0, 1.0]))
        q = empirical_survival(SortedSample.from_data([0.5, 1.5]))
        assert esjs(p, q) > 0.0


class TestEsjsSpacings:
    def test_identical_samples_zero(self):
        sample = SortedSample.from_data([0.3, 1.2, 4.0])
        assert esjs_spacings(sample, sample) == 0.0

    def test_entropy_identity_is_exact(self):
        rng = np.random.default_rng(13)
        for _ in range(100):
            n = int(rng.integers(2, 150))
            p = random_sample(rng, n_min=n, n_max=n)
            q = random_sample(rng, n_min=n, n_max=n)
            pooled = SortedSample(np.sort(np.concatenate([p.values, q.values])))
            identity = (
                survival_entropy(pooled)
                - 0.5 * survival_entropy(p)
                - 0.5 * survival_entropy(q)
            )
            assert esjs_spacings(p, q) == identity

    def test_agrees_with_exact_integration(self):
        p = SortedSample.from_data([0.0, 2.0])
        q = SortedSample.from_data([1.0, 3.0])
        integral = esjs(empirical_survival(p), empirical_survival(q))
        assert esjs_spacings(p, q) == pytest.approx(integral, abs=1e-12)

    def test_unequal_sizes_rejected(self):
        p = SortedSample.from_data([1, 2, 3])
        q = SortedSample.from_data([1, 2])
        with pytest.raises(ValueError, match="equal sizes; use esjs"):
            esjs_spacings(p, q)

    def test_needs_two_points(self):
        single = SortedSample.from_data([1.0])
        with pytest.raises(ValueError):
            esjs_spacings(single, single)


class TestEsjsDistance:
    def test_identity(self):
        surv = empirical_survival(SortedSample.from_data([1, 2, 3]))
        assert esjs_distance(surv, surv) == 0.0

    def test_square_root_relationship(self):
        rng = np.random.default_rng(19)
        for _ in range(20):
            p, q = _pair(rng)
            assert esjs_distance(p, q) == pytest.approx(math.sqrt(esjs(p, q)), rel=1e-15)
        assert math.sqrt(0.04) == pytest.approx(0.2)

    def test_triangle_inequality(self):
        rng = np.random.default_rng(31)
        for _ in range(200):
            p = empirical_survival(random_sample(rng))
            q = empirical_survival(random_sample(rng))
            r = empirical_survival(random_sample(rng))
            assert esjs_distance(p, r) <= esjs_distance(p, q) + esjs_distance(q, r) + 1e-12


class TestEsjsFactor:
    def test_equal_scores(self):
        factor = esjs_factor(0.25, 0.25)
        assert factor.ratio == 1.0
        assert factor.numerator_esjs == factor.denominator_esjs == 0.25

    def test_ratio_arithmetic(self):
        factor = esjs_factor(0.1947, 0.0002)
        assert factor.ratio == pytest.approx(973.5)

    def test_degenerate_champion(self):
        with pytest.raises(ValueError, match="degenerate perfect fit"):
            esjs_factor(0.1, 0.0)

    def test_negative_scores_rejected(self):
        with pytest.raises(ValueError):
            esjs_factor(-0.1, 0.2)


class TestAffineBehaviour:
    def test_scale_equivariance(self):
        rng = np.random.default_rng(37)
        for _ in range(25):
            p_sample = random_sample(rng)
            q_sample = random_sample(rng)
            base = esjs(empirical_survival(p_sample), empirical_survival(q_sample))
            for c in (0.5, 2.0, 10.0):
                scaled = esjs(
                    empirical_survival(SortedSample(p_sample.values * c)),
                    empirical_survival(SortedSample(q_sample.values * c)),
                )
                assert scaled == pytest.approx(c * base, rel=1e-12)

    def test_shift_invariance(self):
        rng = np.random.default_rng(41)
        for _ in range(25):
            p_sample = random_sample(rng)
            q_sample = random_sample(rng)
            base = esjs(empirical_survival(p_sample), empirical_survival(q_sample))
            shifted = esjs(
                empirical_survival(SortedSample(p_sample.values + 7.5)),
                empirical_survival(SortedSample(q_sample.values + 7.5)),
            )
            assert shifted == pytest.approx(base, rel=1e-9, abs=1e-13)
