import math

import numpy as np
import numpy.testing as nptest
import pytest

from spaaa.helper.ext_utils.exceptions import GenerationError, InvalidArgumentError
from spaaa.helper.approx_utils import datagen
from spaaa.helper.approx_utils.datagen import (
    GapSpec,
    peaks,
    drop_random,
    gen_peaks_grid,
    removed_fraction,
    gen_peaks_scattered,
    gen_peaks_with_gaps,
    gen_rational_fixture,
)
from spaaa.helper.approx_utils.barycentric import numer_denom_batch


def peaks_by_terms(x, y):
    third = -math.exp(-((x + 1) ** 2) - y * y) / 3
    second = -10 * (x / 5 - x**3 - y**5) * math.exp(-x * x - y * y)
    first = 3 * (1 - x) ** 2 * math.exp(-x * x - (y + 1) ** 2)
    return third + second + first


class TestPeaks:
    def test_origin(self):
        assert peaks(0, 0) == pytest.approx(8 / 3 * math.exp(-1), rel=1e-15)

    def test_matches_independent_evaluation(self):
        grid = gen_peaks_grid(17)
        for point, value in zip(grid.points[::7], grid.values[::7]):
            x, y = point.real
            expected = peaks_by_terms(x, y)
            assert value.real == pytest.approx(expected, rel=1e-15, abs=1e-13)

    def test_two_point_grid(self):
        grid = gen_peaks_grid(2, (-3, 3))
        nptest.assert_array_equal(grid.points.real, [[-3, -3], [-3, 3], [3, -3], [3, 3]])
        assert grid.is_lattice

    def test_forty_point_grid(self):
        assert gen_peaks_grid(40).K == 1600

    @pytest.mark.parametrize("n", [1, 0, 2.5])
    def test_invalid_size(self, n):
        with pytest.raises(InvalidArgumentError):
            gen_peaks_grid(n)


class TestGaps:
    def test_default_fraction(self):
        train, heldout = gen_peaks_with_gaps(40, (-3, 3))
        assert 0.20 <= removed_fraction(train, heldout) <= 0.25

    def test_partition(self):
        train, heldout = gen_peaks_with_gaps(20, (-3, 3))
        full = {tuple(p) for p in gen_peaks_grid(20).points.tolist()}
        train_set = {tuple(p) for p in train.points.tolist()}
        held_set = {tuple(p) for p in heldout.points.tolist()}
        assert train_set.isdisjoint(held_set)
        assert train_set | held_set == full

    def test_zero_radius_removes_nothing(self):
        gaps = GapSpec(((0.0, 0.0),), (0.0,))
        train, heldout = gen_peaks_with_gaps(10, (-3, 3), gaps)
        assert heldout is None
        assert train.K == 100

    def test_removing_everything(self):
        with pytest.raises(InvalidArgumentError):
            gen_peaks_with_gaps(10, (-3, 3), GapSpec(((0.0, 0.0),), (100.0,)))

    def test_fraction_outside_band_warns(self, caplog):
        train, heldout = gen_peaks_with_gaps(40, (-3, 3), GapSpec(((0.0, 0.0),), (1.0,)))
        lo, _ = datagen.GAP_FRACTION_BAND
        assert 0 < removed_fraction(train, heldout) < lo
        assert "target band" in caplog.text

    def test_default_fraction_is_quiet(self, caplog):
        gen_peaks_with_gaps(40, (-3, 3))
        assert "lies outside" not in caplog.text

    def test_invalid_gap_spec(self):
        with pytest.raises(InvalidArgumentError):
            GapSpec(((0.0, 0.0),), (-1.0,))
        with pytest.raises(InvalidArgumentError):
            GapSpec(((0.0, 0.0), (1.0, 1.0)), (1.0,))


class TestScattered:
    def test_deterministic(self):
        first = gen_peaks_scattered(30, seed=7)
        second = gen_peaks_scattered(30, seed=7)
        nptest.assert_array_equal(first.points, second.points)
        nptest.assert_array_equal(first.values, second.values)
        assert not np.array_equal(first.points, gen_peaks_scattered(30, seed=8).points)

    def test_drop_random(self):
        samples = gen_peaks_scattered(40, seed=1)
        kept, removed = drop_random(samples, 0.25, seed=2)
        assert (kept.K, removed.K) == (30, 10)
        assert {tuple(p) for p in kept.points.tolist()}.isdisjoint(
            {tuple(p) for p in removed.points.tolist()}
        )
        kept_again, _ = drop_random(samples, 0.25, seed=2)
        nptest.assert_array_equal(kept.points, kept_again.points)

    def test_drop_nothing(self):
        kept, removed = drop_random(gen_peaks_scattered(5), 0.0)
        assert kept.K == 5
        assert removed is None


class TestRationalFixture:
    def test_deterministic(self):
        first, truth = gen_rational_fixture((1, 2), 40, seed=9)
        second, _ = gen_rational_fixture((1, 2), 40, seed=9)
        nptest.assert_array_equal(first.points, second.points)
        nptest.assert_array_equal(first.values, second.values)
        assert truth.dims == (2, 3)

    def test_denominator_bounded_away_from_zero(self):
        samples, truth = gen_rational_fixture((2, 2, 2), 200, seed=5)
        _, denom = numer_denom_batch(truth, samples.points)
        assert np.min(np.abs(denom)) >= datagen.DENOM_FLOOR
        assert samples.d == 3

    def test_too_few_samples(self):
        with pytest.raises(InvalidArgumentError):
            gen_rational_fixture((2, 2), 17)

    def test_rejection_limit(self, monkeypatch):
        monkeypatch.setattr(datagen, "DENOM_FLOOR", np.inf)
        with pytest.raises(GenerationError):
            gen_rational_fixture((1, 1), 8, seed=0)
