import numpy as np
import pytest

from spaaa.helper.ext_utils.exceptions import (
    NumericalError,
    StagnationError,
    InvalidArgumentError,
)
from spaaa.helper.approx_utils import paaa
from spaaa.helper.approx_utils.lsq import SampleSet
from spaaa.helper.approx_utils.paaa import (
    FitMode,
    FitConfig,
    InterpUpdate,
    fit,
    fit_grid,
    greedy_argmax,
    fit_scattered,
)
from spaaa.helper.approx_utils.datagen import (
    peaks,
    rng_for,
    gen_peaks_grid,
    gen_peaks_with_gaps,
    gen_rational_fixture,
)
from spaaa.helper.approx_utils.barycentric import (
    NodeAxes,
    BarycentricModel,
    eval_batch,
    numer_denom_batch,
)
from spaaa.helper.listeners.fit_listener import FitListener


def heldout_error(model, truth, d, seed, count=50):
    points = rng_for(seed).uniform(-1, 1, size=(4 * count, d))
    _, t_denom = numer_denom_batch(truth, points)
    points = points[np.abs(t_denom) >= 1e-3][:count]
    expected = eval_batch(truth, points).values
    got = eval_batch(model, points).values
    return np.max(np.abs(got - expected)) / np.max(np.abs(expected))


def assert_interpolates(model, report, samples):
    for point in report.interp_points:
        numer, denom = numer_denom_batch(model, [point])
        if denom[0] == 0:
            continue
        expected = samples.lookup([point])[0]
        assert abs(numer[0] / denom[0] - expected) <= 1e-11 * max(abs(expected), 1e-300)


class TestFitConfig:
    def test_defaults(self):
        config = FitConfig()
        assert config.tol == 1e-8
        assert config.max_iter == 100
        assert config.interp_update == InterpUpdate.ALL
        assert config.mode == FitMode.AUTO

    def test_strings_become_enums(self):
        config = FitConfig(interp_update="greedy", mode="grid")
        assert config.interp_update is InterpUpdate.GREEDY
        assert config.mode is FitMode.GRID

    @pytest.mark.parametrize(
        "kwargs",
        [{"tol": 0}, {"tol": -1}, {"max_iter": 0}, {"max_iter": 2.5}, {"mode": "fast"}],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(InvalidArgumentError):
            FitConfig(**kwargs)

    def test_from_config_overrides(self):
        config = FitConfig.from_config(tol=1e-3, max_iter=None)
        assert config.tol == 1e-3
        assert config.max_iter >= 1


class TestGreedyArgmax:
    def test_mean_model(self):
        samples = SampleSet([(0, 0), (1, 0), (2, 0)], [1, 5, 3])
        model = BarycentricModel.constant(np.mean(samples.values), 2)
        point, error = greedy_argmax(samples, model)
        assert point == (0, 0)
        assert error == 2

    def test_equal_values_pick_lowest_index(self):
        samples = SampleSet([(3, 1), (1, 2), (2, 0)], [4, 4, 4])
        point, error = greedy_argmax(samples, BarycentricModel.constant(4, 2))
        assert point == (3, 1)
        assert error == 0

    def test_pole_at_sample_is_selected(self, caplog):
        model = BarycentricModel(NodeAxes(([0.0, 1.0],)), [1, 1], [1, 2])
        samples = SampleSet([[0.25], [0.5], [2.0]], [0, 0, 0])
        point, error = greedy_argmax(samples, model)
        assert point == (0.5,)
        assert error == np.inf
        assert "singular" in caplog.text


class TestFitScattered:
    def test_single_sample(self):
        samples = SampleSet([(0.5, -0.5)], [2 - 1j])
        model, report = fit_scattered(samples, FitConfig())
        assert report.iterations == 1
        assert report.status == "converged"
        assert eval_batch(model, [(3, 4)]).values[0] == pytest.approx(2 - 1j)

    def test_constant_data(self):
        samples = gen_peaks_grid(5).subset(range(20))
        samples = SampleSet(samples.points, np.full(20, 1.5))
        model, report = fit_scattered(samples, FitConfig())
        assert report.iterations == 1
        assert report.final_error <= 1e-15

    def test_exact_recovery_bivariate(self):
        samples, truth = gen_rational_fixture((2, 2), 50, seed=3)
        model, report = fit_scattered(samples, FitConfig(tol=1e-10))
        assert report.status == "converged"
        assert report.iterations <= 4
        assert report.final_error <= 1e-10
        assert heldout_error(model, truth, 2, seed=4) <= 1e-8

    def test_exact_recovery_low_order(self):
        samples, truth = gen_rational_fixture((1, 1), 20, seed=11)
        model, report = fit_scattered(samples, FitConfig(tol=1e-10))
        assert report.status == "converged"
        assert heldout_error(model, truth, 2, seed=12) <= 1e-9

    @pytest.mark.parametrize(
        ("orders", "K"), [((2, 2), 100), ((2, 2, 2), 200)]
    )
    def test_exact_recovery_multivariate(self, orders, K):
        samples, truth = gen_rational_fixture(orders, K, seed=5)
        model, report = fit_scattered(samples, FitConfig(tol=1e-10))
        assert report.status == "converged"
        assert model.d == len(orders)
        assert heldout_error(model, truth, len(orders), seed=6) <= 1e-8

    @pytest.mark.parametrize("max_iter", [1, 2, 3, 4])
    def test_interpolation_after_every_iteration(self, max_iter):
        samples = gen_peaks_grid(12).subset(range(0, 144, 2))
        model, report = fit_scattered(samples, FitConfig(tol=1e-12, max_iter=max_iter))
        assert report.iterations == max_iter
        assert report.status == "max_iter"
        assert_interpolates(model, report, samples)

    def test_node_growth_and_history(self):
        samples = gen_peaks_grid(10).subset(range(0, 100, 3))
        _, report = fit_scattered(samples, FitConfig(tol=1e-14, max_iter=6))
        counts = [record.node_counts for record in report.history]
        for before, after in zip(counts, counts[1:]):
            assert all(b <= a for b, a in zip(before, after))
        n_interp = [record.n_interp for record in report.history]
        assert all(b < a for b, a in zip(n_interp, n_interp[1:]))
        assert report.final_error == report.history[-1].rel_error
        assert len(report.history) == report.iterations

    def test_greedy_point_only(self):
        samples = gen_peaks_grid(8)
        _, report = fit_scattered(
            samples, FitConfig(tol=1e-14, max_iter=5, interp_update="greedy")
        )
        assert [record.n_interp for record in report.history] == [1, 2, 3, 4, 5]

    def test_exhausted(self):
        samples = SampleSet([(0, 0), (1, 1)], [1, 2])
        _, report = fit_scattered(samples, FitConfig(tol=1e-300))
        assert report.status in {"exhausted", "converged"}
        assert report.interp_count == 2

    def test_stagnation_carries_report(self, monkeypatch):
        samples = gen_peaks_grid(6)

        def no_progress(samples, model, interp_idx=()):
            errors = np.zeros(samples.K)
            errors[0] = 1.0
            return errors, np.array([], dtype=np.intp)

        monkeypatch.setattr(paaa, "_sample_errors", no_progress)
        listener = FitListener()
        with pytest.raises(StagnationError) as e:
            fit_scattered(samples, FitConfig(tol=1e-8), listener)
        assert e.value.report.status == "stagnated"
        assert e.value.report.iterations == 1
        assert e.value.model is not None
        assert listener.error is e.value

    def test_solver_failure_reaches_listener(self, monkeypatch):
        def failing_solve(*args, **kwargs):
            raise NumericalError("SVD did not converge")

        monkeypatch.setattr(paaa, "solve_constrained", failing_solve)
        listener = FitListener()
        with pytest.raises(NumericalError) as e:
            fit_scattered(gen_peaks_grid(5), FitConfig(), listener)
        assert listener.error is e.value
        assert listener.records == []

    def test_first_point_is_greedy_argmax(self):
        samples = gen_peaks_grid(8).subset(range(0, 64, 3))
        start = BarycentricModel.constant(np.mean(samples.values), 2)
        point, _ = greedy_argmax(samples, start)
        _, report = fit_scattered(samples, FitConfig(max_iter=1, tol=1e-14))
        assert report.history[0].point == point

    def test_listener_receives_every_iteration(self):
        samples = gen_peaks_grid(8)
        listener = FitListener()
        model, report = fit_scattered(samples, FitConfig(max_iter=3, tol=1e-14), listener)
        assert [r.iteration for r in listener.records] == [1, 2, 3]
        assert listener.report is report
        assert listener.model is model


class TestFitGrid:
    def test_rejects_scattered_data(self, worked_samples):
        with pytest.raises(InvalidArgumentError, match="lattice"):
            fit_grid(worked_samples, FitConfig())

    def test_constant_grid(self):
        grid = gen_peaks_grid(4)
        grid = SampleSet(grid.points, np.full(grid.K, -2.0))
        _, report = fit_grid(grid, FitConfig())
        assert report.iterations == 1
        assert report.final_error <= 1e-15

    def test_matches_scattered_path(self):
        for seed in range(10):
            rng = rng_for(seed)
            xs = np.sort(rng.uniform(-3, 3, 9))
            ys = np.sort(rng.uniform(-3, 3, 8))
            points = np.array([(x, y) for x in xs for y in ys])
            samples = SampleSet(points, peaks(points[:, 0], points[:, 1]))
            config = FitConfig(tol=1e-12, max_iter=5)
            _, grid_report = fit_grid(samples, config)
            _, scattered_report = fit_scattered(samples, config)
            assert grid_report.iterations == scattered_report.iterations
            for g, s in zip(grid_report.history, scattered_report.history):
                assert g.point == s.point
                assert g.node_counts == s.node_counts
                assert g.n_interp == s.n_interp
                assert g.rel_error == pytest.approx(s.rel_error, rel=1e-8, abs=1e-14)

    def test_auto_mode_dispatch(self, worked_samples):
        _, report = fit(gen_peaks_grid(6), FitConfig(max_iter=2, tol=1e-14))
        assert report.mode == "grid"
        _, report = fit(worked_samples, FitConfig(max_iter=2, tol=1e-14))
        assert report.mode == "scattered"


@pytest.mark.slow
class TestPeaks:
    def test_grid_reproduction(self):
        model, report = fit_grid(gen_peaks_grid(40, (-3, 3)), FitConfig(tol=1e-8))
        assert report.status == "converged"
        assert report.final_error <= 1e-8
        assert report.iterations <= 30
        assert all(15 <= n <= 19 for n in model.dims)

    def test_gaps_reproduction(self):
        train, heldout = gen_peaks_with_gaps(40, (-3, 3))
        model, report = fit_scattered(train, FitConfig(tol=1e-8))
        assert report.status == "converged"
        assert report.final_error <= 1e-8
        interp = np.array(report.interp_points)
        assert interp.shape[0] < model.nodes.size
        held = {tuple(p) for p in heldout.points.tolist()}
        assert not any(tuple(p) in held for p in interp.tolist())
        grid = gen_peaks_grid(40, (-3, 3))
        values = eval_batch(model, grid.points).values
        rel = np.max(np.abs(values - grid.values)) / np.max(np.abs(grid.values))
        assert rel <= 1e-3
