"""Greedy parametric AAA drivers for grid and scattered data.

Both drivers start from the constant ``mean(f)`` and repeat: pick the sample
of largest error, add its coordinates to the node axes, grow the
interpolation set, solve the linearized least-squares problem and measure
the relative max error over the training samples.
"""

from enum import Enum
from time import time
from dataclasses import field, asdict, dataclass

import numpy as np

from spaaa import LOGGER, config_dict
from spaaa.helper.ext_utils.exceptions import StagnationError, InvalidArgumentError
from spaaa.helper.ext_utils.num_utils import (
    format_point,
    format_metric,
    iteration_line,
    get_readable_time,
)
from spaaa.helper.approx_utils.lsq import solve_grid_interp, solve_constrained
from spaaa.helper.approx_utils.selection import InterpSet
from spaaa.helper.approx_utils.barycentric import (
    NodeAxes,
    BarycentricModel,
    numer_denom_batch,
)

STAGNATION_TOL = 1e-15


class InterpUpdate(str, Enum):
    ALL = "all"
    GREEDY = "greedy"


class FitMode(str, Enum):
    AUTO = "auto"
    GRID = "grid"
    SCATTERED = "scattered"


@dataclass(frozen=True)
class FitConfig:
    tol: float = 1e-8
    max_iter: int = 100
    interp_update: InterpUpdate = InterpUpdate.ALL
    mode: FitMode = FitMode.AUTO

    def __post_init__(self):
        try:
            object.__setattr__(self, "interp_update", InterpUpdate(self.interp_update))
            object.__setattr__(self, "mode", FitMode(self.mode))
        except ValueError as e:
            raise InvalidArgumentError(str(e)) from e
        if isinstance(self.max_iter, bool) or not isinstance(self.max_iter, int | np.integer):
            raise InvalidArgumentError(f"max_iter must be an integer, got {self.max_iter!r}")
        if self.max_iter < 1:
            raise InvalidArgumentError(f"max_iter must be >= 1, got {self.max_iter}")
        if not (np.isfinite(self.tol) and self.tol > 0):
            raise InvalidArgumentError(f"tol must be a positive number, got {self.tol}")

    @classmethod
    def from_config(cls, **overrides):
        values = {
            "tol": config_dict["PAAA_TOL"],
            "max_iter": config_dict["PAAA_MAX_ITER"],
            "interp_update": config_dict["PAAA_INTERP_UPDATE"],
            "mode": config_dict["PAAA_MODE"],
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


@dataclass(frozen=True)
class IterationRecord:
    iteration: int
    point: tuple
    rel_error: float
    node_counts: tuple
    n_interp: int
    residual: float

    @property
    def orders(self):
        return tuple(n - 1 for n in self.node_counts)

    def line(self):
        return iteration_line(
            self.iteration, self.point, self.rel_error, self.node_counts, self.n_interp
        )


@dataclass(frozen=True)
class FitReport:
    iterations: int
    history: tuple
    final_error: float
    warnings: tuple = ()
    status: str = "converged"
    mode: str = FitMode.SCATTERED.value
    elapsed: float = 0.0
    interp_points: tuple = field(default=(), repr=False)

    @property
    def orders(self):
        return self.history[-1].orders if self.history else ()

    @property
    def interp_count(self):
        return len(self.interp_points)

    def summary(self):
        return {
            "status": self.status,
            "mode": self.mode,
            "iterations": self.iterations,
            "final_error": self.final_error,
            "orders": list(self.orders),
            "interp_count": self.interp_count,
        }

    def to_dict(self):
        history = []
        for record in self.history:
            entry = asdict(record)
            entry["point"] = [[z.real, z.imag] for z in record.point]
            entry["node_counts"] = list(record.node_counts)
            history.append(entry)
        return {
            **self.summary(),
            "elapsed": self.elapsed,
            "warnings": list(self.warnings),
            "history": history,
            "interp_points": [
                [[z.real, z.imag] for z in point] for point in self.interp_points
            ],
        }


def _sample_errors(samples, model, interp_idx=()):
    """``|f - r|`` at every sample; poles and 0/0 count as ``inf``."""
    n_values, d_values = numer_denom_batch(model, samples.points)
    errors = np.full(samples.K, np.inf)
    ok = d_values != 0
    errors[ok] = np.abs(samples.values[ok] - n_values[ok] / d_values[ok])
    interp_idx = np.asarray(interp_idx, dtype=np.intp)
    # enforced interpolation points are exact
    errors[interp_idx[ok[interp_idx]]] = 0.0
    return errors, np.flatnonzero(~ok)


def _pole_warning(samples, poles):
    points = ", ".join(format_point(samples.points[i]) for i in poles[:5])
    more = f" (+{poles.size - 5} more)" if poles.size > 5 else ""
    msg = f"Model is singular at {poles.size} sample point(s): {points}{more}"
    LOGGER.warning(msg)
    return msg


def _greedy_index(samples, errors, poles):
    """Index of the largest error (lowest on ties) and the pole warning, if any."""
    warning = _pole_warning(samples, poles) if poles.size else None
    return int(np.argmax(errors)), warning


def greedy_argmax(samples, model):
    """Sample point of largest ``|f - r|``; lowest index on ties."""
    errors, poles = _sample_errors(samples, model)
    index, _ = _greedy_index(samples, errors, poles)
    return tuple(samples.points[index].tolist()), float(errors[index])


def _relative(errors, scale):
    max_error = float(np.max(errors))
    return max_error / scale if scale > 0 else max_error


def _in_node_product(samples, nodes):
    mask = np.ones(samples.K, dtype=bool)
    for j, axis in enumerate(nodes):
        mask &= np.isin(samples.points[:, j], axis)
    return mask


def _greedy_fit(samples, config, listener, mode, solve):
    interp_update = InterpUpdate.ALL if mode == FitMode.GRID else config.interp_update
    start = time()
    LOGGER.info(
        f"Fitting {samples.K} samples (d={samples.d}) in {mode.value} mode: "
        f"tol={config.tol}, max_iter={config.max_iter}, "
        f"interp_update={interp_update.value}"
    )
    if listener:
        listener.on_fit_start(samples, config)

    scale = float(np.max(np.abs(samples.values)))
    model = BarycentricModel.constant(np.mean(samples.values), samples.d)
    errors, poles = _sample_errors(samples, model)
    nodes = None
    in_interp = np.zeros(samples.K, dtype=bool)
    interp_idx = []
    history, warnings = [], []
    status = "max_iter"

    def _report(status):
        return FitReport(
            iterations=len(history),
            history=tuple(history),
            final_error=history[-1].rel_error if history else _relative(errors, scale),
            warnings=tuple(warnings),
            status=status,
            mode=mode.value,
            elapsed=time() - start,
            interp_points=tuple(tuple(samples.points[i].tolist()) for i in interp_idx),
        )

    def _stagnate(msg):
        LOGGER.error(msg)
        raise StagnationError(msg, model, _report("stagnated"))

    try:
        for iteration in range(1, config.max_iter + 1):
            index, pole_warning = _greedy_index(samples, errors, poles)
            if pole_warning:
                warnings.append(pole_warning)
            point = samples.points[index]
            if in_interp[index]:
                _stagnate(
                    f"Greedy point {format_point(point)} is already interpolated; "
                    "the fit cannot make progress"
                )

            nodes = NodeAxes.from_point(point) if nodes is None else nodes.with_point(point)
            if interp_update == InterpUpdate.ALL:
                new = np.flatnonzero(_in_node_product(samples, nodes) & ~in_interp)
            else:
                new = np.array([index], dtype=np.intp)
            in_interp[new] = True
            interp_idx.extend(new.tolist())

            interp = InterpSet(samples.points[interp_idx], samples.values[interp_idx])
            model, residual, ls_warnings = solve(nodes, interp)
            warnings.extend(ls_warnings)
            errors, poles = _sample_errors(samples, model, interp_idx)
            rel_error = _relative(errors, scale)

            record = IterationRecord(
                iteration=iteration,
                point=tuple(point.tolist()),
                rel_error=rel_error,
                node_counts=nodes.dims,
                n_interp=len(interp_idx),
                residual=residual,
            )
            if (
                history
                and history[-1].point == record.point
                and abs(history[-1].rel_error - rel_error) <= STAGNATION_TOL
            ):
                _stagnate(f"Greedy point {format_point(point)} repeated with unchanged error")
            history.append(record)
            LOGGER.info(record.line())
            if listener:
                listener.on_iteration(record)

            if rel_error <= config.tol:
                status = "converged"
                break
            if in_interp.all():
                status = "exhausted"
                break
    except Exception as e:
        if listener:
            listener.on_fit_error(e)
        raise

    report = _report(status)
    LOGGER.info(
        f"Fit {status} after {report.iterations} iterations in "
        f"{get_readable_time(report.elapsed)}: relerr={format_metric(report.final_error)}, "
        f"orders={report.orders}, |I|={report.interp_count}"
    )
    if listener:
        listener.on_fit_complete(model, report)
    return model, report


def fit_scattered(samples, config=None, listener=None):
    config = config or FitConfig.from_config()

    def _solve(nodes, interp):
        return solve_constrained(samples, nodes, interp, full_output=True)

    return _greedy_fit(samples, config, listener, FitMode.SCATTERED, _solve)


def fit_grid(grid_samples, config=None, listener=None):
    """Grid p-AAA: interpolate on the whole node grid every iteration."""
    config = config or FitConfig.from_config()
    if not grid_samples.is_lattice:
        raise InvalidArgumentError(
            f"Grid mode needs lattice data; {grid_samples.K} points with per-axis "
            f"sizes {[axis.size for axis in grid_samples.lattice_axes()]} are scattered"
        )
    if config.interp_update != InterpUpdate.ALL:
        LOGGER.debug("Grid mode interpolates on the full node grid; interp_update ignored")

    def _solve(nodes, _interp):
        return solve_grid_interp(grid_samples, nodes, full_output=True)

    return _greedy_fit(grid_samples, config, listener, FitMode.GRID, _solve)


def fit(samples, config=None, listener=None):
    config = config or FitConfig.from_config()
    mode = config.mode
    if mode == FitMode.AUTO:
        mode = FitMode.GRID if samples.is_lattice else FitMode.SCATTERED
        LOGGER.info(f"Auto mode: samples {'form' if mode == FitMode.GRID else 'do not form'} a grid")
    if mode == FitMode.GRID:
        return fit_grid(samples, config, listener)
    return fit_scattered(samples, config, listener)
