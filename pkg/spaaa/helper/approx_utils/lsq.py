"""Linearized least-squares systems and their unit-norm solution.

Every system minimizes ``sum_i |f(Z_i) d(Z_i) - n(Z_i)|^2`` over coefficient
vectors of unit 2-norm.  The unknowns are ``[vec(alpha); beta_u]``; the
entries of ``beta`` fixed by interpolation are ``alpha_c * H`` and never
appear as columns.  With ``C`` the Khatri-Rao basis matrix (N x K) and
``D = diag(f)``::

    M = [D C^T - C^T diag(S_c^T H),  -C^T S_u^T]

No interpolation gives ``[D C^T, -C^T]``; interpolation on the full node
grid leaves only the left block.  On lattice data the Khatri-Rao columns
coincide with the Kronecker columns, so the grid systems are assembled by
the same code.
"""

from dataclasses import field, dataclass

import numpy as np
from scipy.linalg import svd
from numpy.linalg import LinAlgError
from tenacity import Retrying, stop_after_attempt, retry_if_exception_type

from spaaa import LOGGER, config_dict
from spaaa.helper.ext_utils.exceptions import NumericalError, InvalidArgumentError
from spaaa.helper.ext_utils.num_utils import format_point, as_complex_vector
from spaaa.helper.approx_utils.selection import (
    InterpSet,
    build_plan,
    reconstruct_beta,
    constrained_beta,
)
from spaaa.helper.approx_utils.barycentric import (
    BarycentricModel,
    basis_matrix,
    as_point_array,
)


@dataclass(frozen=True, eq=False)
class SampleSet:
    """Sample points of shape (K, d) with their K values.

    A flat point list is read as K univariate points when its length matches
    the values, and as a single d-tuple otherwise.
    """

    points: np.ndarray
    values: np.ndarray
    _index: dict = field(init=False, repr=False)

    def __post_init__(self):
        values = as_complex_vector(self.values)
        flat = np.ndim(self.points) == 1 and np.size(self.points) == values.size
        points = as_point_array(self.points, 1 if flat else None)
        if points.shape[0] == 0:
            raise InvalidArgumentError("SampleSet needs at least one sample")
        if values.size != points.shape[0]:
            raise InvalidArgumentError(
                f"SampleSet has {points.shape[0]} points but {values.size} values"
            )
        if not (np.all(np.isfinite(points)) and np.all(np.isfinite(values))):
            raise InvalidArgumentError("SampleSet points and values must be finite")
        index = {}
        for i, point in enumerate(map(tuple, points.tolist())):
            if point in index:
                raise InvalidArgumentError(
                    f"Duplicate sample point {format_point(point)} at indices "
                    f"{index[point]} and {i}"
                )
            index[point] = i
        points.flags.writeable = False
        values.flags.writeable = False
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "_index", index)

    @property
    def d(self):
        return self.points.shape[1]

    @property
    def K(self):  # noqa: N802
        return self.points.shape[0]

    def column(self, j):
        return self.points[:, j]

    def index_of(self, point):
        return self._index.get(tuple(as_complex_vector(point).tolist()))

    def lookup(self, points):
        points = as_point_array(points, self.d)
        indices = []
        for point in points:
            if (i := self.index_of(point)) is None:
                raise InvalidArgumentError(
                    f"Point {format_point(point)} is not a sample point"
                )
            indices.append(i)
        return self.values[np.asarray(indices, dtype=np.intp)]

    def lattice_axes(self):
        """Distinct coordinates per variable, in order of first appearance."""
        return tuple(
            np.array(list(dict.fromkeys(self.column(j).tolist())))
            for j in range(self.d)
        )

    @property
    def is_lattice(self):
        return int(np.prod([axis.size for axis in self.lattice_axes()])) == self.K

    def subset(self, indices):
        indices = np.asarray(indices, dtype=np.intp)
        return SampleSet(self.points[indices], self.values[indices])


@dataclass(frozen=True, eq=False)
class LsSystem:
    matrix: np.ndarray
    n_alpha: int
    plan: object
    kind: str

    @property
    def col_blocks(self):
        return {
            "alpha": slice(0, self.n_alpha),
            "beta_u": slice(self.n_alpha, self.matrix.shape[1]),
        }

    def split(self, solution):
        """Map a solution vector back to ``alpha`` (tensor) and ``beta_u``."""
        solution = as_complex_vector(solution)
        if solution.size != self.matrix.shape[1]:
            raise InvalidArgumentError(
                f"Solution has {solution.size} entries, system has "
                f"{self.matrix.shape[1]} columns"
            )
        blocks = self.col_blocks
        alpha = solution[blocks["alpha"]].reshape(self.plan.dims)
        return alpha, solution[blocks["beta_u"]]


def _require_lattice(samples):
    if not samples.is_lattice:
        raise InvalidArgumentError(
            f"Samples do not form a grid: {samples.K} points, per-axis sizes "
            f"{[axis.size for axis in samples.lattice_axes()]}"
        )


def assemble_scattered_interp(samples, nodes, plan, interp_values, kind=None):
    """Assemble ``M`` for arbitrary sample points and interpolation set.

    ``interp_values`` is ``H`` in plan order (see ``SelectionPlan.align``).
    """
    if samples.d != nodes.d:
        raise InvalidArgumentError(f"Samples have d={samples.d}, nodes have d={nodes.d}")
    if tuple(plan.dims) != nodes.dims:
        raise InvalidArgumentError(f"Plan dims {plan.dims} != node dims {nodes.dims}")
    interp_values = as_complex_vector(interp_values)
    if interp_values.size != plan.k:
        raise InvalidArgumentError(
            f"Expected {plan.k} interpolation values, got {interp_values.size}"
        )
    basis_t = basis_matrix(nodes, samples.points).T
    left = samples.values[:, None] * basis_t
    constrained = plan.constrained_idx
    left[:, constrained] -= basis_t[:, constrained] * interp_values[None, :]
    right = -basis_t[:, plan.unconstrained_idx]
    return LsSystem(
        np.hstack([left, right]),
        nodes.size,
        plan,
        kind or ("scattered_interp" if plan.k else "scattered_free"),
    )


def assemble_multivariate(samples, nodes, plan, interp_values):
    """d-variate entry point; the scattered assembly is written for any d."""
    return assemble_scattered_interp(samples, nodes, plan, interp_values)


def assemble_scattered_free(samples, nodes):
    plan = build_plan(nodes, InterpSet.empty(nodes.d))
    return assemble_scattered_interp(samples, nodes, plan, [])


def assemble_grid_free(grid_samples, nodes):
    _require_lattice(grid_samples)
    plan = build_plan(nodes, InterpSet.empty(nodes.d))
    return assemble_scattered_interp(grid_samples, nodes, plan, [], kind="grid_free")


def assemble_grid_interp(grid_samples, nodes, full_grid_values=None):
    """Loewner matrix for interpolation on the whole node grid.

    ``full_grid_values`` holds the samples on the node grid (shape
    ``nodes.dims``); they are looked up from ``grid_samples`` when omitted.
    """
    _require_lattice(grid_samples)
    for j, (axis, coords) in enumerate(zip(nodes, grid_samples.lattice_axes())):
        missing = set(axis.tolist()) - set(coords.tolist())
        if missing:
            raise InvalidArgumentError(
                f"Nodes {sorted(missing, key=abs)} on axis {j + 1} are not sample "
                "coordinates"
            )
    node_points = nodes.product()
    if full_grid_values is None:
        full_grid_values = grid_samples.lookup(node_points)
    full_grid_values = as_complex_vector(full_grid_values)
    if full_grid_values.size != nodes.size:
        raise InvalidArgumentError(
            f"Grid values have {full_grid_values.size} entries, node grid has "
            f"{nodes.size}"
        )
    plan = build_plan(nodes, InterpSet(node_points, full_grid_values))
    return assemble_scattered_interp(
        grid_samples, nodes, plan, plan.align(full_grid_values), kind="grid_interp"
    )


def _diagnostics(matrix):
    finite = bool(np.all(np.isfinite(matrix)))
    max_abs = float(np.max(np.abs(matrix))) if matrix.size else 0.0
    fro = float(np.linalg.norm(matrix)) if finite else float("nan")
    return f"shape={matrix.shape}, frobenius={fro:.6e}, max|entry|={max_abs:.6e}, finite={finite}"


def min_unit_norm(system, drivers=None):
    """Right singular vector of the smallest singular value.

    Returns ``(solution, residual)`` with ``||solution|| = 1`` and
    ``||M solution|| = residual``.  The phase is fixed so that the entry of
    largest magnitude (lowest index on ties) is real and positive.
    """
    if isinstance(system, LsSystem):
        matrix, kind = system.matrix, system.kind
    else:
        matrix, kind = system, "raw"
    matrix = np.asarray(matrix, dtype=np.complex128)
    if matrix.ndim != 2 or matrix.shape[1] == 0:
        raise InvalidArgumentError(f"LS matrix needs at least one column, got {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise NumericalError(
            f"{kind} LS matrix has non-finite entries: {_diagnostics(matrix)}"
        )
    drivers = drivers or config_dict["SVD_DRIVERS"]
    rows, cols = matrix.shape

    def _log_fallback(retry_state):
        failed = drivers[retry_state.attempt_number - 1]
        LOGGER.warning(
            f"SVD of the {kind} system with lapack_driver '{failed}' failed: "
            f"{retry_state.outcome.exception()}. Trying '{drivers[retry_state.attempt_number]}'"
        )

    try:
        for attempt in Retrying(
            stop=stop_after_attempt(len(drivers)),
            retry=retry_if_exception_type(LinAlgError),
            before_sleep=_log_fallback,
            reraise=True,
        ):
            with attempt:
                driver = drivers[attempt.retry_state.attempt_number - 1]
                _, sing, vh = svd(
                    matrix,
                    full_matrices=rows < cols,
                    check_finite=False,
                    lapack_driver=driver,
                )
    except LinAlgError as e:
        raise NumericalError(
            f"SVD of the {kind} system did not converge with drivers {drivers}: {e}; "
            f"{_diagnostics(matrix)}"
        ) from e

    residual = 0.0 if rows < cols else float(sing[-1])
    solution = vh[-1].conj()
    pivot = int(np.argmax(np.abs(solution)))
    solution = solution * (np.conj(solution[pivot]) / np.abs(solution[pivot]))
    solution[pivot] = np.abs(solution[pivot])
    return solution, residual


def _enforcement_warnings(alpha, plan, nodes):
    zero = np.flatnonzero(alpha.reshape(-1)[plan.constrained_idx] == 0)
    if zero.size == 0:
        return []
    points = [
        format_point(node_points)
        for node_points in nodes.product()[plan.constrained_idx[zero]]
    ]
    msg = f"Interpolation not enforced at {', '.join(points)}: constrained alpha is 0"
    LOGGER.warning(msg)
    return [msg]


def solve_constrained(samples, nodes, interp, full_output=False):
    """Fit ``alpha``, ``beta`` so that the model interpolates ``interp``.

    With ``full_output`` returns ``(model, residual, warnings)``.
    """
    plan = build_plan(nodes, interp)
    values = plan.align(interp.values)
    system = assemble_scattered_interp(samples, nodes, plan, values)
    solution, residual = min_unit_norm(system)
    alpha, beta_u = system.split(solution)
    beta = reconstruct_beta(plan, constrained_beta(plan, alpha, values), beta_u)
    model = BarycentricModel(nodes, alpha, beta)
    if full_output:
        return model, residual, _enforcement_warnings(alpha, plan, nodes)
    return model


def solve_grid_interp(grid_samples, nodes, full_grid_values=None, full_output=False):
    """Grid case: ``beta = alpha * H`` on the whole node grid."""
    system = assemble_grid_interp(grid_samples, nodes, full_grid_values)
    plan = system.plan
    values = grid_samples.lookup(nodes.product())[plan.permutation]
    if full_grid_values is not None:
        values = plan.align(full_grid_values)
    solution, residual = min_unit_norm(system)
    alpha, _ = system.split(solution)
    beta = reconstruct_beta(plan, constrained_beta(plan, alpha, values), [])
    model = BarycentricModel(nodes, alpha, beta)
    if full_output:
        return model, residual, _enforcement_warnings(alpha, plan, nodes)
    return model
