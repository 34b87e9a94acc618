"""Barycentric form of d-variate rational functions.

A model is a grid of nodes ``lambda^(1) x ... x lambda^(d)`` with two
coefficient tensors: ``alpha`` (denominator) and ``beta`` (numerator).
Coefficient tensors are C-ordered, so ``vec(T) = T.ravel()`` and the entry
``(i_1, ..., i_d)`` sits at ``((i_1 n_2 + i_2) n_3 + ...) n_d + i_d``.  This
layout matches the Kronecker ordering of the per-axis Cauchy matrices and
must not change.

The basis function of node ``lambda_i`` is ``1 / (z - lambda_i)`` off the
nodes, ``1`` at ``lambda_i`` itself and ``0`` at every other node of the
axis.  Node matching is exact.
"""

from functools import reduce
from dataclasses import field, dataclass

import numpy as np
from scipy.linalg import khatri_rao

from spaaa import LOGGER, config_dict
from spaaa.helper.ext_utils.exceptions import (
    PoleError,
    InvalidArgumentError,
    IndeterminateValueError,
)
from spaaa.helper.ext_utils.num_utils import as_complex_vector


def _frozen(array):
    array = np.array(array, dtype=np.complex128, order="C")
    array.flags.writeable = False
    return array


def _check_distinct(nodes, where="axis"):
    if len(set(nodes.tolist())) != nodes.size:
        seen, dups = set(), []
        for z in nodes.tolist():
            if z in seen:
                dups.append(z)
            seen.add(z)
        raise InvalidArgumentError(f"Duplicate barycentric nodes on {where}: {dups}")


def as_point_array(points, d=None):
    """Coerce to a (K, d) complex array; a flat list is one d-tuple unless ``d == 1``."""
    points = np.asarray(points, dtype=np.complex128)
    if points.ndim == 1:
        points = points.reshape(-1, 1) if d == 1 else points.reshape(1, -1)
    if points.ndim != 2:
        raise InvalidArgumentError(f"Points must be a list of d-tuples, got {points.shape}")
    if points.size == 0:
        return np.zeros((0, d or points.shape[1]), dtype=np.complex128)
    if d is not None and points.shape[1] != d:
        raise InvalidArgumentError(
            f"Points have {points.shape[1]} coordinates, model has d={d}"
        )
    return points


@dataclass(frozen=True, eq=False)
class NodeAxes:
    axes: tuple
    _lookup: tuple = field(init=False, repr=False)

    def __post_init__(self):
        axes = tuple(_frozen(as_complex_vector(axis)) for axis in self.axes)
        if len(axes) == 0:
            raise InvalidArgumentError("NodeAxes needs at least one variable")
        for j, axis in enumerate(axes):
            if axis.size == 0:
                raise InvalidArgumentError(f"Node axis {j + 1} is empty")
            if not np.all(np.isfinite(axis)):
                raise InvalidArgumentError(f"Node axis {j + 1} has non-finite nodes")
            _check_distinct(axis, f"axis {j + 1}")
        object.__setattr__(self, "axes", axes)
        object.__setattr__(
            self,
            "_lookup",
            tuple({z: i for i, z in enumerate(axis.tolist())} for axis in axes),
        )

    @classmethod
    def from_point(cls, point):
        return cls(tuple([z] for z in as_complex_vector(point)))

    @property
    def d(self):
        return len(self.axes)

    @property
    def dims(self):
        return tuple(axis.size for axis in self.axes)

    @property
    def size(self):
        return int(np.prod(self.dims))

    def __iter__(self):
        return iter(self.axes)

    def __getitem__(self, j):
        return self.axes[j]

    def contains(self, point):
        return self.multi_index(point) is not None

    def multi_index(self, point):
        """Per-axis positions of ``point`` in the node product, or None."""
        index = []
        for lookup, z in zip(self._lookup, as_complex_vector(point).tolist()):
            if z not in lookup:
                return None
            index.append(lookup[z])
        return tuple(index)

    def flat_index(self, point):
        if (index := self.multi_index(point)) is None:
            return None
        return int(np.ravel_multi_index(index, self.dims))

    def with_point(self, point):
        """Set-union of every coordinate of ``point`` into its axis."""
        point = as_complex_vector(point)
        if point.size != self.d:
            raise InvalidArgumentError(
                f"Point has {point.size} coordinates, nodes have d={self.d}"
            )
        axes = []
        for lookup, axis, z in zip(self._lookup, self.axes, point.tolist()):
            axes.append(axis if z in lookup else np.append(axis, z))
        return NodeAxes(tuple(axes))

    def product(self):
        """All node tuples, row-major."""
        grids = np.meshgrid(*self.axes, indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=1)


@dataclass(frozen=True, eq=False)
class BarycentricModel:
    nodes: NodeAxes
    alpha: np.ndarray
    beta: np.ndarray

    def __post_init__(self):
        dims = self.nodes.dims
        tensors = []
        for name in ("alpha", "beta"):
            tensor = np.asarray(getattr(self, name), dtype=np.complex128)
            if tensor.size != self.nodes.size:
                raise InvalidArgumentError(
                    f"{name} has {tensor.size} entries, node grid {dims} needs "
                    f"{self.nodes.size}"
                )
            if tensor.ndim > 1 and tensor.shape != dims:
                raise InvalidArgumentError(
                    f"{name} has shape {tensor.shape}, node grid is {dims}"
                )
            if not np.all(np.isfinite(tensor)):
                raise InvalidArgumentError(f"{name} has non-finite entries")
            tensors.append(_frozen(tensor.reshape(dims)))
        object.__setattr__(self, "alpha", tensors[0])
        object.__setattr__(self, "beta", tensors[1])

    @classmethod
    def constant(cls, value, d, node=0.0):
        nodes = NodeAxes(tuple([node] for _ in range(d)))
        shape = (1,) * d
        return cls(nodes, np.ones(shape), np.full(shape, complex(value)))

    @property
    def d(self):
        return self.nodes.d

    @property
    def dims(self):
        return self.nodes.dims

    @property
    def orders(self):
        return tuple(n - 1 for n in self.dims)

    def vec_alpha(self):
        return self.alpha.ravel()

    def vec_beta(self):
        return self.beta.ravel()

    def scaled(self, factor):
        return BarycentricModel(self.nodes, self.alpha * factor, self.beta * factor)


@dataclass(frozen=True)
class BatchResult:
    values: np.ndarray
    errors: list

    @property
    def ok(self):
        return not self.errors

    @property
    def failed_indices(self):
        return [i for i, _ in self.errors]


def cauchy_matrix(axis_nodes, points):
    """Basis functions of one axis evaluated at ``points``, shape (n, P)."""
    nodes = as_complex_vector(axis_nodes)
    points = as_complex_vector(points)
    _check_distinct(nodes)
    hit = points[None, :] == nodes[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        matrix = 1.0 / (points[None, :] - nodes[:, None])
    matrix[:, hit.any(axis=0)] = 0
    matrix[hit] = 1
    return matrix


def basis_matrix(nodes, points):
    """Khatri-Rao product of the per-axis Cauchy matrices, shape (N, K).

    Column ``k`` is ``kron(C_1[:, k], ..., C_d[:, k])``, so
    ``basis_matrix(...).T @ vec(T)`` evaluates the barycentric sum with
    coefficients ``T`` at every point.
    """
    points = as_point_array(points, nodes.d)
    factors = [cauchy_matrix(axis, points[:, j]) for j, axis in enumerate(nodes)]
    return reduce(khatri_rao, factors)


def _snap(nodes, points, snap_tol):
    if not snap_tol:
        return points
    points = points.copy()
    for j, axis in enumerate(nodes):
        dist = np.abs(points[:, j][:, None] - axis[None, :])
        nearest = np.argmin(dist, axis=1)
        close = dist[np.arange(points.shape[0]), nearest] <= snap_tol
        points[close, j] = axis[nearest[close]]
    return points


def numer_denom_batch(model, points):
    points = as_point_array(points, model.d)
    if points.shape[0] == 0:
        empty = np.zeros(0, dtype=np.complex128)
        return empty, empty.copy()
    basis = basis_matrix(model.nodes, points).T
    return basis @ model.vec_beta(), basis @ model.vec_alpha()


def eval_numer_denom(model, point):
    """Numerator and denominator of ``model`` at a single d-tuple."""
    n_values, d_values = numer_denom_batch(model, as_point_array([point], model.d))
    return complex(n_values[0]), complex(d_values[0])


def _point_error(n_value, point):
    if n_value == 0:
        return IndeterminateValueError(point)
    return PoleError(point)


def eval_point(model, point, snap_tol=None):
    if snap_tol is None:
        snap_tol = config_dict["SNAP_TOL"]
    points = _snap(model.nodes, as_point_array([point], model.d), snap_tol)
    n_value, d_value = eval_numer_denom(model, points[0])
    if d_value == 0:
        raise _point_error(n_value, tuple(points[0].tolist()))
    return n_value / d_value


def eval_batch(model, points, snap_tol=None):
    """Evaluate at many points; poles are collected, not raised."""
    if snap_tol is None:
        snap_tol = config_dict["SNAP_TOL"]
    points = _snap(model.nodes, as_point_array(points, model.d), snap_tol)
    n_values, d_values = numer_denom_batch(model, points)
    values = np.full(points.shape[0], np.nan + 1j * np.nan)
    singular = d_values == 0
    values[~singular] = n_values[~singular] / d_values[~singular]
    errors = [
        (int(i), _point_error(n_values[i], tuple(points[i].tolist())))
        for i in np.flatnonzero(singular)
    ]
    if errors:
        LOGGER.debug(f"eval_batch: {len(errors)} of {points.shape[0]} points singular")
    return BatchResult(values, errors)


def cleared_numer_denom(model, point):
    """Numerator and denominator times prod_j prod_i (z_j - lambda_ij).

    Both are polynomials of degree at most ``n_j - 1`` in ``z_j``; they are
    formed without division and are valid on the nodes as well.
    """
    point = as_complex_vector(point)
    if point.size != model.d:
        raise InvalidArgumentError(
            f"Point has {point.size} coordinates, model has d={model.d}"
        )
    weights = []
    for z, axis in zip(point, model.nodes):
        factors = z - axis
        weights.append(
            np.array([np.prod(np.delete(factors, i)) for i in range(axis.size)])
        )
    weights = reduce(np.kron, weights)
    return complex(weights @ model.vec_beta()), complex(weights @ model.vec_alpha())
