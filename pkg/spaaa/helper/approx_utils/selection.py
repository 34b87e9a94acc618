"""Constrained/unconstrained split of the numerator coefficients.

The selection operators are kept as sorted index lists over ``vec(beta)``:
applying ``S_c`` is a gather at ``constrained_idx``, applying ``S_c^T`` is a
scatter back into a zero vector, and likewise for ``S_u``.
"""

from dataclasses import dataclass

import numpy as np

from spaaa.helper.ext_utils.num_utils import format_point, as_complex_vector
from spaaa.helper.ext_utils.exceptions import InvalidArgumentError
from spaaa.helper.approx_utils.barycentric import as_point_array


@dataclass(frozen=True, eq=False)
class InterpSet:
    points: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        points = np.asarray(self.points, dtype=np.complex128)
        if points.size == 0:
            points = points.reshape(0, points.shape[-1] if points.ndim == 2 else 0)
        else:
            points = as_point_array(points)
        values = as_complex_vector(self.values)
        if values.size != points.shape[0]:
            raise InvalidArgumentError(
                f"InterpSet has {points.shape[0]} points but {values.size} values"
            )
        if len({tuple(p) for p in points.tolist()}) != points.shape[0]:
            raise InvalidArgumentError("InterpSet points must be pairwise distinct")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "values", values)

    @classmethod
    def empty(cls, d):
        return cls(np.zeros((0, d), dtype=np.complex128), [])

    @property
    def k(self):
        return self.points.shape[0]


@dataclass(frozen=True, eq=False)
class SelectionPlan:
    dims: tuple
    constrained_idx: np.ndarray
    unconstrained_idx: np.ndarray
    permutation: np.ndarray

    @property
    def k(self):
        return self.constrained_idx.size

    @property
    def size(self):
        return int(np.prod(self.dims))

    def align(self, values):
        """Reorder values given in interpolation-set order to plan order."""
        values = as_complex_vector(values)
        if values.size != self.k:
            raise InvalidArgumentError(
                f"Expected {self.k} interpolation values, got {values.size}"
            )
        return values[self.permutation]

    def gather(self, vector):
        vector = np.asarray(vector).reshape(-1)
        if vector.size != self.size:
            raise InvalidArgumentError(
                f"Vector has {vector.size} entries, plan covers {self.size}"
            )
        return vector[self.constrained_idx], vector[self.unconstrained_idx]


def build_plan(nodes, interp):
    if interp.k and interp.points.shape[1] != nodes.d:
        raise InvalidArgumentError(
            f"Interpolation points have d={interp.points.shape[1]}, nodes have d={nodes.d}"
        )
    flat = []
    for point in interp.points:
        if (index := nodes.flat_index(point)) is None:
            raise InvalidArgumentError(
                f"Interpolation point {format_point(point)} is not in the node product"
            )
        flat.append(index)
    flat = np.asarray(flat, dtype=np.intp)
    permutation = np.argsort(flat, kind="stable")
    constrained = flat[permutation]
    unconstrained = np.setdiff1d(np.arange(nodes.size, dtype=np.intp), constrained)
    for array in (constrained, unconstrained, permutation):
        array.flags.writeable = False
    return SelectionPlan(nodes.dims, constrained, unconstrained, permutation)


def constrained_beta(plan, alpha, values):
    """``alpha_c * H``: the numerator entries fixed by interpolation."""
    alpha = np.asarray(alpha, dtype=np.complex128).reshape(-1)
    if alpha.size != plan.size:
        raise InvalidArgumentError(
            f"alpha has {alpha.size} entries, plan covers {plan.size}"
        )
    values = as_complex_vector(values)
    if values.size != plan.k:
        raise InvalidArgumentError(
            f"Expected {plan.k} interpolation values, got {values.size}"
        )
    return alpha[plan.constrained_idx] * values


def reconstruct_beta(plan, beta_c, beta_u):
    beta_c = as_complex_vector(beta_c)
    beta_u = as_complex_vector(beta_u)
    if beta_c.size != plan.k or beta_u.size != plan.size - plan.k:
        raise InvalidArgumentError(
            f"beta_c/beta_u have {beta_c.size}/{beta_u.size} entries, "
            f"expected {plan.k}/{plan.size - plan.k}"
        )
    vec = np.empty(plan.size, dtype=np.complex128)
    vec[plan.constrained_idx] = beta_c
    vec[plan.unconstrained_idx] = beta_u
    return vec.reshape(plan.dims)
