from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from spaaa.helper.approx_utils.lsq import SampleSet
from spaaa.helper.approx_utils.selection import InterpSet
from spaaa.helper.approx_utils.barycentric import NodeAxes

WORKED_X = [-2, -2, -1, -1, 0, 0, 1, 2, 2]
WORKED_Y = [-2, 1, 1, 2, -1, 2, -1, -2, 2]


def worked_function(x, y):
    return Fraction(x * x + x * y + y + 1, x + y + 5)


@pytest.fixture
def worked_samples():
    values = [float(worked_function(x, y)) for x, y in zip(WORKED_X, WORKED_Y)]
    return SampleSet(np.column_stack([WORKED_X, WORKED_Y]), values)


@pytest.fixture
def worked_nodes():
    return NodeAxes(([-1, 1], [-1, 2]))


@pytest.fixture
def worked_interp():
    return InterpSet([(-1, 2), (1, -1)], [1 / 3, 0])


def _basis_term(z, axis, i):
    if z == axis[i]:
        return 1
    if z in axis:
        return 0
    return 1 / (z - axis[i])


def term_sum(axes, alpha, beta, point):
    """Numerator and denominator as an explicit sum over node tuples."""
    axes = [list(np.asarray(axis, dtype=complex)) for axis in axes]
    alpha = np.asarray(alpha).reshape([len(axis) for axis in axes])
    beta = np.asarray(beta).reshape(alpha.shape)
    numer = denom = 0j
    for index in product(*(range(len(axis)) for axis in axes)):
        weight = 1 + 0j
        for z, axis, i in zip(point, axes, index):
            weight *= _basis_term(complex(z), axis, i)
        numer += beta[index] * weight
        denom += alpha[index] * weight
    return numer, denom


@pytest.fixture
def term_by_term():
    return term_sum


@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(20240611))
