"""Deterministic synthetic datasets.

Random draws use ``numpy.random.Generator(PCG64(seed))`` so fixtures are
reproducible across platforms and numpy versions.
"""

from dataclasses import dataclass

import numpy as np

from spaaa import LOGGER
from spaaa.helper.ext_utils.exceptions import GenerationError, InvalidArgumentError
from spaaa.helper.approx_utils.lsq import SampleSet
from spaaa.helper.approx_utils.barycentric import (
    NodeAxes,
    BarycentricModel,
    numer_denom_batch,
)

DENOM_FLOOR = 1e-3
MAX_REDRAWS = 1000
GAP_FRACTION_BAND = (0.20, 0.25)


def rng_for(seed):
    return np.random.Generator(np.random.PCG64(seed))


def peaks(x, y):
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    return (
        3 * (1 - x) ** 2 * np.exp(-(x**2) - (y + 1) ** 2)
        - 10 * (x / 5 - x**3 - y**5) * np.exp(-(x**2) - y**2)
        - np.exp(-((x + 1) ** 2) - y**2) / 3
    )


def _check_domain(domain):
    lo, hi = (float(v) for v in domain)
    if not (np.isfinite(lo) and np.isfinite(hi) and lo < hi):
        raise InvalidArgumentError(f"Domain must satisfy lo < hi, got [{lo}, {hi}]")
    return lo, hi


def _peaks_samples(x, y):
    return SampleSet(np.stack([x, y], axis=1), peaks(x, y))


def gen_peaks_grid(n_per_axis=40, domain=(-3.0, 3.0)):
    """Peaks on an ``n x n`` grid, x varying slowest."""
    if int(n_per_axis) != n_per_axis or n_per_axis < 2:
        raise InvalidArgumentError(f"n_per_axis must be an integer >= 2, got {n_per_axis}")
    lo, hi = _check_domain(domain)
    axis = np.linspace(lo, hi, int(n_per_axis))
    x, y = np.meshgrid(axis, axis, indexing="ij")
    return _peaks_samples(x.ravel(), y.ravel())


@dataclass(frozen=True)
class GapSpec:
    centers: tuple
    radii: tuple
    target_removed_fraction: float = 0.22

    def __post_init__(self):
        centers = tuple(tuple(float(c) for c in center) for center in self.centers)
        radii = tuple(float(r) for r in self.radii)
        if len(centers) != len(radii):
            raise InvalidArgumentError(
                f"GapSpec has {len(centers)} centers but {len(radii)} radii"
            )
        if any(len(center) != 2 for center in centers):
            raise InvalidArgumentError("Gap centers must be 2-tuples")
        if any(not np.isfinite(r) or r < 0 for r in radii):
            raise InvalidArgumentError(f"Gap radii must be finite and >= 0, got {radii}")
        if not 0 < self.target_removed_fraction < 1:
            raise InvalidArgumentError(
                f"target_removed_fraction must lie in (0, 1), got "
                f"{self.target_removed_fraction}"
            )
        object.__setattr__(self, "centers", centers)
        object.__setattr__(self, "radii", radii)

    @classmethod
    def default(cls):
        """Three circles removing about 22% of the 40 x 40 grid on [-3, 3]^2."""
        return cls(((-1.2, 1.0), (1.5, 1.2), (0.3, -1.6)), (1.1, 0.9, 0.8))

    def inside(self, x, y):
        x = np.asarray(x, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        mask = np.zeros(x.shape, dtype=bool)
        for (cx, cy), r in zip(self.centers, self.radii):
            mask |= np.hypot(x - cx, y - cy) < r
        return mask


def gen_peaks_with_gaps(n_per_axis=40, domain=(-3.0, 3.0), gaps=None, seed=None):
    """Split the peaks grid into points outside and inside the gap circles.

    Returns ``(train, heldout)``; ``heldout`` is None when the gaps catch no
    grid point.  The split is purely geometric, ``seed`` only keeps the
    signature in line with the other generators.
    """
    gaps = gaps or GapSpec.default()
    grid = gen_peaks_grid(n_per_axis, domain)
    mask = gaps.inside(grid.points[:, 0].real, grid.points[:, 1].real)
    removed = int(mask.sum())
    if removed == grid.K:
        raise InvalidArgumentError("Gaps remove every grid point")
    fraction = removed / grid.K
    LOGGER.info(
        f"Gaps removed {removed} of {grid.K} grid points ({fraction:.2%}, "
        f"target {gaps.target_removed_fraction:.2%}, seed={seed})"
    )
    lo, hi = GAP_FRACTION_BAND
    if not 0 < fraction < 0.5:
        LOGGER.warning(f"Removed fraction {fraction:.2%} lies outside (0%, 50%)")
    elif not lo <= fraction <= hi:
        LOGGER.warning(
            f"Removed fraction {fraction:.2%} lies outside the target band "
            f"[{lo:.0%}, {hi:.0%}]"
        )
    train = grid.subset(np.flatnonzero(~mask))
    heldout = grid.subset(np.flatnonzero(mask)) if removed else None
    return train, heldout


def removed_fraction(train, heldout):
    removed = heldout.K if heldout is not None else 0
    return removed / (train.K + removed)


def gen_peaks_scattered(K, domain=(-3.0, 3.0), seed=0):
    """Peaks at ``K`` points drawn uniformly in the square ``domain^2``."""
    if int(K) != K or K < 1:
        raise InvalidArgumentError(f"K must be a positive integer, got {K}")
    lo, hi = _check_domain(domain)
    points = rng_for(seed).uniform(lo, hi, size=(int(K), 2))
    return _peaks_samples(points[:, 0], points[:, 1])


def drop_random(samples, fraction, seed=0):
    """Remove ``round(fraction * K)`` random samples; returns ``(kept, removed)``."""
    if not 0 <= fraction < 1:
        raise InvalidArgumentError(f"fraction must lie in [0, 1), got {fraction}")
    n_removed = round(fraction * samples.K)
    if n_removed >= samples.K:
        raise InvalidArgumentError(
            f"Dropping {fraction} of {samples.K} samples leaves nothing"
        )
    chosen = np.zeros(samples.K, dtype=bool)
    chosen[rng_for(seed).choice(samples.K, size=n_removed, replace=False)] = True
    kept = samples.subset(np.flatnonzero(~chosen))
    removed = samples.subset(np.flatnonzero(chosen)) if n_removed else None
    return kept, removed


def gen_rational_fixture(orders, K, seed=0, domain=(-1.0, 1.0)):
    """Samples of a random barycentric rational function of the given orders.

    Node counts are ``orders + 1`` per axis; nodes are equispaced in the box
    and shifted by ``0.5i`` so the real sample cloud never hits one.  Sample
    points with ``|d| < 1e-3`` are redrawn.
    """
    orders = [int(o) for o in orders]
    if not orders or any(o < 0 for o in orders):
        raise InvalidArgumentError(f"orders must be non-negative integers, got {orders}")
    lo, hi = _check_domain(domain)
    dims = tuple(o + 1 for o in orders)
    n_coeffs = int(np.prod(dims))
    if int(K) != K or K < 2 * n_coeffs:
        raise InvalidArgumentError(
            f"K={K} is below 2 * {n_coeffs} coefficients for orders {orders}"
        )
    K = int(K)
    d = len(dims)
    rng = rng_for(seed)
    nodes = NodeAxes(tuple(np.linspace(lo, hi, n) + 0.5j for n in dims))
    alpha = rng.standard_normal(dims) + 1j * rng.standard_normal(dims)
    beta = rng.standard_normal(dims) + 1j * rng.standard_normal(dims)
    truth = BarycentricModel(nodes, alpha, beta)

    points = rng.uniform(lo, hi, size=(K, d))
    redraws = 0
    while True:
        _, d_values = numer_denom_batch(truth, points)
        bad = np.flatnonzero(np.abs(d_values) < DENOM_FLOOR)
        if bad.size == 0:
            break
        redraws += bad.size
        if redraws > MAX_REDRAWS:
            raise GenerationError(
                f"Denominator stayed below {DENOM_FLOOR} after {MAX_REDRAWS} redraws"
            )
        points[bad] = rng.uniform(lo, hi, size=(bad.size, d))
    if redraws:
        LOGGER.debug(f"gen_rational_fixture: redrew {redraws} sample point(s)")
    n_values, d_values = numer_denom_batch(truth, points)
    return SampleSet(points, n_values / d_values), truth
