"""Response-ordered slicing and the conditional-mean covariance estimator.

Samples are sorted by response (stable, so ties keep original order) and cut
into H contiguous near-equal slices. The slice means feed the rank-<=H
conditional covariance estimate; nested sub-slice means drive an empirical
sliced-stability diagnostic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curves import Curve, FunctionalSample, _require_shared_grid
from .errors import DegenerateSignalError
from .operators import OperatorMatrix, _second_moment_kernel

__all__ = [
    "SlicedPartition",
    "SliceMeans",
    "slice_sample",
    "slice_means",
    "gamma_e_hat",
    "wssc_ratio",
]


def _block_sizes(n: int, H: int) -> np.ndarray:
    """H contiguous block sizes covering n items, larger blocks first."""
    q, r = divmod(n, H)
    sizes = np.full(H, q, dtype=np.int64)
    sizes[:r] += 1
    return sizes


@dataclass(frozen=True, eq=False)
class SlicedPartition:
    """Assignment of samples to H response-ordered slices.

    ``order`` is the stable response sort that produced the slices;
    ``boundaries`` are the largest responses of slices 1..H-1.
    """

    H: int
    assignment: np.ndarray
    slice_sizes: np.ndarray
    boundaries: np.ndarray
    order: np.ndarray

    @property
    def n(self) -> int:
        return int(self.assignment.size)


def slice_sample(s: FunctionalSample, H: int) -> SlicedPartition:
    """Partition a sample into H near-equal slices by response order."""
    if H < 2:
        raise ValueError(f"slice count must be >= 2, got {H}")
    if H > s.n:
        raise ValueError(f"slice count {H} exceeds sample size {s.n}")
    order = np.argsort(s.responses, kind="stable")
    sizes = _block_sizes(s.n, H)
    ends = np.cumsum(sizes)
    assignment = np.empty(s.n, dtype=np.int64)
    assignment[order] = np.repeat(np.arange(H), sizes)
    boundaries = s.responses[order[ends[:-1] - 1]]
    return SlicedPartition(
        H=H,
        assignment=assignment,
        slice_sizes=sizes,
        boundaries=boundaries,
        order=order,
    )


@dataclass(frozen=True, eq=False)
class SliceMeans:
    """Pointwise mean curve of each slice."""

    curves: tuple[Curve, ...]
    slice_sizes: np.ndarray

    @property
    def H(self) -> int:
        return len(self.curves)

    def matrix(self) -> np.ndarray:
        return np.stack([c.values for c in self.curves])


def slice_means(s: FunctionalSample, p: SlicedPartition) -> SliceMeans:
    """Per-slice pointwise means of the sample curves."""
    if p.n != s.n:
        raise ValueError("partition was built from a different sample size")
    starts = np.concatenate(([0], np.cumsum(p.slice_sizes)[:-1]))
    sums = np.add.reduceat(s.values[p.order], starts, axis=0)
    means = sums / p.slice_sizes[:, None]
    return SliceMeans(
        curves=tuple(Curve(grid=s.grid, values=m) for m in means),
        slice_sizes=p.slice_sizes,
    )


def gamma_e_hat(means: SliceMeans) -> OperatorMatrix:
    """Conditional-mean covariance estimate (1/H) sum_h mean_h (x) mean_h.

    Expects means of a centered sample; the result is PSD with rank <= H.
    """
    grid = means.curves[0].grid
    kernel = _second_moment_kernel(means.matrix(), 1.0 / means.H)
    return OperatorMatrix(grid=grid, kernel=kernel)


def wssc_ratio(s: FunctionalSample, H: int, H_sub: int, u: Curve) -> float:
    """Empirical sliced-stability ratio of the projection onto ``u``.

    The unobservable central curve is proxied by nested sub-slice means:
    each of the H response slices is split into H_sub sub-slices, and the
    ratio compares the average within-slice variance of the projected
    sub-slice means to their overall variance. Values near 0 mean the
    projection is nearly constant within slices (strong signal direction);
    values near 1 mean slicing explains nothing (noise direction).
    """
    if H_sub < 1:
        raise ValueError(f"sub-slice count must be >= 1, got {H_sub}")
    if H * H_sub > s.n:
        raise ValueError(f"H * H_sub = {H * H_sub} exceeds sample size {s.n}")
    _require_shared_grid(s.grid, u.grid)

    # Projection is linear, so sub-slice means of curves project to means of
    # per-sample projections.
    proj = s.values @ (s.grid.weights * u.values)
    order = np.argsort(s.responses, kind="stable")
    proj_sorted = proj[order]

    slice_sizes = _block_sizes(s.n, H)
    slice_starts = np.concatenate(([0], np.cumsum(slice_sizes)[:-1]))
    sub_sizes = np.concatenate([_block_sizes(int(c), H_sub) for c in slice_sizes])
    sub_starts = np.repeat(slice_starts, H_sub) + np.concatenate(
        [np.concatenate(([0], np.cumsum(sz)[:-1])) for sz in np.split(sub_sizes, H)]
    )
    sums = np.add.reduceat(proj_sorted, sub_starts)
    sub_means = (sums / sub_sizes).reshape(H, H_sub)

    overall_var = float(np.var(sub_means))
    if overall_var <= 0.0:
        raise DegenerateSignalError("sub-slice means have zero variance along u")
    within_var = float(np.mean(np.var(sub_means, axis=1)))
    return within_var / overall_var
