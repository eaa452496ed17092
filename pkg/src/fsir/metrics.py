"""Distance between subspaces of the discretized function space.

The distance between two spans is the operator norm of the difference of
their L2 orthogonal projections, computed spectrally in sqrt-weight
coordinates where the discrete projectors are plain symmetric matrices.
For equal dimensions this equals the sine of the largest principal angle.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .curves import Curve, _require_shared_grid
from .errors import RankDeficiencyError

__all__ = ["SubspaceBasis", "orthonormalize", "effective_span", "subspace_error"]

_INDEPENDENCE_TOL = 1e-10


class SubspaceBasis:
    """Curves spanning a subspace, with a lazily cached orthonormal basis.

    Inputs need not be orthonormal, but must be linearly independent under
    the L2 inner product; dependence is detected (and raised) when the
    orthonormalization is first computed.
    """

    def __init__(self, curves: Sequence[Curve]):
        if len(curves) == 0:
            raise ValueError("basis needs at least one curve")
        grid = curves[0].grid
        for c in curves[1:]:
            _require_shared_grid(grid, c.grid)
        self.curves = tuple(curves)
        self.grid = grid
        self._orthonormal: SubspaceBasis | None = None

    @property
    def dim(self) -> int:
        return len(self.curves)

    def weighted_matrix(self) -> np.ndarray:
        """Row-stacked curve values in sqrt-weight coordinates, shape (k, G)."""
        sw = self.grid._sqrt_weights
        return np.stack([c.values for c in self.curves]) * sw[None, :]

    def orthonormal(self) -> "SubspaceBasis":
        if self._orthonormal is None:
            self._orthonormal = orthonormalize(self)
        return self._orthonormal


def orthonormalize(basis: SubspaceBasis) -> SubspaceBasis:
    """Modified Gram-Schmidt under the L2 inner product.

    Raises :class:`RankDeficiencyError` when the normalized curves' Gram
    matrix has a singular value at or below 1e-10.
    """
    V = basis.weighted_matrix()
    norms = np.linalg.norm(V, axis=1)
    if np.any(norms <= 0.0):
        raise RankDeficiencyError("basis contains a zero curve")
    V = V / norms[:, None]
    gram = V @ V.T
    min_sv = float(np.linalg.eigvalsh(gram)[0])
    if min_sv <= _INDEPENDENCE_TOL:
        raise RankDeficiencyError(
            f"basis curves are linearly dependent (min Gram eigenvalue {min_sv:.3e})"
        )
    # MGS with one re-orthogonalization pass keeps orthogonality near machine
    # precision even for marginally conditioned inputs.
    Q = np.empty_like(V)
    for i in range(V.shape[0]):
        v = V[i].copy()
        for _ in range(2):
            for j in range(i):
                v -= np.dot(Q[j], v) * Q[j]
        v /= np.linalg.norm(v)
        Q[i] = v
    sw = basis.grid._sqrt_weights
    out = SubspaceBasis([Curve(grid=basis.grid, values=q / sw) for q in Q])
    out._orthonormal = out
    return out


def effective_span(basis: SubspaceBasis, rel_tol: float = 1e-8) -> SubspaceBasis:
    """Orthonormal basis of the numerically independent span of the curves.

    Unlike :func:`orthonormalize`, dependent directions are dropped (smallest
    singular directions first) instead of raising, so rank-collapsed
    direction sets from degenerate fits still yield their actual span,
    possibly of lower dimension.
    """
    V = basis.weighted_matrix()
    _, svals, Vt = np.linalg.svd(V, full_matrices=False)
    if svals[0] <= 0.0:
        raise RankDeficiencyError("all curves are zero")
    rows = Vt[svals > rel_tol * svals[0]]
    sw = basis.grid._sqrt_weights
    out = SubspaceBasis([Curve(grid=basis.grid, values=r / sw) for r in rows])
    out._orthonormal = out
    return out


def subspace_error(a: SubspaceBasis, b: SubspaceBasis) -> float:
    """Operator norm of the difference of the two span projectors, in [0, 1]."""
    Qa = a.orthonormal().weighted_matrix()
    Qb = b.orthonormal().weighted_matrix()
    diff = Qa.T @ Qa - Qb.T @ Qb
    return float(np.abs(np.linalg.eigvalsh(diff)).max())
