"""Self-adjoint operator algebra on the discretized function space.

An operator is stored as a G x G kernel K acting by (Kf)_i = sum_j w_j
K_ij f_j. All spectral computations go through the similarity transform
B = D K D with D = diag(sqrt(w)): B is plain-symmetric, so standard dense
eigensolvers apply, and eigenvectors map back to L2-orthonormal
eigenfunctions by dividing out sqrt(w).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg

from .curves import Curve, Grid, _readonly, _require_shared_grid
from .errors import DegenerateOperatorError

__all__ = [
    "OperatorMatrix",
    "EigenSystem",
    "outer_product_average",
    "apply",
    "eig_top",
    "truncated_pinv",
    "ridge_inverse_apply",
    "operator_norm",
]

_SYMMETRY_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Symmetric kernel of a self-adjoint operator on the grid's L2 space."""

    grid: Grid
    kernel: np.ndarray

    def __post_init__(self):
        kernel = np.asarray(self.kernel, dtype=np.float64)
        G = self.grid.size
        if kernel.shape != (G, G):
            raise ValueError(f"kernel must have shape ({G}, {G}), got {kernel.shape}")
        if not np.all(np.isfinite(kernel)):
            raise ValueError("kernel entries must be finite")
        scale = max(1.0, float(np.abs(kernel).max()))
        if float(np.abs(kernel - kernel.T).max()) > _SYMMETRY_TOL * scale:
            raise ValueError("kernel is not symmetric within tolerance")
        # Exact symmetry keeps eigh deterministic downstream.
        object.__setattr__(self, "kernel", _readonly((kernel + kernel.T) / 2.0))

    def weighted(self) -> np.ndarray:
        """Kernel in sqrt-weight coordinates: D K D with D = diag(sqrt(w))."""
        sw = self.grid._sqrt_weights
        return sw[:, None] * self.kernel * sw[None, :]


@dataclass(frozen=True, eq=False)
class EigenSystem:
    """Leading eigenpairs of a self-adjoint operator.

    Eigenvalues are non-increasing; eigenfunctions are orthonormal under the
    grid inner product, each with its largest-magnitude entry positive.
    """

    values: np.ndarray
    functions: tuple[Curve, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", _readonly(self.values))
        if self.values.ndim != 1 or len(self.functions) != self.values.size:
            raise ValueError("one eigenfunction per eigenvalue required")
        if np.any(np.diff(self.values) > 0):
            raise ValueError("eigenvalues must be non-increasing")
        grid = self.functions[0].grid
        F = self.function_matrix()
        gram = (F * grid.weights[None, :]) @ F.T
        if float(np.abs(gram - np.eye(len(self.functions))).max()) > 1e-8:
            raise ValueError("eigenfunctions are not orthonormal within 1e-8")

    def function_matrix(self) -> np.ndarray:
        """Eigenfunction values stacked as rows, shape (k, G)."""
        return np.stack([f.values for f in self.functions])


def _second_moment_kernel(values: np.ndarray, scale: float, chunk: int = 65536) -> np.ndarray:
    """scale * V^T V accumulated over fixed-size row chunks (deterministic order)."""
    n, G = values.shape
    acc = np.zeros((G, G))
    for start in range(0, n, chunk):
        block = values[start : start + chunk]
        acc += block.T @ block
    acc *= scale
    return (acc + acc.T) / 2.0


def outer_product_average(curves: Sequence[Curve], scale: float) -> OperatorMatrix:
    """Kernel scale * sum_m c_m(s) c_m(t) of the curves' outer products.

    With scale = 1/n this is the second-moment (covariance, once centered)
    operator of the curve set.
    """
    if len(curves) == 0:
        raise ValueError("need at least one curve")
    grid = curves[0].grid
    for c in curves[1:]:
        _require_shared_grid(grid, c.grid)
    values = np.stack([c.values for c in curves])
    return OperatorMatrix(grid=grid, kernel=_second_moment_kernel(values, scale))


def apply(op: OperatorMatrix, f: Curve) -> Curve:
    """Act on a curve: (Kf)_i = sum_j w_j K_ij f_j."""
    _require_shared_grid(op.grid, f.grid)
    return Curve(grid=op.grid, values=op.kernel @ (op.grid.weights * f.values))


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Flip rows so each one's largest-magnitude entry is positive."""
    out = vectors.copy()
    for i in range(out.shape[0]):
        j = int(np.argmax(np.abs(out[i])))
        if out[i, j] < 0:
            out[i] = -out[i]
    return out


def _top_eigs_weighted(op: OperatorMatrix, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Top-k eigenvalues and row-stacked eigenfunctions (in raw coordinates)."""
    G = op.grid.size
    if not 1 <= k <= G:
        raise ValueError(f"k must be in [1, {G}], got {k}")
    w_vals, w_vecs = np.linalg.eigh(op.weighted())
    order = np.argsort(w_vals, kind="stable")[::-1][:k]
    funcs = _fix_signs(w_vecs[:, order].T / op.grid._sqrt_weights[None, :])
    return w_vals[order], funcs


def eig_top(op: OperatorMatrix, k: int) -> EigenSystem:
    """Top-k eigenpairs under the weighted inner product."""
    vals, funcs = _top_eigs_weighted(op, k)
    return EigenSystem(
        values=vals,
        functions=tuple(Curve(grid=op.grid, values=v) for v in funcs),
    )


def _retained_count(values: np.ndarray, m: int, rel_floor: float) -> int:
    """Directions kept by the truncation rule: i <= m and lambda_i above the floor."""
    lead = float(values[0])
    if lead <= 0.0:
        raise DegenerateOperatorError("operator has no positive leading eigenvalue")
    r = min(m, values.size)
    while r > 0 and values[r - 1] <= rel_floor * lead:
        r -= 1
    return r


def truncated_pinv(op: OperatorMatrix, m: int, rel_floor: float = 1e-10) -> OperatorMatrix:
    """Spectral pseudo-inverse truncated at rank m.

    Keeps eigendirections i <= m with lambda_i > rel_floor * lambda_1 and
    inverts the operator on their span; everything else maps to zero.
    """
    vals, funcs = _top_eigs_weighted(op, m)
    r = _retained_count(vals, m, rel_floor)
    kept_vals = vals[:r]
    kept = funcs[:r]
    kernel = (kept.T / kept_vals) @ kept
    return OperatorMatrix(grid=op.grid, kernel=kernel)


def ridge_inverse_apply(op: OperatorMatrix, rho: float, f: Curve) -> Curve:
    """Solve (op + rho * I) g = f, with I the identity operator on functions.

    Raises ``scipy.linalg.LinAlgError`` if the shifted operator is not
    positive definite (op far from PSD and rho too small).
    """
    if rho <= 0:
        raise ValueError(f"rho must be positive, got {rho}")
    _require_shared_grid(op.grid, f.grid)
    sw = op.grid._sqrt_weights
    shifted = op.weighted()
    shifted[np.diag_indices_from(shifted)] += rho
    rhs = sw * f.values
    sol = scipy.linalg.cho_solve(scipy.linalg.cho_factor(shifted, lower=True), rhs)
    return Curve(grid=op.grid, values=sol / sw)


def operator_norm(op: OperatorMatrix) -> float:
    """Largest absolute eigenvalue under the weighted inner product."""
    return float(np.abs(np.linalg.eigvalsh(op.weighted())).max())
