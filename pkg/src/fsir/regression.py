"""Gaussian-process scorer for reduced predictors.

A squared-exponential-kernel GP with hyperparameters picked by log marginal
likelihood over a small deterministic grid anchored at the median pairwise
distance. Used to turn a dimension reduction into an out-of-sample MSE.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.spatial.distance import cdist, pdist

__all__ = ["GpModel", "fit_gp", "predict", "mse"]

_JITTER = 1e-8


@dataclass(frozen=True, eq=False)
class GpModel:
    """Fitted GP: training inputs, centered-target solve, and hyperparameters."""

    x_train: np.ndarray
    y_mean: float
    alpha: np.ndarray | None  # (K + sigma_n^2 I)^-1 (y - y_mean); None for constant model
    length_scale: float
    signal_var: float
    noise_var: float
    log_marginal_likelihood: float


def _kernel(a: np.ndarray, b: np.ndarray, length_scale: float, signal_var: float) -> np.ndarray:
    sq = cdist(a, b, metric="sqeuclidean")
    return signal_var * np.exp(-sq / (2.0 * length_scale ** 2))


def _as_2d(x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    if x.ndim != 2:
        raise ValueError(f"inputs must be (n, d), got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError("inputs must be finite")
    return x


def _default_grid(x: np.ndarray, y_var: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    dists = pdist(x)
    positive = dists[dists > 0]
    median = float(np.median(positive)) if positive.size else 1.0
    length_scales = median * np.geomspace(0.25, 4.0, 7)
    signal_vars = y_var * np.array([0.25, 1.0, 4.0])
    noise_vars = y_var * np.array([1e-4, 1e-3, 1e-2, 1e-1])
    return length_scales, signal_vars, noise_vars


def fit_gp(x, y, hp_grid: dict | None = None) -> GpModel:
    """Fit by grid-searched marginal likelihood.

    ``hp_grid`` may override any of the keys ``length_scale``,
    ``signal_var``, ``noise_var`` with explicit candidate lists. Constant
    targets short-circuit to a constant predictor.
    """
    x = _as_2d(x)
    y = np.asarray(y, dtype=np.float64)
    n = x.shape[0]
    if y.shape != (n,):
        raise ValueError("y must be 1-d with one entry per input row")
    if n < 3:
        raise ValueError(f"need at least 3 training points, got {n}")
    if not np.all(np.isfinite(y)):
        raise ValueError("targets must be finite")

    y_mean = float(y.mean())
    y_var = float(y.var())
    if y_var == 0.0:
        return GpModel(
            x_train=x, y_mean=y_mean, alpha=None,
            length_scale=1.0, signal_var=0.0, noise_var=0.0,
            log_marginal_likelihood=np.nan,
        )

    length_scales, signal_vars, noise_vars = _default_grid(x, y_var)
    if hp_grid:
        length_scales = np.asarray(hp_grid.get("length_scale", length_scales), dtype=np.float64)
        signal_vars = np.asarray(hp_grid.get("signal_var", signal_vars), dtype=np.float64)
        noise_vars = np.asarray(hp_grid.get("noise_var", noise_vars), dtype=np.float64)

    yc = y - y_mean
    best = None
    for ls in length_scales:
        base = _kernel(x, x, ls, 1.0)
        for sf in signal_vars:
            K = sf * base
            diag = sf * (1.0 + _JITTER)
            for sn in noise_vars:
                Kn = K.copy()
                Kn[np.diag_indices_from(Kn)] = diag + sn
                try:
                    factor = scipy.linalg.cho_factor(Kn, lower=True)
                except scipy.linalg.LinAlgError:
                    continue
                alpha = scipy.linalg.cho_solve(factor, yc)
                logdet = 2.0 * float(np.log(np.diag(factor[0])).sum())
                lml = -0.5 * float(yc @ alpha) - 0.5 * logdet - 0.5 * n * np.log(2.0 * np.pi)
                if best is None or lml > best[0]:
                    best = (lml, float(ls), float(sf), float(sn), alpha)
    if best is None:
        raise scipy.linalg.LinAlgError("no hyperparameter candidate yielded a PD kernel")
    lml, ls, sf, sn, alpha = best
    return GpModel(
        x_train=x, y_mean=y_mean, alpha=alpha,
        length_scale=ls, signal_var=sf, noise_var=sn,
        log_marginal_likelihood=lml,
    )


def predict(model: GpModel, x_new) -> np.ndarray:
    """Posterior mean at new inputs."""
    x_new = _as_2d(x_new)
    if x_new.shape[1] != model.x_train.shape[1]:
        raise ValueError(
            f"dimension mismatch: model fitted on d={model.x_train.shape[1]}, "
            f"got d={x_new.shape[1]}"
        )
    if model.alpha is None:
        return np.full(x_new.shape[0], model.y_mean)
    k_star = _kernel(x_new, model.x_train, model.length_scale, model.signal_var)
    return k_star @ model.alpha + model.y_mean


def mse(pred, truth) -> float:
    """Mean squared difference."""
    pred = np.asarray(pred, dtype=np.float64)
    truth = np.asarray(truth, dtype=np.float64)
    if pred.shape != truth.shape:
        raise ValueError(f"length mismatch: {pred.shape} vs {truth.shape}")
    return float(np.mean((pred - truth) ** 2))
