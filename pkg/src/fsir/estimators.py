"""Central-space estimation for multiple-index functional regression.

The pipeline: center the curves, slice them by response order, form the
conditional-mean covariance from the slice means, take its top-d
eigenfunctions, and map them back through an inverse of the predictor
covariance. The covariance inverse is either a spectral truncation at
level m (with m growing like n^(1/(alpha+2*beta)) under the usual decay
conditions) or a ridge-regularized solve, which serves as the baseline.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .curves import Curve, FunctionalSample, center_sample, inner_product, _require_shared_grid
from .errors import RankDeficiencyWarning
from .operators import OperatorMatrix, _second_moment_kernel, _top_eigs_weighted
from .slicing import gamma_e_hat, slice_means, slice_sample

__all__ = [
    "FsirConfig",
    "CentralSpaceEstimate",
    "fit_fsir",
    "fit_rfsir",
    "fit_fsir_sweep",
    "fit_rfsir_sweep",
    "inverse_regression_space",
    "reduce",
]

_RANK_TOL = 1e-12


@dataclass(frozen=True)
class FsirConfig:
    """Tuning for one central-space fit.

    The truncation level is either explicit (``m``) or derived from the
    covariance/index decay exponents via m = round(c_m * n^(1/(alpha+2*beta))),
    floored at d. ``method`` selects spectral truncation or the ridge
    baseline (which requires ``rho``).
    """

    d: int
    H: int = 10
    m: int | None = None
    alpha: float | None = None
    beta: float | None = None
    c_m: float = 1.0
    method: str = "truncated"
    rho: float | None = None
    rel_floor: float = 1e-10

    def __post_init__(self):
        if self.d < 1:
            raise ValueError(f"structural dimension must be >= 1, got {self.d}")
        if self.H < self.d:
            raise ValueError(f"need H >= d, got H={self.H}, d={self.d}")
        if not 0.0 <= self.rel_floor < 1.0:
            raise ValueError(f"rel_floor must be in [0, 1), got {self.rel_floor}")
        if self.method not in ("truncated", "ridge"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.method == "ridge":
            if self.rho is None or self.rho <= 0:
                raise ValueError("ridge method requires rho > 0")
            return
        if self.m is not None:
            if self.m < self.d:
                raise ValueError(f"need m >= d, got m={self.m}, d={self.d}")
        else:
            if self.alpha is None or self.beta is None:
                raise ValueError("truncated method needs explicit m or (alpha, beta)")
            if self.alpha <= 1:
                raise ValueError(f"alpha must exceed 1, got {self.alpha}")
            if self.beta <= self.alpha / 2 + 1:
                raise ValueError(
                    f"beta must exceed alpha/2 + 1, got alpha={self.alpha}, beta={self.beta}"
                )
            if self.c_m <= 0:
                raise ValueError(f"c_m must be positive, got {self.c_m}")

    def resolve_m(self, n: int) -> int:
        """Truncation level for a sample of size n."""
        if self.m is not None:
            return self.m
        exponent = 1.0 / (self.alpha + 2.0 * self.beta)
        return max(self.d, int(round(self.c_m * n ** exponent)))


@dataclass(frozen=True, eq=False)
class CentralSpaceEstimate:
    """Estimated central-space directions plus the intermediate eigen-objects.

    ``eta_hat`` spans the estimated inverse regression subspace (top-d
    eigenfunctions of the conditional-mean covariance); ``directions`` are
    those curves mapped through the covariance inverse.
    """

    directions: tuple[Curve, ...]
    eta_hat: tuple[Curve, ...]
    gamma_e_eigenvalues: np.ndarray
    m_used: int
    diagnostics: dict = field(default_factory=dict)

    @property
    def d(self) -> int:
        return len(self.directions)

    def direction_matrix(self) -> np.ndarray:
        return np.stack([c.values for c in self.directions])


class _PipelineState:
    """Shared intermediates: centered sample, slice means, eta_hat, covariance."""

    def __init__(self, s: FunctionalSample, H: int, d: int):
        if H > s.n:
            raise ValueError(f"slice count {H} exceeds sample size {s.n}")
        z = center_sample(s)
        partition = slice_sample(z, H)
        means = slice_means(z, partition)
        gamma_e = gamma_e_hat(means)
        e_vals, e_funcs = _top_eigs_weighted(gamma_e, d)
        rank_deficient = e_vals[0] <= 0.0 or e_vals[-1] <= _RANK_TOL * max(e_vals[0], 0.0)
        if rank_deficient:
            warnings.warn(
                "conditional-mean covariance has numerical rank below d; "
                "padding with its next eigenfunctions",
                RankDeficiencyWarning,
                stacklevel=3,
            )
        self.grid = s.grid
        self.n = s.n
        self.centered_values = z.values
        self.eta_vals = e_vals
        self.eta = e_funcs  # (d, G)
        self.gamma_e_rank_deficient = bool(rank_deficient)
        self._cov = None
        self._cov_eigs = None

    def covariance(self) -> OperatorMatrix:
        if self._cov is None:
            self._cov = OperatorMatrix(
                grid=self.grid,
                kernel=_second_moment_kernel(self.centered_values, 1.0 / self.n),
            )
        return self._cov

    def covariance_eigs(self, k: int) -> tuple[np.ndarray, np.ndarray]:
        if self._cov_eigs is None or self._cov_eigs[0].size < k:
            self._cov_eigs = _top_eigs_weighted(self.covariance(), k)
        vals, funcs = self._cov_eigs
        return vals[:k], funcs[:k]

    def eta_curves(self) -> tuple[Curve, ...]:
        return tuple(Curve(grid=self.grid, values=v) for v in self.eta)


def _finish_truncated(state: _PipelineState, m: int, rel_floor: float) -> CentralSpaceEstimate:
    vals, funcs = state.covariance_eigs(m)
    lead = float(vals[0])
    diagnostics = {
        "method": "truncated",
        "gamma_e_rank_deficient": state.gamma_e_rank_deficient,
        "covariance_degenerate": lead <= 0.0,
    }
    if lead <= 0.0:
        warnings.warn(
            "predictor covariance is degenerate; returning uninverted directions",
            RankDeficiencyWarning,
            stacklevel=3,
        )
        directions = state.eta
        diagnostics.update(retained_rank=0, condition_number=np.nan)
    else:
        r = m
        while r > 0 and vals[r - 1] <= rel_floor * lead:
            r -= 1
        kept_vals = vals[:r]
        kept = funcs[:r]
        proj = (kept * state.grid.weights[None, :]) @ state.eta.T  # (r, d)
        directions = (proj / kept_vals[:, None]).T @ kept
        diagnostics.update(
            retained_rank=int(r),
            condition_number=float(kept_vals[0] / kept_vals[-1]),
        )
    return CentralSpaceEstimate(
        directions=tuple(Curve(grid=state.grid, values=v) for v in directions),
        eta_hat=state.eta_curves(),
        gamma_e_eigenvalues=state.eta_vals,
        m_used=m,
        diagnostics=diagnostics,
    )


def _finish_ridge(state: _PipelineState, rho: float) -> CentralSpaceEstimate:
    sw = state.grid._sqrt_weights
    shifted = state.covariance().weighted()
    shifted[np.diag_indices_from(shifted)] += rho
    factor = scipy.linalg.cho_factor(shifted, lower=True)
    rhs = (state.eta * sw[None, :]).T  # (G, d)
    directions = (scipy.linalg.cho_solve(factor, rhs) / sw[:, None]).T
    return CentralSpaceEstimate(
        directions=tuple(Curve(grid=state.grid, values=v) for v in directions),
        eta_hat=state.eta_curves(),
        gamma_e_eigenvalues=state.eta_vals,
        m_used=0,
        diagnostics={
            "method": "ridge",
            "rho": float(rho),
            "gamma_e_rank_deficient": state.gamma_e_rank_deficient,
        },
    )


def fit_fsir(s: FunctionalSample, cfg: FsirConfig) -> CentralSpaceEstimate:
    """Estimate the central space of a sample under the given configuration."""
    state = _PipelineState(s, cfg.H, cfg.d)
    if cfg.method == "ridge":
        return _finish_ridge(state, cfg.rho)
    return _finish_truncated(state, cfg.resolve_m(s.n), cfg.rel_floor)


def fit_rfsir(s: FunctionalSample, cfg: FsirConfig) -> CentralSpaceEstimate:
    """Ridge-regularized variant; ``cfg`` must use the ridge method."""
    if cfg.method != "ridge":
        raise ValueError("fit_rfsir requires a ridge configuration")
    return fit_fsir(s, cfg)


def fit_fsir_sweep(
    s: FunctionalSample, cfg: FsirConfig, m_values: list[int]
) -> list[CentralSpaceEstimate]:
    """Truncated fits for several m, sharing the per-sample eigenstructure.

    Each element is identical to ``fit_fsir`` with that m substituted into
    the configuration.
    """
    if not m_values:
        raise ValueError("m_values must be non-empty")
    if min(m_values) < cfg.d:
        raise ValueError("all m values must be >= d")
    state = _PipelineState(s, cfg.H, cfg.d)
    state.covariance_eigs(max(m_values))
    return [_finish_truncated(state, m, cfg.rel_floor) for m in m_values]


def fit_rfsir_sweep(
    s: FunctionalSample, cfg: FsirConfig, rho_values: list[float]
) -> list[CentralSpaceEstimate]:
    """Ridge fits for several rho, sharing the per-sample covariance."""
    if not rho_values:
        raise ValueError("rho_values must be non-empty")
    if min(rho_values) <= 0:
        raise ValueError("all rho values must be positive")
    state = _PipelineState(s, cfg.H, cfg.d)
    return [_finish_ridge(state, rho) for rho in rho_values]


def inverse_regression_space(s: FunctionalSample, H: int, d: int) -> tuple[Curve, ...]:
    """Top-d eigenfunctions of the conditional-mean covariance (no inversion)."""
    if H < d:
        raise ValueError(f"need H >= d, got H={H}, d={d}")
    return _PipelineState(s, H, d).eta_curves()


def reduce(est: CentralSpaceEstimate, f: Curve) -> np.ndarray:
    """Coordinates of a curve against the estimated directions."""
    _require_shared_grid(est.directions[0].grid, f.grid)
    return np.array([inner_product(b, f) for b in est.directions])
