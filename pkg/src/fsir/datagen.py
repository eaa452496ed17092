"""Seeded synthetic samplers for the three benchmark regression models.

Model I: linear single index, predictor built on the cosine basis with
polynomially decaying coefficient variances. Models II and III: standard
Brownian motion predictor (truncated spectral expansion), with a
linear-plus-cubic double index and an exponential single index. Responses
are computed in coefficient space, where the basis is exactly orthonormal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curves import Curve, FunctionalSample, Grid, bm_kl_basis, cosine_basis
from .metrics import SubspaceBasis
from .rng import standard_normal, stream

__all__ = [
    "ModelSpec",
    "GroundTruth",
    "gen_model_i",
    "gen_model_ii",
    "gen_model_iii",
    "generate",
    "gamma_times",
    "inverse_regression_truth",
    "model_i_direction_coeffs",
]

MODELS = ("I", "II", "III")


@dataclass(frozen=True)
class ModelSpec:
    """Recipe for one synthetic sample draw."""

    model: str
    n: int
    grid: Grid
    seed: int
    noise_scale: float = 0.01
    kl_terms: int = 100

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"unknown model {self.model!r}")
        if self.n < 2:
            raise ValueError(f"sample size must be >= 2, got {self.n}")
        if self.noise_scale < 0:
            raise ValueError("noise_scale must be non-negative")
        if self.kl_terms < 1:
            raise ValueError("kl_terms must be >= 1")


@dataclass(frozen=True, eq=False)
class GroundTruth:
    """True index directions and, when defined, the decay exponents."""

    directions: SubspaceBasis
    d: int
    alpha: float | None = None
    beta: float | None = None


def model_i_direction_coeffs(kl_terms: int) -> np.ndarray:
    """Cosine-basis coefficients (-1)^j j^-2 of the model-I index direction."""
    j = np.arange(1, kl_terms + 1, dtype=np.float64)
    signs = np.where(j.astype(np.int64) % 2 == 0, 1.0, -1.0)
    return signs * j ** -2.0


def _cosine_matrix(kl_terms: int, grid: Grid) -> np.ndarray:
    return np.stack([cosine_basis(j, grid).values for j in range(1, kl_terms + 1)])


def _bm_matrix(kl_terms: int, grid: Grid) -> tuple[np.ndarray, np.ndarray]:
    pairs = [bm_kl_basis(k, grid) for k in range(1, kl_terms + 1)]
    basis = np.stack([c.values for c, _ in pairs])
    lams = np.array([lam for _, lam in pairs])
    return basis, lams


def gen_model_i(spec: ModelSpec) -> tuple[FunctionalSample, GroundTruth]:
    """Linear single-index model on the cosine basis.

    X = sum_j j^(-3/4) Z_j phi_j with Z_j iid standard normal, and
    Y = <beta_1, X> + noise, beta_1 as in :func:`model_i_direction_coeffs`
    (truncated at kl_terms). Decay exponents: alpha = 3/2, beta = 2.
    """
    if spec.model != "I":
        raise ValueError("spec is not for model I")
    gen = stream(spec.seed)
    k = spec.kl_terms
    basis = _cosine_matrix(k, spec.grid)
    scales = np.arange(1, k + 1, dtype=np.float64) ** -0.75
    coeffs = standard_normal(gen, (spec.n, k)) * scales
    b = model_i_direction_coeffs(k)
    responses = coeffs @ b
    if spec.noise_scale > 0:
        responses = responses + spec.noise_scale * standard_normal(gen, spec.n)
    sample = FunctionalSample(
        grid=spec.grid,
        values=coeffs @ basis,
        responses=responses,
        meta={"model": "I", "seed": spec.seed, "n": spec.n},
    )
    truth = GroundTruth(
        directions=SubspaceBasis([Curve(grid=spec.grid, values=b @ basis)]),
        d=1,
        alpha=1.5,
        beta=2.0,
    )
    return sample, truth


def _gen_bm_model(spec: ModelSpec, signal) -> tuple[FunctionalSample, np.ndarray]:
    if spec.kl_terms < 3:
        raise ValueError("Brownian-motion models need kl_terms >= 3")
    gen = stream(spec.seed)
    basis, lams = _bm_matrix(spec.kl_terms, spec.grid)
    coeffs = standard_normal(gen, (spec.n, spec.kl_terms)) * np.sqrt(lams)
    responses = signal(coeffs)
    if spec.noise_scale > 0:
        responses = responses + spec.noise_scale * standard_normal(gen, spec.n)
    sample = FunctionalSample(
        grid=spec.grid,
        values=coeffs @ basis,
        responses=responses,
        meta={"model": spec.model, "seed": spec.seed, "n": spec.n},
    )
    return sample, basis


def gen_model_ii(spec: ModelSpec) -> tuple[FunctionalSample, GroundTruth]:
    """Double-index Brownian-motion model.

    Y = <beta_1, X> + 100 <beta_2, X>^3 + noise with beta_1 = sqrt(2) sin(3 pi t / 2)
    and beta_2 = sqrt(2) sin(5 pi t / 2): the 2nd and 3rd eigenfunctions of the
    Brownian covariance, so the index projections are the matching KL scores.
    """
    if spec.model != "II":
        raise ValueError("spec is not for model II")
    sample, basis = _gen_bm_model(spec, lambda c: c[:, 1] + 100.0 * c[:, 2] ** 3)
    truth = GroundTruth(
        directions=SubspaceBasis(
            [Curve(grid=spec.grid, values=basis[1]), Curve(grid=spec.grid, values=basis[2])]
        ),
        d=2,
    )
    return sample, truth


def gen_model_iii(spec: ModelSpec) -> tuple[FunctionalSample, GroundTruth]:
    """Exponential single-index Brownian-motion model: Y = exp(<beta, X>) + noise."""
    if spec.model != "III":
        raise ValueError("spec is not for model III")
    sample, basis = _gen_bm_model(spec, lambda c: np.exp(c[:, 1]))
    truth = GroundTruth(
        directions=SubspaceBasis([Curve(grid=spec.grid, values=basis[1])]),
        d=1,
    )
    return sample, truth


_GENERATORS = {"I": gen_model_i, "II": gen_model_ii, "III": gen_model_iii}


def generate(spec: ModelSpec) -> tuple[FunctionalSample, GroundTruth]:
    """Dispatch to the sampler for ``spec.model``."""
    return _GENERATORS[spec.model](spec)


def gamma_times(beta: Curve, model: str, kl_terms: int = 100) -> Curve:
    """Action of the model's predictor covariance on a curve.

    Models II and III use quadrature against the Brownian kernel min(s, t);
    model I uses the diagonal spectral form (coefficient j scaled by
    j^(-3/2)) in the cosine basis, truncated at ``kl_terms``.
    """
    if model not in MODELS:
        raise ValueError(f"unknown model {model!r}")
    grid = beta.grid
    if model == "I":
        basis = _cosine_matrix(kl_terms, grid)
        proj = (basis * grid.weights[None, :]) @ beta.values
        lams = np.arange(1, kl_terms + 1, dtype=np.float64) ** -1.5
        return Curve(grid=grid, values=(proj * lams) @ basis)
    kernel = np.minimum.outer(grid.nodes, grid.nodes)
    return Curve(grid=grid, values=kernel @ (grid.weights * beta.values))


def inverse_regression_truth(truth: GroundTruth, model: str, kl_terms: int = 100) -> SubspaceBasis:
    """Span of the covariance images of the true directions."""
    return SubspaceBasis(
        [gamma_times(c, model, kl_terms=kl_terms) for c in truth.directions.curves]
    )
