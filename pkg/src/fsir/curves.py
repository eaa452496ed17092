"""Discretized curves on [0, 1]: grids, inner products, and basis functions.

Square-integrable functions are represented by their values on a uniform
grid; integrals are trapezoid-rule quadratures, so the weighted dot product
of two value vectors approximates the L2 inner product.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Grid",
    "Curve",
    "FunctionalSample",
    "make_grid",
    "inner_product",
    "norm",
    "cosine_basis",
    "bm_kl_basis",
    "center_sample",
]


def _readonly(a: np.ndarray) -> np.ndarray:
    out = np.ascontiguousarray(a, dtype=np.float64)
    if out is a:
        out = out.copy()
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class Grid:
    """Uniform quadrature grid on [0, 1].

    ``nodes`` are strictly increasing points in [0, 1]; ``weights`` are the
    matching quadrature weights, positive and summing to 1.
    """

    nodes: np.ndarray
    weights: np.ndarray
    # Cached sqrt-weights for the similarity transform used by operators.
    _sqrt_weights: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "nodes", _readonly(self.nodes))
        object.__setattr__(self, "weights", _readonly(self.weights))
        if self.nodes.ndim != 1 or self.weights.shape != self.nodes.shape:
            raise ValueError("nodes and weights must be 1-d arrays of equal length")
        if self.nodes.size < 2:
            raise ValueError("grid needs at least 2 nodes")
        if np.any(np.diff(self.nodes) <= 0):
            raise ValueError("nodes must be strictly increasing")
        if self.nodes[0] < 0.0 or self.nodes[-1] > 1.0:
            raise ValueError("nodes must lie in [0, 1]")
        if np.any(self.weights <= 0.0):
            raise ValueError("weights must be positive")
        if abs(self.weights.sum() - 1.0) > 1e-12:
            raise ValueError("weights must sum to 1")
        object.__setattr__(self, "_sqrt_weights", _readonly(np.sqrt(self.weights)))

    @property
    def size(self) -> int:
        return int(self.nodes.size)

    def matches(self, other: "Grid") -> bool:
        """True if two grids describe the same discretization."""
        return self is other or (
            np.array_equal(self.nodes, other.nodes)
            and np.array_equal(self.weights, other.weights)
        )


def make_grid(G: int) -> Grid:
    """Trapezoid-rule grid with ``G`` uniform nodes on [0, 1].

    Nodes are i/(G-1); the end weights are half the interior weight 1/(G-1),
    normalized so the weights integrate the constant function exactly.
    """
    if G < 2:
        raise ValueError(f"grid size must be >= 2, got {G}")
    nodes = np.arange(G, dtype=np.float64) / (G - 1)
    weights = np.full(G, 1.0 / (G - 1))
    weights[0] *= 0.5
    weights[-1] *= 0.5
    return Grid(nodes=nodes, weights=weights)


@dataclass(frozen=True, eq=False)
class Curve:
    """A function on [0, 1] given by its values at the grid nodes."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _readonly(self.values))
        if self.values.shape != (self.grid.size,):
            raise ValueError(
                f"values must have shape ({self.grid.size},), got {self.values.shape}"
            )
        if not np.all(np.isfinite(self.values)):
            raise ValueError("curve values must be finite")


def _require_shared_grid(a: Grid, b: Grid) -> None:
    if not a.matches(b):
        raise ValueError("curves live on different grids")


def inner_product(f: Curve, g: Curve) -> float:
    """L2 inner product by quadrature: sum_i w_i f_i g_i."""
    _require_shared_grid(f.grid, g.grid)
    return float(np.dot(f.grid.weights * f.values, g.values))


def norm(f: Curve) -> float:
    """L2 norm sqrt(<f, f>)."""
    return math.sqrt(max(inner_product(f, f), 0.0))


def cosine_basis(j: int, grid: Grid) -> Curve:
    """j-th element of the cosine basis: 1 for j=1, sqrt(2)*cos((j-1)*pi*t) after."""
    if j < 1:
        raise ValueError(f"basis index must be >= 1, got {j}")
    if j == 1:
        values = np.ones(grid.size)
    else:
        values = math.sqrt(2.0) * np.cos((j - 1) * math.pi * grid.nodes)
    return Curve(grid=grid, values=values)


def bm_kl_basis(k: int, grid: Grid) -> tuple[Curve, float]:
    """k-th spectral pair of the Brownian-motion covariance kernel min(s, t).

    Returns the eigenfunction sqrt(2)*sin((k-1/2)*pi*t) and its eigenvalue
    ((k-1/2)*pi)^-2.
    """
    if k < 1:
        raise ValueError(f"basis index must be >= 1, got {k}")
    freq = (k - 0.5) * math.pi
    values = math.sqrt(2.0) * np.sin(freq * grid.nodes)
    return Curve(grid=grid, values=values), freq ** -2


@dataclass(frozen=True, eq=False)
class FunctionalSample:
    """n (curve, response) pairs on a shared grid.

    Curve values are stored as an (n, G) matrix; ``curve(i)`` materializes
    row i as a :class:`Curve`. ``meta`` carries provenance (source file,
    generator id, seed, exclusion counts, ...).
    """

    grid: Grid
    values: np.ndarray
    responses: np.ndarray
    centered: bool = False
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "values", _readonly(self.values))
        object.__setattr__(self, "responses", _readonly(self.responses))
        if self.values.ndim != 2 or self.values.shape[1] != self.grid.size:
            raise ValueError(
                f"values must have shape (n, {self.grid.size}), got {self.values.shape}"
            )
        if self.responses.shape != (self.values.shape[0],):
            raise ValueError("responses must have one entry per curve")
        if self.values.shape[0] < 2:
            raise ValueError("sample needs at least 2 curves")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("curve values must be finite")
        if not np.all(np.isfinite(self.responses)):
            raise ValueError("responses must be finite")

    @property
    def n(self) -> int:
        return int(self.values.shape[0])

    def curve(self, i: int) -> Curve:
        return Curve(grid=self.grid, values=self.values[i])

    @property
    def curves(self) -> tuple[Curve, ...]:
        return tuple(self.curve(i) for i in range(self.n))


def center_sample(s: FunctionalSample) -> FunctionalSample:
    """Subtract the pointwise sample mean from every curve."""
    mean = s.values.mean(axis=0)
    return FunctionalSample(
        grid=s.grid,
        values=s.values - mean,
        responses=s.responses,
        centered=True,
        meta=dict(s.meta),
    )
