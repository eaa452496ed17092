"""Experiment runners: tuning sweeps, rate checks, and the real-data study.

Every experiment is a pure function of (config, seed): replication r draws
from the stream keyed seed XOR r (r enumerated over the full parameter
grid), workers return per-replication errors, and aggregation follows
replication order, so results do not depend on the worker count.
"""

from __future__ import annotations

import csv
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import lru_cache
from pathlib import Path

import numpy as np

from .curves import FunctionalSample, bm_kl_basis, make_grid
from .datagen import ModelSpec, generate, inverse_regression_truth
from .errors import ConfigError
from .estimators import FsirConfig, fit_fsir, fit_fsir_sweep, fit_rfsir_sweep, inverse_regression_space
from .ingest import default_data_path, load_bike_csv
from .metrics import SubspaceBasis, effective_span, subspace_error
from .regression import fit_gp, mse, predict
from .rng import MASK64, stream
from .slicing import wssc_ratio

try:  # version string recorded in result metadata
    from importlib.metadata import version as _pkg_version

    VERSION = _pkg_version("fsir")
except Exception:  # pragma: no cover - not installed
    VERSION = "0.1.0"

__all__ = [
    "EXPERIMENTS",
    "ExperimentConfig",
    "ExperimentResult",
    "PlotData",
    "default_config",
    "run_optimal_m",
    "run_error_comparison",
    "run_rate_check",
    "run_wssc",
    "run_real_data",
    "run_experiment",
    "emit",
    "read_result_json",
]

EXPERIMENTS = ("optimal-m", "error-comparison", "real-data", "rate-check", "wssc")

RESULT_SCHEMA = "fsir.experiment-result/1"

MODEL_D = {"I": 1, "II": 2, "III": 1}

_COLUMNS = {
    "optimal-m": ["n", "m", "mean_error", "std_error", "replications", "wall_time_s"],
    "error-comparison": [
        "model", "method", "tuning", "value",
        "mean_error", "std_error", "replications", "is_min", "wall_time_s",
    ],
    "rate-check": [
        "model", "target", "n", "mean_sq_error", "std_error", "replications", "wall_time_s",
    ],
    "wssc": ["direction", "H", "mean_ratio", "std_error", "replications", "wall_time_s"],
    "real-data": [
        "method", "d", "tuning", "value",
        "mean_mse", "std_error", "replications", "wall_time_s",
    ],
}


@dataclass(frozen=True)
class ExperimentConfig:
    """Parameter grids and run controls for one experiment."""

    experiment: str
    models: tuple[str, ...] = ()
    n_values: tuple[int, ...] = ()
    m_values: tuple[int, ...] = ()
    rho_values: tuple[float, ...] = ()
    d_values: tuple[int, ...] = ()
    H: int = 10
    H_values: tuple[int, ...] = ()
    H_sub: int = 10
    replications: int = 100
    seed: int = 0
    grid_size: int = 256
    noise_scale: float = 0.01
    kl_terms: int = 100
    threads: int = 1
    data_path: str | None = None
    use_feeling_temp: bool = False
    train_size: int = 90
    out_path: str | None = None
    out_format: str = "csv"

    def validate(self) -> None:
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}")
        if self.replications < 1:
            raise ConfigError("replications must be >= 1")
        if self.seed < 0:
            raise ConfigError("seed must be non-negative")
        if self.grid_size < 2:
            raise ConfigError("grid_size must be >= 2")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1")
        if self.out_format not in ("csv", "json"):
            raise ConfigError(f"unknown output format {self.out_format!r}")
        for model in self.models:
            if model not in MODEL_D:
                raise ConfigError(f"unknown model {model!r}")
        needs = {
            "optimal-m": ("models", "n_values", "m_values"),
            "error-comparison": ("models", "n_values", "m_values", "rho_values"),
            "rate-check": ("models", "n_values"),
            "wssc": ("models", "n_values", "H_values"),
            "real-data": ("d_values", "m_values", "rho_values"),
        }[self.experiment]
        for name in needs:
            if not getattr(self, name):
                raise ConfigError(f"{self.experiment} requires a non-empty {name}")
        if self.experiment == "optimal-m" and self.models != ("I",):
            raise ConfigError("optimal-m runs on model I only")
        if any(m < 1 for m in self.m_values):
            raise ConfigError("m values must be >= 1")
        if any(rho <= 0 for rho in self.rho_values):
            raise ConfigError("rho values must be positive")
        if self.experiment == "real-data" and self.train_size < 3:
            raise ConfigError("train_size must be >= 3")


def default_config(experiment: str, **overrides) -> ExperimentConfig:
    """Config preset for an experiment, at the scale used by the write-up."""
    presets = {
        "optimal-m": dict(
            models=("I",),
            n_values=(2_000, 20_000, 100_000),
            m_values=tuple(range(3, 26)),
            replications=50,
        ),
        "error-comparison": dict(
            models=("I", "II", "III"),
            n_values=(20_000,),
            m_values=tuple(range(2, 15)) + (20, 30, 40),
            rho_values=tuple(
                0.01 * v
                for v in list(range(1, 11)) + [15, 20, 25, 30] + list(range(40, 151, 10))
            ),
            replications=100,
        ),
        "rate-check": dict(
            models=("III",),
            n_values=(1_000, 4_000, 16_000, 64_000),
            replications=100,
        ),
        "wssc": dict(
            models=("III",),
            n_values=(10_000,),
            H_values=(5, 10, 20, 40),
            H_sub=10,
            replications=20,
        ),
        "real-data": dict(
            d_values=(1, 2, 3, 4, 5),
            m_values=(2, 4, 6, 8, 10, 12),
            rho_values=tuple(math.exp(e) for e in (-9, -7, -5, -3, -1, 1)),
            replications=100,
            grid_size=24,
        ),
    }
    if experiment not in presets:
        raise ConfigError(f"unknown experiment {experiment!r}")
    cfg = ExperimentConfig(experiment=experiment, **presets[experiment])
    if overrides:
        cfg = replace(cfg, **overrides)
    cfg.validate()
    return cfg


@dataclass(frozen=True)
class PlotData:
    """One figure's worth of plot points."""

    name: str
    x: tuple[float, ...]
    y: tuple[float, ...]
    y_stderr: tuple[float, ...]


@dataclass
class ExperimentResult:
    """Grid-cell rows plus run metadata and per-figure plot data."""

    experiment: str
    columns: list[str]
    rows: list[dict]
    metadata: dict
    plots: list[PlotData] = field(default_factory=list)


def _stderr(values: np.ndarray) -> float:
    if values.size < 2:
        return 0.0
    return float(values.std(ddof=1) / math.sqrt(values.size))


def _loglog_fit(x: np.ndarray, y: np.ndarray) -> tuple[float | None, float | None]:
    """Least-squares slope and R^2 of log(y) on log(x); None when degenerate."""
    keep = (x > 0) & (y > 0)
    lx, ly = np.log(x[keep]), np.log(y[keep])
    if np.unique(lx).size < 2:
        return None, None
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    total = float(((ly - ly.mean()) ** 2).sum())
    r2 = None if total == 0.0 else 1.0 - float((resid ** 2).sum()) / total
    return float(slope), r2


def _map_replications(worker, args: list, threads: int) -> list:
    if threads <= 1 or len(args) <= 1:
        return [worker(a) for a in args]
    chunk = max(1, len(args) // (threads * 4))
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(worker, args, chunksize=chunk))


def _rep_seed(seed: int, index: int) -> int:
    return (seed ^ index) & MASK64


def _estimate_error(curves, truth: SubspaceBasis) -> float:
    """Subspace error of an estimated direction set against the truth span.

    Degenerate fits can return numerically dependent directions; scoring the
    effective span keeps sweeps alive and charges the collapse as error
    (up to 1) through the dimension mismatch.
    """
    return subspace_error(effective_span(SubspaceBasis(curves)), truth)


# ---------------------------------------------------------------------------
# optimal-m


def _worker_optimal_m(args) -> np.ndarray:
    n, seed, grid_size, noise_scale, kl_terms, H, m_values = args
    grid = make_grid(grid_size)
    sample, truth = generate(
        ModelSpec(model="I", n=n, grid=grid, seed=seed, noise_scale=noise_scale, kl_terms=kl_terms)
    )
    cfg = FsirConfig(d=truth.d, H=H, m=m_values[0])
    ests = fit_fsir_sweep(sample, cfg, list(m_values))
    return np.array([_estimate_error(e.directions, truth.directions) for e in ests])


def run_optimal_m(cfg: ExperimentConfig) -> ExperimentResult:
    """Subspace error over an (n, m) grid, with the per-n best m and its scaling."""
    cfg.validate()
    reps = cfg.replications
    rows = []
    m_star: dict[int, int] = {}
    interior: dict[int, bool] = {}
    plots = []
    for i_n, n in enumerate(cfg.n_values):
        t0 = time.perf_counter()
        args = [
            (n, _rep_seed(cfg.seed, i_n * reps + r), cfg.grid_size,
             cfg.noise_scale, cfg.kl_terms, cfg.H, cfg.m_values)
            for r in range(reps)
        ]
        errors = np.stack(_map_replications(_worker_optimal_m, args, cfg.threads))
        wall = time.perf_counter() - t0
        means = errors.mean(axis=0)
        stderrs = np.array([_stderr(errors[:, j]) for j in range(len(cfg.m_values))])
        best = int(np.argmin(means))
        m_star[n] = int(cfg.m_values[best])
        interior[n] = 0 < best < len(cfg.m_values) - 1
        for j, m in enumerate(cfg.m_values):
            rows.append({
                "n": n, "m": m,
                "mean_error": float(means[j]), "std_error": float(stderrs[j]),
                "replications": reps, "wall_time_s": round(wall / len(cfg.m_values), 4),
            })
        plots.append(PlotData(
            name=f"error_vs_m_n{n}",
            x=tuple(float(m) for m in cfg.m_values),
            y=tuple(float(v) for v in means),
            y_stderr=tuple(float(v) for v in stderrs),
        ))
    ns = np.array(sorted(m_star), dtype=np.float64)
    stars = np.array([m_star[int(n)] for n in ns], dtype=np.float64)
    slope, r2 = _loglog_fit(ns, stars)
    if slope is not None:
        plots.append(PlotData(
            name="log_mstar_vs_log_n",
            x=tuple(float(v) for v in np.log(ns)),
            y=tuple(float(v) for v in np.log(stars)),
            y_stderr=tuple(0.0 for _ in ns),
        ))
    metadata = _base_metadata(cfg)
    metadata.update(
        m_star={str(n): m for n, m in m_star.items()},
        interior_minimum={str(n): bool(v) for n, v in interior.items()},
        slope=slope,
        r_squared=r2,
        rule_exponent=2.0 / 11.0,  # 1/(alpha + 2 beta) for the model-I exponents
    )
    return ExperimentResult("optimal-m", _COLUMNS["optimal-m"], rows, metadata, plots)


# ---------------------------------------------------------------------------
# error-comparison


def _worker_error_comparison(args) -> tuple[np.ndarray, np.ndarray]:
    model, n, seed, grid_size, noise_scale, kl_terms, H, m_values, rho_values = args
    grid = make_grid(grid_size)
    sample, truth = generate(
        ModelSpec(model=model, n=n, grid=grid, seed=seed,
                  noise_scale=noise_scale, kl_terms=kl_terms)
    )
    base = FsirConfig(d=truth.d, H=H, m=m_values[0])
    ref_errors = np.array([
        _estimate_error(e.directions, truth.directions)
        for e in fit_fsir_sweep(sample, base, list(m_values))
    ])
    ridge_cfg = FsirConfig(d=truth.d, H=H, method="ridge", rho=rho_values[0])
    ridge_errors = np.array([
        _estimate_error(e.directions, truth.directions)
        for e in fit_rfsir_sweep(sample, ridge_cfg, list(rho_values))
    ])
    return ref_errors, ridge_errors


def run_error_comparison(cfg: ExperimentConfig) -> ExperimentResult:
    """Best-tuned accuracy of the truncated and ridge methods per model."""
    cfg.validate()
    if len(cfg.n_values) != 1:
        raise ConfigError("error-comparison expects a single n")
    n = cfg.n_values[0]
    reps = cfg.replications
    rows = []
    plots = []
    minima: dict[str, dict[str, float]] = {}
    for i_model, model in enumerate(cfg.models):
        d = MODEL_D[model]
        m_values = tuple(m for m in cfg.m_values if m >= d)
        if not m_values:
            raise ConfigError(f"no m value is >= d={d} for model {model}")
        t0 = time.perf_counter()
        args = [
            (model, n, _rep_seed(cfg.seed, i_model * reps + r), cfg.grid_size,
             cfg.noise_scale, cfg.kl_terms, cfg.H, m_values, cfg.rho_values)
            for r in range(reps)
        ]
        results = _map_replications(_worker_error_comparison, args, cfg.threads)
        wall = time.perf_counter() - t0
        ref = np.stack([r[0] for r in results])
        ridge = np.stack([r[1] for r in results])
        n_cells = len(m_values) + len(cfg.rho_values)
        minima[model] = {}
        for method, tuning, values, errs in (
            ("fsir", "m", m_values, ref),
            ("rfsir", "rho", cfg.rho_values, ridge),
        ):
            means = errs.mean(axis=0)
            best = int(np.argmin(means))
            minima[model][method] = float(means[best])
            for j, value in enumerate(values):
                rows.append({
                    "model": model, "method": method, "tuning": tuning,
                    "value": float(value),
                    "mean_error": float(means[j]),
                    "std_error": _stderr(errs[:, j]),
                    "replications": reps,
                    "is_min": j == best,
                    "wall_time_s": round(wall / n_cells, 4),
                })
            plots.append(PlotData(
                name=f"{method}_model_{model}",
                x=tuple(float(v) for v in values),
                y=tuple(float(v) for v in means),
                y_stderr=tuple(_stderr(errs[:, j]) for j in range(len(values))),
            ))
    metadata = _base_metadata(cfg)
    metadata.update(n=n, minima=minima)
    return ExperimentResult(
        "error-comparison", _COLUMNS["error-comparison"], rows, metadata, plots
    )


# ---------------------------------------------------------------------------
# rate-check


def _worker_rate_check(args) -> tuple[float, float]:
    model, n, seed, grid_size, noise_scale, kl_terms, H = args
    grid = make_grid(grid_size)
    sample, truth = generate(
        ModelSpec(model=model, n=n, grid=grid, seed=seed,
                  noise_scale=noise_scale, kl_terms=kl_terms)
    )
    se_truth = inverse_regression_truth(truth, model, kl_terms=kl_terms)
    eta = inverse_regression_space(sample, H, truth.d)
    err_inverse = _estimate_error(eta, se_truth) ** 2
    err_central = float("nan")
    if truth.alpha is not None:
        rule_cfg = FsirConfig(d=truth.d, H=H, alpha=truth.alpha, beta=truth.beta)
        est = fit_fsir(sample, rule_cfg)
        err_central = _estimate_error(est.directions, truth.directions) ** 2
    return err_inverse, err_central


def run_rate_check(cfg: ExperimentConfig) -> ExperimentResult:
    """Squared-error decay of the inverse-regression and central-space estimates."""
    cfg.validate()
    reps = cfg.replications
    rows = []
    slopes: dict[str, dict[str, float | None]] = {}
    plots = []
    for i_model, model in enumerate(cfg.models):
        per_target: dict[str, list[tuple[int, float, float]]] = {}
        for i_n, n in enumerate(cfg.n_values):
            t0 = time.perf_counter()
            index0 = (i_model * len(cfg.n_values) + i_n) * reps
            args = [
                (model, n, _rep_seed(cfg.seed, index0 + r), cfg.grid_size,
                 cfg.noise_scale, cfg.kl_terms, cfg.H)
                for r in range(reps)
            ]
            results = np.array(_map_replications(_worker_rate_check, args, cfg.threads))
            wall = time.perf_counter() - t0
            targets = [("inverse_regression", results[:, 0])]
            if not np.isnan(results[0, 1]):
                targets.append(("central_space", results[:, 1]))
            for target, errs in targets:
                row = {
                    "model": model, "target": target, "n": n,
                    "mean_sq_error": float(errs.mean()),
                    "std_error": _stderr(errs),
                    "replications": reps,
                    "wall_time_s": round(wall / len(targets), 4),
                }
                rows.append(row)
                per_target.setdefault(target, []).append(
                    (n, row["mean_sq_error"], row["std_error"])
                )
        slopes[model] = {}
        for target, triples in per_target.items():
            ns = np.array([t[0] for t in triples], dtype=np.float64)
            means = np.array([t[1] for t in triples])
            slope, r2 = _loglog_fit(ns, means)
            slopes[model][target] = slope
            slopes[model][f"{target}_r_squared"] = r2
            plots.append(PlotData(
                name=f"rate_{model}_{target}",
                x=tuple(float(v) for v in ns),
                y=tuple(float(v) for v in means),
                y_stderr=tuple(float(t[2]) for t in triples),
            ))
    metadata = _base_metadata(cfg)
    metadata.update(
        slopes=slopes,
        low_confidence=len(cfg.n_values) < 3,
    )
    return ExperimentResult("rate-check", _COLUMNS["rate-check"], rows, metadata, plots)


# ---------------------------------------------------------------------------
# wssc


def _worker_wssc(args) -> np.ndarray:
    model, n, seed, grid_size, noise_scale, kl_terms, H_values, H_sub = args
    grid = make_grid(grid_size)
    sample, truth = generate(
        ModelSpec(model=model, n=n, grid=grid, seed=seed,
                  noise_scale=noise_scale, kl_terms=kl_terms)
    )
    signal = truth.directions.curves[0]
    noise_dir, _ = bm_kl_basis(5, grid)  # independent of every model's index scores
    out = np.empty((2, len(H_values)))
    for j, H in enumerate(H_values):
        out[0, j] = wssc_ratio(sample, H, H_sub, signal)
        out[1, j] = wssc_ratio(sample, H, H_sub, noise_dir)
    return out


def run_wssc(cfg: ExperimentConfig) -> ExperimentResult:
    """Sliced-stability ratios along the true direction and a noise direction."""
    cfg.validate()
    if len(cfg.models) != 1 or len(cfg.n_values) != 1:
        raise ConfigError("wssc expects a single model and a single n")
    model, n = cfg.models[0], cfg.n_values[0]
    reps = cfg.replications
    t0 = time.perf_counter()
    args = [
        (model, n, _rep_seed(cfg.seed, r), cfg.grid_size,
         cfg.noise_scale, cfg.kl_terms, cfg.H_values, cfg.H_sub)
        for r in range(reps)
    ]
    ratios = np.stack(_map_replications(_worker_wssc, args, cfg.threads))
    wall = time.perf_counter() - t0
    rows = []
    plots = []
    for i_dir, direction in enumerate(("signal", "noise")):
        means = ratios[:, i_dir, :].mean(axis=0)
        stderrs = [_stderr(ratios[:, i_dir, j]) for j in range(len(cfg.H_values))]
        for j, H in enumerate(cfg.H_values):
            rows.append({
                "direction": direction, "H": H,
                "mean_ratio": float(means[j]), "std_error": float(stderrs[j]),
                "replications": reps,
                "wall_time_s": round(wall / (2 * len(cfg.H_values)), 4),
            })
        plots.append(PlotData(
            name=f"wssc_{direction}",
            x=tuple(float(H) for H in cfg.H_values),
            y=tuple(float(v) for v in means),
            y_stderr=tuple(float(v) for v in stderrs),
        ))
    signal_means = ratios[:, 0, :].mean(axis=0)
    inversions = int(np.sum(np.diff(signal_means) >= 0))
    metadata = _base_metadata(cfg)
    metadata.update(model=model, n=n, H_sub=cfg.H_sub, signal_trend_inversions=inversions)
    return ExperimentResult("wssc", _COLUMNS["wssc"], rows, metadata, plots)


# ---------------------------------------------------------------------------
# real-data


@lru_cache(maxsize=4)
def _load_bike_cached(path: str, weekday: int, use_feeling_temp: bool) -> FunctionalSample:
    return load_bike_csv(path, weekday_filter=weekday, use_feeling_temp=use_feeling_temp)


def _subset(sample: FunctionalSample, idx: np.ndarray) -> FunctionalSample:
    return FunctionalSample(
        grid=sample.grid,
        values=sample.values[idx],
        responses=sample.responses[idx],
        centered=sample.centered,
        meta=dict(sample.meta),
    )


def _reduced_mse(est, train: FunctionalSample, test: FunctionalSample) -> float:
    B = est.direction_matrix() * train.grid.weights[None, :]
    x_train = train.values @ B.T
    x_test = test.values @ B.T
    model = fit_gp(x_train, train.responses)
    return mse(predict(model, x_test), test.responses)


def _worker_real_data(args) -> np.ndarray:
    (path, weekday, use_feeling_temp, seed, train_size, H,
     d_values, m_values, rho_values) = args
    sample = _load_bike_cached(path, weekday, use_feeling_temp)
    perm = stream(seed).permutation(sample.n)
    train = _subset(sample, perm[:train_size])
    test = _subset(sample, perm[train_size:])
    out = []
    for d in d_values:
        ms = [m for m in m_values if m >= d]
        if ms:
            cfg = FsirConfig(d=d, H=H, m=ms[0])
            for est in fit_fsir_sweep(train, cfg, ms):
                out.append(_reduced_mse(est, train, test))
        if rho_values:
            cfg = FsirConfig(d=d, H=H, method="ridge", rho=rho_values[0])
            for est in fit_rfsir_sweep(train, cfg, list(rho_values)):
                out.append(_reduced_mse(est, train, test))
    return np.array(out)


def run_real_data(cfg: ExperimentConfig) -> ExperimentResult:
    """Out-of-sample MSE of GP regression on reduced predictors, over splits."""
    cfg.validate()
    path = cfg.data_path or str(default_data_path())
    sample = _load_bike_cached(path, 6, cfg.use_feeling_temp)
    if cfg.train_size >= sample.n:
        raise ConfigError(
            f"train_size {cfg.train_size} must be below the sample size {sample.n}"
        )
    reps = cfg.replications
    t0 = time.perf_counter()
    args = [
        (path, 6, cfg.use_feeling_temp, _rep_seed(cfg.seed, r), cfg.train_size,
         cfg.H, cfg.d_values, cfg.m_values, cfg.rho_values)
        for r in range(reps)
    ]
    results = np.stack(_map_replications(_worker_real_data, args, cfg.threads))
    wall = time.perf_counter() - t0

    cells = []
    for d in cfg.d_values:
        for m in (m for m in cfg.m_values if m >= d):
            cells.append(("fsir", d, "m", float(m)))
        for rho in cfg.rho_values:
            cells.append(("rfsir", d, "rho", float(rho)))
    rows = []
    for j, (method, d, tuning, value) in enumerate(cells):
        rows.append({
            "method": method, "d": d, "tuning": tuning, "value": value,
            "mean_mse": float(results[:, j].mean()),
            "std_error": _stderr(results[:, j]),
            "replications": reps,
            "wall_time_s": round(wall / len(cells), 4),
        })
    metadata = _base_metadata(cfg)
    metadata.update(
        n=sample.n,
        train_size=cfg.train_size,
        test_size=sample.n - cfg.train_size,
        data_path=path,
        excluded_incomplete=sample.meta.get("excluded_incomplete"),
        excluded_zero_count=sample.meta.get("excluded_zero_count"),
    )
    return ExperimentResult("real-data", _COLUMNS["real-data"], rows, metadata)


# ---------------------------------------------------------------------------
# dispatch and persistence


def _base_metadata(cfg: ExperimentConfig) -> dict:
    return {
        "seed": cfg.seed,
        "grid_size": cfg.grid_size,
        "replications": cfg.replications,
        "H": cfg.H,
        "version": VERSION,
    }


_RUNNERS = {
    "optimal-m": run_optimal_m,
    "error-comparison": run_error_comparison,
    "rate-check": run_rate_check,
    "wssc": run_wssc,
    "real-data": run_real_data,
}


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    cfg.validate()
    return _RUNNERS[cfg.experiment](cfg)


def _plot_path(path: Path, name: str) -> Path:
    return path.with_name(f"{path.stem}_plot_{name}.csv")


def emit(result: ExperimentResult, format: str, path) -> None:
    """Write the result table (CSV or JSON) plus one CSV per plot."""
    path = Path(path)
    if format == "csv":
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(result.columns)
            for row in result.rows:
                writer.writerow([row.get(c, "") for c in result.columns])
    elif format == "json":
        payload = {
            "schema": RESULT_SCHEMA,
            "experiment": result.experiment,
            "columns": result.columns,
            "rows": result.rows,
            "metadata": result.metadata,
            "plots": [
                {"name": p.name, "x": list(p.x), "y": list(p.y), "y_stderr": list(p.y_stderr)}
                for p in result.plots
            ],
        }
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
    else:
        raise ConfigError(f"unknown output format {format!r}")
    for plot in result.plots:
        with open(_plot_path(path, plot.name), "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["x", "y", "y_stderr"])
            for x, y, err in zip(plot.x, plot.y, plot.y_stderr):
                writer.writerow([x, y, err])


def read_result_json(path) -> ExperimentResult:
    """Load a JSON result written by :func:`emit`."""
    with open(path) as fh:
        payload = json.load(fh)
    if payload.get("schema") != RESULT_SCHEMA:
        raise ValueError(f"unexpected result schema {payload.get('schema')!r}")
    return ExperimentResult(
        experiment=payload["experiment"],
        columns=payload["columns"],
        rows=payload["rows"],
        metadata=payload["metadata"],
        plots=[
            PlotData(
                name=p["name"],
                x=tuple(p["x"]),
                y=tuple(p["y"]),
                y_stderr=tuple(p["y_stderr"]),
            )
            for p in payload["plots"]
        ],
    )
