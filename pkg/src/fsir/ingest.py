"""Loader for the hourly bike-sharing CSV.

Builds one predictor curve per complete day of a chosen weekday (24 hourly
normalized temperatures on a uniform 24-point grid) with the log of the
day's mean rental count as the response. Days missing any hour, and days
whose mean count is zero, are dropped and counted in the sample metadata.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd

from .curves import FunctionalSample, make_grid
from .errors import SchemaError

__all__ = ["BikeDayRecord", "load_bike_csv", "default_data_path", "DATA_DIR_ENV"]

logger = logging.getLogger(__name__)

DATA_DIR_ENV = "FSIR_DATA_DIR"
SATURDAY = 6  # weekday code in the public hourly schema

_REQUIRED = ("dteday", "hr", "weekday", "temp", "cnt")


@dataclass(frozen=True, eq=False)
class BikeDayRecord:
    """One complete day: 24 hourly normalized temperatures and rental counts."""

    date: str
    temperatures: np.ndarray
    counts: np.ndarray

    def __post_init__(self):
        if self.temperatures.shape != (24,) or self.counts.shape != (24,):
            raise ValueError("a day needs exactly 24 hourly entries")
        if np.any(self.temperatures < 0.0) or np.any(self.temperatures > 1.0):
            raise ValueError(f"{self.date}: normalized temperatures must lie in [0, 1]")
        if np.any(self.counts < 0):
            raise ValueError(f"{self.date}: rental counts must be non-negative")

    @property
    def mean_count(self) -> float:
        return float(self.counts.mean())


def default_data_path(filename: str = "hour.csv") -> Path:
    """Path of the hourly file under the data directory env var (or cwd)."""
    return Path(os.environ.get(DATA_DIR_ENV, ".")) / filename


def load_bike_csv(
    path,
    weekday_filter: int = SATURDAY,
    use_feeling_temp: bool = False,
) -> FunctionalSample:
    """Load daily temperature curves and log mean rental counts.

    ``weekday_filter`` selects the weekday code to keep (Saturday by
    default). ``use_feeling_temp`` switches the predictor from the
    normalized temperature column to the normalized feeling temperature.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"bike-sharing file not found: {path}")
    temp_col = "atemp" if use_feeling_temp else "temp"
    frame = pd.read_csv(path)
    missing = [c for c in (*_REQUIRED, temp_col) if c not in frame.columns]
    if missing:
        raise SchemaError(f"missing columns in {path}: {missing}")

    day_frame = frame[frame["weekday"] == weekday_filter]
    records = []
    n_incomplete = 0
    for date, day in day_frame.groupby("dteday", sort=True):
        day = day.sort_values("hr")
        hours = day["hr"].to_numpy()
        if hours.size != 24 or not np.array_equal(hours, np.arange(24)):
            n_incomplete += 1
            continue
        records.append(
            BikeDayRecord(
                date=str(date),
                temperatures=day[temp_col].to_numpy(dtype=np.float64),
                counts=day["cnt"].to_numpy(dtype=np.float64),
            )
        )

    kept = []
    n_zero_count = 0
    for rec in records:
        if rec.mean_count <= 0.0:
            logger.warning("dropping %s: zero mean rental count", rec.date)
            n_zero_count += 1
            continue
        kept.append(rec)

    if len(kept) < 2:
        raise ValueError(f"fewer than 2 usable days of weekday {weekday_filter} in {path}")
    if n_incomplete:
        logger.info("excluded %d incomplete day(s)", n_incomplete)
    return FunctionalSample(
        grid=make_grid(24),
        values=np.stack([rec.temperatures for rec in kept]),
        responses=np.array([np.log(rec.mean_count) for rec in kept]),
        meta={
            "source": str(path),
            "weekday": weekday_filter,
            "temperature_column": temp_col,
            "dates": tuple(rec.date for rec in kept),
            "excluded_incomplete": n_incomplete,
            "excluded_zero_count": n_zero_count,
        },
    )
