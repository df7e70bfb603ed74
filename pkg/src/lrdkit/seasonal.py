"""Calendar-conditional means: hour of day, day of week, ISO week, month."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core import TimeSeries
from .serialize import csv_text


class PeriodKind(str, Enum):
    HOUR_OF_DAY = "hour-of-day"
    DAY_OF_WEEK = "day-of-week"
    WEEK_OF_YEAR = "week-of-year"
    MONTH_OF_YEAR = "month-of-year"


# bin labels per kind
BINS = {
    PeriodKind.HOUR_OF_DAY: np.arange(0, 24),
    PeriodKind.DAY_OF_WEEK: np.arange(1, 8),
    PeriodKind.WEEK_OF_YEAR: np.arange(1, 54),
    PeriodKind.MONTH_OF_YEAR: np.arange(1, 13),
}


@dataclass(frozen=True, eq=False)
class SeasonalProfile:
    kind: PeriodKind
    bins: np.ndarray
    mean: np.ndarray
    sd: np.ndarray
    count: np.ndarray

    def to_csv(self) -> str:
        return csv_text(
            ["bin", "mean", "sd", "count"],
            zip(self.bins.tolist(), self.mean.tolist(), self.sd.tolist(), self.count.tolist()),
        )

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "bins": self.bins.tolist(),
            "mean": self.mean.tolist(),
            "sd": self.sd.tolist(),
            "count": self.count.tolist(),
        }


def calendar_keys(timestamps: np.ndarray, kind: PeriodKind) -> np.ndarray:
    """Bin label of every UTC epoch-second timestamp.

    Day of week runs Monday=1 .. Sunday=7; weeks follow ISO-8601.
    """
    kind = PeriodKind(kind)
    ts = np.asarray(timestamps, dtype=np.int64)
    days = np.floor_divide(ts, 86400)
    if kind is PeriodKind.HOUR_OF_DAY:
        return np.floor_divide(np.mod(ts, 86400), 3600)
    weekday = np.mod(days + 3, 7)  # 1970-01-01 was a Thursday; Monday=0 here
    if kind is PeriodKind.DAY_OF_WEEK:
        return weekday + 1
    if kind is PeriodKind.MONTH_OF_YEAR:
        d = days.astype("datetime64[D]")
        return (d.astype("datetime64[M]").astype(np.int64) % 12) + 1
    # the ISO week belongs to the year holding its Thursday
    thursday = (days - weekday + 3).astype("datetime64[D]")
    jan1 = thursday.astype("datetime64[Y]").astype("datetime64[D]")
    return (thursday - jan1).astype(np.int64) // 7 + 1


def seasonal_profile(series: TimeSeries, kind: PeriodKind | str) -> SeasonalProfile:
    """Per-bin mean, sample sd and count. Interpolated observations are left out."""
    kind = PeriodKind(kind)
    keep = np.ones(len(series), dtype=bool)
    if series.gaps_filled and series.gaps:
        keep[list(series.gaps)] = False
    keys = calendar_keys(series.timestamps[keep], kind)
    labels = BINS[kind]
    idx = keys - labels[0]
    x = series.values[keep]
    count = np.bincount(idx, minlength=labels.size)
    mean = np.full(labels.size, math.nan)
    sd = np.full(labels.size, math.nan)
    order = np.argsort(idx, kind="stable")
    groups = np.split(x[order], np.cumsum(count)[:-1])
    for b, g in enumerate(groups):
        if g.size:
            mu = math.fsum(g.tolist()) / g.size
            mean[b] = mu
            sd[b] = math.sqrt(float(np.sum((g - mu) ** 2)) / (g.size - 1)) if g.size > 1 else 0.0
    return SeasonalProfile(kind, labels.copy(), mean, sd, count)
