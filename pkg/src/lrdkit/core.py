"""Time-series container, CSV ingestion and elementary transforms."""

from __future__ import annotations

import csv
import io
import math
from collections import Counter
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from typing import IO, Iterable

import numpy as np

from .errors import (
    DuplicateTimestampError,
    EmptySelectionError,
    GapError,
    InsufficientDataError,
    ParseError,
)


class GapPolicy(str, Enum):
    REJECT = "reject"
    DROP_AND_FLAG = "drop-and-flag"
    LINEAR_INTERPOLATE = "linear-interpolate"


@dataclass(frozen=True)
class IngestConfig:
    """How to read a delimited file. Columns are header names or 0-based indices."""

    timestamp_column: str | int = 0
    value_column: str | int = 1
    delimiter: str = ","
    gap_policy: GapPolicy = GapPolicy.DROP_AND_FLAG

    def __post_init__(self):
        object.__setattr__(self, "gap_policy", GapPolicy(self.gap_policy))


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """Regularly spaced real-valued observations.

    Parameters
    ----------
    timestamps : array of int64
        Epoch seconds (UTC), strictly increasing.
    values : array of float64
    spacing : int, optional
        Nominal step in seconds. Inferred as the modal difference when omitted.
    gaps : tuple of int
        Indices of flagged observations: under drop-and-flag the first
        observation after a hole in the nominal grid, under interpolation
        the filled-in positions.
    gaps_filled : bool
        True when ``gaps`` lists interpolated values rather than holes.
    unit : str
        Free-text unit label, e.g. ``"EUR/MWh"``.
    """

    timestamps: np.ndarray
    values: np.ndarray
    spacing: int | None = None
    gaps: tuple[int, ...] = ()
    gaps_filled: bool = False
    unit: str = ""
    name: str = field(default="", compare=False)

    def __post_init__(self):
        ts = np.array(self.timestamps, dtype=np.int64)
        vals = np.array(self.values, dtype=np.float64)
        if ts.ndim != 1 or vals.ndim != 1:
            raise ValueError("timestamps and values must be one-dimensional")
        if ts.shape != vals.shape:
            raise ValueError(f"length mismatch: {ts.size} timestamps, {vals.size} values")
        if ts.size < 1:
            raise InsufficientDataError("a time series needs at least one observation")
        diffs = np.diff(ts)
        if np.any(diffs <= 0):
            raise ValueError("timestamps must be strictly increasing")
        spacing = self.spacing
        if spacing is None:
            spacing = _modal_step(diffs) if diffs.size else 3600
        spacing = int(spacing)
        if spacing <= 0:
            raise ValueError("spacing must be positive")
        if np.any(diffs % spacing):
            bad = int(np.flatnonzero(diffs % spacing)[0]) + 1
            raise ValueError(f"timestamp at index {bad} is off the {spacing}s grid")
        gaps = tuple(sorted({int(g) for g in self.gaps}))
        holes = np.flatnonzero(diffs > spacing) + 1
        missing = set(holes.tolist()) - set(gaps)
        if missing:
            raise ValueError(f"unflagged gaps at indices {sorted(missing)}")
        if gaps and (gaps[0] < 0 or gaps[-1] >= ts.size):
            raise ValueError("gap index out of range")
        ts.setflags(write=False)
        vals.setflags(write=False)
        object.__setattr__(self, "timestamps", ts)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "spacing", spacing)
        object.__setattr__(self, "gaps", gaps)

    def __len__(self) -> int:
        return self.values.size

    def __eq__(self, other):
        if not isinstance(other, TimeSeries):
            return NotImplemented
        return (
            self.spacing == other.spacing
            and self.gaps == other.gaps
            and self.gaps_filled == other.gaps_filled
            and self.unit == other.unit
            and np.array_equal(self.timestamps, other.timestamps)
            and np.array_equal(self.values, other.values)
        )

    __hash__ = None

    @classmethod
    def from_values(cls, values, start: int = 0, spacing: int = 3600, **kwargs) -> "TimeSeries":
        """Wrap a bare array on a regular grid starting at epoch second ``start``."""
        values = np.asarray(values, dtype=np.float64)
        ts = start + spacing * np.arange(values.size, dtype=np.int64)
        return cls(ts, values, spacing=spacing, **kwargs)

    def with_values(self, values, timestamps=None, gaps=None) -> "TimeSeries":
        return TimeSeries(
            self.timestamps if timestamps is None else timestamps,
            values,
            spacing=self.spacing,
            gaps=self.gaps if gaps is None else gaps,
            gaps_filled=self.gaps_filled,
            unit=self.unit,
            name=self.name,
        )

    @property
    def span(self) -> tuple[str, str]:
        return format_timestamp(int(self.timestamps[0])), format_timestamp(int(self.timestamps[-1]))

    def years(self) -> list[int]:
        years = self.timestamps.astype("datetime64[s]").astype("datetime64[Y]").astype(int) + 1970
        return sorted(set(years.tolist()))


def _modal_step(diffs: np.ndarray) -> int:
    counts = Counter(diffs.tolist())
    top = max(counts.values())
    # ties resolve to the smallest step
    return int(min(d for d, c in counts.items() if c == top))


def parse_timestamp(text: str) -> int:
    """ISO-8601 (naive means UTC, fixed offsets honoured) or epoch seconds."""
    text = text.strip()
    if not text:
        raise ValueError("empty timestamp")
    try:
        num = float(text)
    except ValueError:
        pass
    else:
        if not math.isfinite(num) or num != int(num):
            raise ValueError(f"epoch timestamp {text!r} is not a whole second")
        return int(num)
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    dt = datetime.fromisoformat(text)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return math.floor(dt.timestamp())


def format_timestamp(epoch: int) -> str:
    return datetime.fromtimestamp(epoch, tz=timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _resolve_column(header: list[str], column: str | int) -> int:
    if isinstance(column, int):
        if not 0 <= column < len(header):
            raise ParseError(f"column index {column} out of range", row=1)
        return column
    if column.isdigit() and column not in header:
        return _resolve_column(header, int(column))
    try:
        return header.index(column)
    except ValueError:
        raise ParseError(f"no column named {column!r} in header {header}", row=1) from None


def load_csv(source: IO[bytes] | IO[str] | Iterable[str], config: IngestConfig | None = None) -> TimeSeries:
    """Read a headed delimited file into a :class:`TimeSeries`.

    Rows are sorted into ascending time. Holes in the nominal grid are
    handled by ``config.gap_policy``.
    """
    config = config or IngestConfig()
    text = source.read() if hasattr(source, "read") else "".join(source)
    if isinstance(text, bytes):
        text = text.decode("utf-8-sig")
    reader = csv.reader(io.StringIO(text), delimiter=config.delimiter)
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise ParseError("empty input", row=1) from None
    tcol = _resolve_column(header, config.timestamp_column)
    vcol = _resolve_column(header, config.value_column)

    stamps: list[int] = []
    values: list[float] = []
    rows: list[int] = []
    for row in reader:
        lineno = reader.line_num
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) <= max(tcol, vcol):
            raise ParseError(f"expected at least {max(tcol, vcol) + 1} fields, got {len(row)}", row=lineno)
        try:
            stamp = parse_timestamp(row[tcol])
        except ValueError as exc:
            raise ParseError(f"bad timestamp {row[tcol]!r} ({exc})", row=lineno) from None
        try:
            value = float(row[vcol])
        except ValueError:
            raise ParseError(f"bad value {row[vcol]!r}", row=lineno) from None
        if not math.isfinite(value):
            raise ParseError(f"non-finite value {row[vcol]!r}", row=lineno)
        stamps.append(stamp)
        values.append(value)
        rows.append(lineno)
    if not stamps:
        raise InsufficientDataError("no data rows")

    ts = np.array(stamps, dtype=np.int64)
    vals = np.array(values, dtype=np.float64)
    order = np.argsort(ts, kind="stable")
    ts, vals = ts[order], vals[order]
    diffs = np.diff(ts)
    if np.any(diffs == 0):
        i = int(np.flatnonzero(diffs == 0)[0])
        raise DuplicateTimestampError(
            f"duplicate timestamp {format_timestamp(int(ts[i]))} (rows {rows[order[i]]} and {rows[order[i + 1]]})"
        )
    if diffs.size == 0:
        return TimeSeries(ts, vals)
    spacing = _modal_step(diffs)
    if np.any(diffs % spacing):
        i = int(np.flatnonzero(diffs % spacing)[0]) + 1
        raise ParseError(
            f"timestamp {format_timestamp(int(ts[i]))} is off the {spacing}s grid", row=rows[order[i]]
        )
    holes = np.flatnonzero(diffs > spacing) + 1
    if holes.size == 0:
        return TimeSeries(ts, vals, spacing=spacing)

    policy = config.gap_policy
    if policy is GapPolicy.REJECT:
        first = int(holes[0])
        raise GapError(
            f"gap before position {first}: {int(diffs[first - 1] // spacing) - 1} missing step(s) "
            f"between {format_timestamp(int(ts[first - 1]))} and {format_timestamp(int(ts[first]))}",
            position=first,
        )
    if policy is GapPolicy.DROP_AND_FLAG:
        return TimeSeries(ts, vals, spacing=spacing, gaps=tuple(holes.tolist()))

    full = np.arange(ts[0], ts[-1] + spacing, spacing, dtype=np.int64)
    filled = np.interp(full.astype(np.float64), ts.astype(np.float64), vals)
    observed = np.zeros(full.size, dtype=bool)
    observed[(ts - ts[0]) // spacing] = True
    filled[observed] = vals
    return TimeSeries(
        full, filled, spacing=spacing, gaps=tuple(np.flatnonzero(~observed).tolist()), gaps_filled=True
    )


def to_csv(series: TimeSeries) -> str:
    """Serialise as ``timestamp,value`` with ISO-8601 stamps and round-trip floats."""
    out = io.StringIO()
    out.write("timestamp,value\n")
    for stamp, value in zip(series.timestamps.tolist(), series.values.tolist()):
        out.write(f"{format_timestamp(stamp)},{value!r}\n")
    return out.getvalue()


def first_difference(series: TimeSeries) -> TimeSeries:
    if len(series) < 2:
        raise InsufficientDataError("first difference needs at least two observations")
    gaps = tuple(g - 1 for g in series.gaps if g >= 1)
    return series.with_values(np.diff(series.values), timestamps=series.timestamps[1:], gaps=gaps)


def integrate(series: TimeSeries) -> TimeSeries:
    return series.with_values(np.cumsum(series.values))


def slice_calendar(series: TimeSeries, year: int) -> TimeSeries:
    """Observations whose UTC timestamp falls in ``year``."""
    lo = int((np.datetime64(f"{year:04d}-01-01", "s") - np.datetime64(0, "s")).astype(np.int64))
    hi = int((np.datetime64(f"{year + 1:04d}-01-01", "s") - np.datetime64(0, "s")).astype(np.int64))
    start, stop = np.searchsorted(series.timestamps, [lo, hi])
    if start >= stop:
        raise EmptySelectionError(f"no observations in {year} (series spans {series.span[0]} to {series.span[1]})")
    gaps = tuple(g - start for g in series.gaps if start <= g < stop)
    return TimeSeries(
        series.timestamps[start:stop],
        series.values[start:stop],
        spacing=series.spacing,
        gaps=gaps,
        gaps_filled=series.gaps_filled,
        unit=series.unit,
        name=series.name,
    )
