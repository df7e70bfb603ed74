"""Multifractal detrended fluctuation analysis.

The pipeline is ``profile`` -> ``window_fluctuations`` at each scale ->
``fluctuation_function`` over a grid of scales and moment orders ->
log-log regression (``fit_scaling``), optionally split at a detected
crossover scale.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from . import _kernels
from .core import TimeSeries, integrate
from .errors import ConfigError, DegenerateError, InsufficientDataError
from .serialize import csv_text

MIN_FIT_POINTS = 4
MIN_GRID_POINTS = 8
MIN_CROSSOVER_SCALES = 10

# F^2 below (ZERO_WINDOW_RTOL * max|profile|)^2 counts as an exactly fitted window
ZERO_WINDOW_RTOL = 1e-12

# single-regime SSE at or below this is an exact fit; its relative gain is 0
EXACT_FIT_SSE = 1e-20

# estimates below this are redone on the integrated series
INTEGRATION_TRIGGER = 0.2

# A split is a material crossover when the regime slopes differ by at least
# CROSSOVER_MIN_SLOPE_GAP, the upper regime spans a factor CROSSOVER_MIN_UPPER_SPAN
# in scale and the lower one CROSSOVER_MIN_LOWER_SPAN. Splits near s_max on
# pure fGn produce large but spurious slope gaps; the span bounds reject them.
# Calibrated in tests/test_crossover_calibration.py.
CROSSOVER_MIN_SLOPE_GAP = 0.2
CROSSOVER_MIN_UPPER_SPAN = 8.0
CROSSOVER_MIN_LOWER_SPAN = 2.0


@dataclass(frozen=True)
class MfdfaConfig:
    """Scale grid, detrending order and moment orders.

    ``s_max=None`` means ``T // 4`` for the series being analysed.
    """

    s_min: int = 10
    s_max: int | None = None
    scale_count: int = 40
    detrend_order: int = 1
    q_list: tuple[float, ...] = (2.0,)

    def __post_init__(self):
        object.__setattr__(self, "q_list", tuple(float(q) for q in self.q_list))
        if self.detrend_order < 0:
            raise ConfigError("detrend_order must be >= 0")
        if self.scale_count < MIN_GRID_POINTS:
            raise ConfigError(f"scale_count must be >= {MIN_GRID_POINTS}")
        if not self.q_list or any(not math.isfinite(q) for q in self.q_list):
            raise ConfigError("q_list must hold finite orders")

    def resolved_s_max(self, n: int) -> int:
        return n // 4 if self.s_max is None else int(self.s_max)

    def scales(self, n: int) -> np.ndarray:
        """Validated integer scale grid for a series of length ``n``."""
        s_max = self.resolved_s_max(n)
        if self.s_min < 4:
            raise ConfigError(f"s_min={self.s_min} is below 4")
        if not self.s_min < s_max:
            raise ConfigError(f"need s_min < s_max, got {self.s_min} and {s_max} (T={n})")
        if 4 * s_max > n:
            raise ConfigError(f"s_max={s_max} exceeds T/4 for T={n}")
        if self.detrend_order >= self.s_min:
            raise ConfigError(f"detrend order {self.detrend_order} needs s_min > {self.detrend_order}")
        grid = scale_grid(self.s_min, s_max, self.scale_count)
        if grid.size < MIN_GRID_POINTS:
            raise ConfigError(
                f"scale grid {self.s_min}..{s_max} has only {grid.size} distinct integer scales "
                f"(need {MIN_GRID_POINTS})"
            )
        return grid

    def to_dict(self) -> dict:
        d = asdict(self)
        d["q_list"] = list(self.q_list)
        return d


def scale_grid(s_min: int, s_max: int, count: int) -> np.ndarray:
    """Geometrically spaced scales rounded to unique integers."""
    raw = np.geomspace(s_min, s_max, count)
    return np.unique(np.rint(raw).astype(np.int64))


def profile(series) -> np.ndarray:
    """Cumulative sum of the demeaned series."""
    x = series.values if isinstance(series, TimeSeries) else np.asarray(series, dtype=np.float64)
    if x.size < 2:
        raise InsufficientDataError("profile needs at least two observations")
    return np.cumsum(x - x.mean())


def window_fluctuations(prof: np.ndarray, s: int, m: int = 1) -> np.ndarray:
    """Detrended variance ``F^2(k, s)`` of the ``2 * (T // s)`` windows.

    Windows ``0 .. T//s - 1`` are cut from the start of the profile, the
    rest from its end. Each window is detrended by a least-squares
    polynomial of degree ``m``.
    """
    prof = np.ascontiguousarray(prof, dtype=np.float64)
    s = int(s)
    if m >= s:
        raise DegenerateError(f"detrend order {m} leaves no residual in windows of length {s}")
    if s < 1 or s > prof.size:
        raise ValueError(f"scale {s} outside 1..{prof.size}")
    f2 = _kernels.window_f2(prof, s, _kernels.poly_basis(s, m))
    floor = (ZERO_WINDOW_RTOL * float(np.max(np.abs(prof)))) ** 2
    f2[f2 <= floor] = 0.0
    return f2


def aggregate(f2: np.ndarray, q: float) -> float:
    """Order-``q`` generalised mean of ``sqrt(f2)``.

    Zero windows are dropped for ``q <= 0`` (where they would give 0 or inf)
    and kept for ``q > 0``.
    """
    if q == 2.0:
        return math.sqrt(float(np.mean(f2)))
    if q > 0.0:
        nz = f2[f2 > 0.0]
        if nz.size == 0:
            return 0.0
        a = 0.5 * q * np.log(nz)
        peak = float(a.max())
        # zeros contribute exp(-inf) = 0 to the mean
        lse = peak + math.log(float(np.sum(np.exp(a - peak))) / f2.size)
        return math.exp(lse / q)
    nz = f2[f2 > 0.0]
    if nz.size == 0:
        return math.nan
    logs = np.log(nz)
    if q == 0.0:
        return math.exp(0.5 * float(np.mean(logs)))
    a = 0.5 * q * logs
    peak = float(a.max())
    lse = peak + math.log(float(np.mean(np.exp(a - peak))))
    return math.exp(lse / q)


@dataclass(frozen=True, eq=False)
class FluctuationCurve:
    """``values[i, j]`` is ``F_q(s)`` for ``scales[i]`` and ``orders[j]``."""

    scales: np.ndarray
    orders: np.ndarray
    values: np.ndarray
    config: MfdfaConfig
    n: int
    zero_windows: np.ndarray = field(default=None)

    def column(self, q: float) -> np.ndarray:
        idx = np.flatnonzero(np.isclose(self.orders, q, rtol=0.0, atol=1e-12))
        if idx.size == 0:
            raise KeyError(f"order q={q} not in curve (have {self.orders.tolist()})")
        return self.values[:, idx[0]]

    def to_rows(self):
        for i, s in enumerate(self.scales.tolist()):
            for j, q in enumerate(self.orders.tolist()):
                yield s, float(q), float(self.values[i, j])

    def to_csv(self) -> str:
        return csv_text(["s", "q", "F"], self.to_rows())

    def plot_csv(self, q: float = 2.0) -> str:
        """``log2_s,log2_F`` pairs for a log-log scaling plot."""
        col = self.column(q)
        return csv_text(["log2_s", "log2_F"], zip(np.log2(self.scales).tolist(), np.log2(col).tolist()))

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "config": self.config.to_dict(),
            "scales": self.scales.tolist(),
            "orders": self.orders.tolist(),
            "values": self.values.tolist(),
            "zero_windows": [] if self.zero_windows is None else self.zero_windows.tolist(),
        }


def fluctuation_function(series, config: MfdfaConfig | None = None) -> FluctuationCurve:
    config = config or MfdfaConfig()
    prof = profile(series)
    n = prof.size
    scales = config.scales(n)
    orders = np.array(config.q_list, dtype=np.float64)
    values = np.empty((scales.size, orders.size))
    zeros = np.empty(scales.size, dtype=np.int64)
    for i, s in enumerate(scales.tolist()):
        f2 = window_fluctuations(prof, s, config.detrend_order)
        zeros[i] = int(np.count_nonzero(f2 == 0.0))
        if zeros[i] == f2.size:
            raise DegenerateError(f"every window at scale s={s} is fitted exactly; the series is degenerate")
        for j, q in enumerate(orders.tolist()):
            values[i, j] = aggregate(f2, q)
    return FluctuationCurve(scales, orders, values, config, n, zeros)


@dataclass(frozen=True)
class ScalingFit:
    """Least-squares line through ``(log s, log F_q(s))``.

    ``h`` already includes ``integrated_adjustment``; the raw slope is
    available as ``raw_slope``. The intercept is on the natural-log scale.
    """

    q: float
    h: float
    intercept: float
    stderr: float
    r_squared: float
    scale_range: tuple[int, int]
    n_points: int
    sse: float
    integrated_adjustment: int = 0

    @property
    def raw_slope(self) -> float:
        return self.h - self.integrated_adjustment

    def to_dict(self) -> dict:
        d = asdict(self)
        d["scale_range"] = list(self.scale_range)
        d["raw_slope"] = self.raw_slope
        return d


def _ols(x: np.ndarray, y: np.ndarray, w: np.ndarray | None = None):
    if w is None:
        w = np.ones_like(x)
    sw = w.sum()
    mx = (w * x).sum() / sw
    my = (w * y).sum() / sw
    dx = x - mx
    dy = y - my
    sxx = float((w * dx * dx).sum())
    slope = float((w * dx * dy).sum()) / sxx
    resid = dy - slope * dx
    sse = float((w * resid * resid).sum())
    sst = float((w * dy * dy).sum())
    return slope, my - slope * mx, sse, sst, sxx


def fit_scaling(curve: FluctuationCurve, q: float = 2.0, s_lo: int | None = None, s_hi: int | None = None) -> ScalingFit:
    """Slope of ``log F_q(s)`` on ``log s`` over grid scales in ``[s_lo, s_hi]``."""
    s_lo = int(curve.scales[0]) if s_lo is None else int(s_lo)
    s_hi = int(curve.scales[-1]) if s_hi is None else int(s_hi)
    col = curve.column(q)
    mask = (curve.scales >= s_lo) & (curve.scales <= s_hi)
    if np.count_nonzero(mask) < MIN_FIT_POINTS:
        raise InsufficientDataError(
            f"only {np.count_nonzero(mask)} grid scales in [{s_lo}, {s_hi}]; need {MIN_FIT_POINTS}"
        )
    sc = curve.scales[mask]
    x = np.log(sc.astype(np.float64))
    y = np.log(col[mask])
    if not np.all(np.isfinite(y)):
        raise DegenerateError(f"non-positive F_q(s) for q={q} inside [{s_lo}, {s_hi}]")
    slope, icept, sse, sst, sxx = _ols(x, y)
    npts = x.size
    stderr = math.sqrt(sse / (npts - 2) / sxx)
    r2 = 1.0 if sst == 0.0 else min(1.0, max(0.0, 1.0 - sse / sst))
    return ScalingFit(
        q=float(q),
        h=slope,
        intercept=icept,
        stderr=stderr,
        r_squared=r2,
        scale_range=(int(sc[0]), int(sc[-1])),
        n_points=int(npts),
        sse=sse,
    )


@dataclass(frozen=True)
class CrossoverAnalysis:
    """Best two-regime split of a scaling curve.

    ``sse_total`` is the split criterion: the two regressions share the
    crossover point with half weight each, so it never exceeds the
    single-regime ``sse_single``. ``forced`` holds regime slopes for
    user-chosen split scales.
    """

    crossover_scale: int
    fit_below: ScalingFit
    fit_above: ScalingFit
    sse_total: float
    sse_single: float
    candidates: tuple[int, ...]
    forced: dict = field(default_factory=dict)

    @property
    def sse_gain(self) -> float:
        if self.sse_single <= EXACT_FIT_SSE:
            return 0.0
        return 1.0 - self.sse_total / self.sse_single

    @property
    def material(self) -> bool:
        lo = self.fit_below.scale_range[0]
        hi = self.fit_above.scale_range[1]
        sx = self.crossover_scale
        return (
            abs(self.fit_above.h - self.fit_below.h) >= CROSSOVER_MIN_SLOPE_GAP
            and hi >= CROSSOVER_MIN_UPPER_SPAN * sx
            and sx >= CROSSOVER_MIN_LOWER_SPAN * lo
        )

    def to_dict(self) -> dict:
        return {
            "crossover_scale": self.crossover_scale,
            "material": self.material,
            "sse_total": self.sse_total,
            "sse_single": self.sse_single,
            "sse_gain": self.sse_gain,
            "fit_below": self.fit_below.to_dict(),
            "fit_above": self.fit_above.to_dict(),
            "candidates": list(self.candidates),
            "forced": {str(k): v for k, v in self.forced.items()},
        }


def _split_sse(x: np.ndarray, y: np.ndarray, c: int) -> float:
    wb = np.ones(c + 1)
    wb[-1] = 0.5
    wa = np.ones(x.size - c)
    wa[0] = 0.5
    return _ols(x[: c + 1], y[: c + 1], wb)[2] + _ols(x[c:], y[c:], wa)[2]


def detect_crossover(curve: FluctuationCurve, q: float = 2.0, forced_splits=()) -> CrossoverAnalysis:
    """Exhaustive search for the scale splitting ``log F_q`` into two lines.

    Every grid scale leaving at least four points on each side (the split
    scale belongs to both) is tried; the one with the smallest summed
    squared residual wins, the first on ties.
    """
    scales = curve.scales
    if scales.size < MIN_CROSSOVER_SCALES:
        raise InsufficientDataError(f"crossover search needs {MIN_CROSSOVER_SCALES} scales, have {scales.size}")
    x = np.log(scales.astype(np.float64))
    y = np.log(curve.column(q))
    if not np.all(np.isfinite(y)):
        raise DegenerateError(f"non-positive F_q(s) for q={q}")
    cands = list(range(MIN_FIT_POINTS - 1, scales.size - MIN_FIT_POINTS + 1))
    if not cands:
        raise InsufficientDataError("no split leaves four scales on both sides")
    sses = [_split_sse(x, y, c) for c in cands]
    best = cands[int(np.argmin(sses))]
    sx = int(scales[best])
    forced = {}
    for target in forced_splits:
        c = int(np.argmin(np.abs(scales - target)))
        c = min(max(c, cands[0]), cands[-1])
        s_c = int(scales[c])
        forced[int(target)] = {
            "split_scale": s_c,
            "h_below": fit_scaling(curve, q, scales[0], s_c).h,
            "h_above": fit_scaling(curve, q, s_c, scales[-1]).h,
        }
    return CrossoverAnalysis(
        crossover_scale=sx,
        fit_below=fit_scaling(curve, q, scales[0], sx),
        fit_above=fit_scaling(curve, q, sx, scales[-1]),
        sse_total=float(min(sses)),
        sse_single=_ols(x, y)[2],
        candidates=tuple(int(scales[c]) for c in cands),
        forced=forced,
    )


def _hurst_once(series, config: MfdfaConfig, use_crossover: bool) -> ScalingFit:
    curve = fluctuation_function(series, replace(config, q_list=(2.0,)))
    if use_crossover and curve.scales.size >= MIN_CROSSOVER_SCALES:
        cross = detect_crossover(curve, 2.0)
        if cross.material:
            return cross.fit_below
    return fit_scaling(curve, 2.0)


def hurst(series, config: MfdfaConfig | None = None, use_crossover: bool = False) -> ScalingFit:
    """DFA estimate of the Hurst exponent ``H = H(2)``.

    With ``use_crossover`` the fit is restricted to scales below a material
    crossover. Estimates under 0.2 are unreliable, so the series is then
    integrated, re-analysed, and the result reduced by one.
    """
    config = config or MfdfaConfig()
    fit = _hurst_once(series, config, use_crossover)
    if fit.h >= INTEGRATION_TRIGGER:
        return fit
    if not isinstance(series, TimeSeries):
        series = TimeSeries.from_values(series)
    fit_int = _hurst_once(integrate(series), config, use_crossover)
    return replace(fit_int, h=fit_int.h - 1.0, integrated_adjustment=-1)


def generalized_hurst(curve: FluctuationCurve, s_lo: int | None = None, s_hi: int | None = None) -> dict[float, ScalingFit]:
    return {float(q): fit_scaling(curve, float(q), s_lo, s_hi) for q in curve.orders.tolist()}
