"""Sample autocorrelation and Bartlett lag-window spectral density."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import fft as _fft

from .core import TimeSeries
from .errors import DegenerateError, InsufficientDataError
from .serialize import csv_text


def _values(series) -> np.ndarray:
    if isinstance(series, TimeSeries):
        return series.values
    return np.asarray(series, dtype=np.float64)


def autocovariance(x: np.ndarray, max_lag: int) -> np.ndarray:
    """Biased (divide by ``T``) sample autocovariance for lags ``0..max_lag``, via FFT."""
    n = x.size
    d = x - x.mean()
    nfft = _fft.next_fast_len(2 * n - 1, real=True)
    spec = _fft.rfft(d, nfft)
    acov = _fft.irfft(spec.real**2 + spec.imag**2, nfft)[: max_lag + 1]
    return acov / n


@dataclass(frozen=True, eq=False)
class AcfResult:
    lags: np.ndarray
    rho: np.ndarray
    n: int

    def to_csv(self) -> str:
        return csv_text(["lag", "rho"], zip(self.lags.tolist(), self.rho.tolist()))


@dataclass(frozen=True, eq=False)
class SpectrumResult:
    """Density estimates at Fourier frequencies ``2 pi j / T``, ``j = 1 .. T//2``."""

    frequencies: np.ndarray
    density: np.ndarray
    bandwidth: int
    kernel: str = "bartlett"

    def to_csv(self) -> str:
        return csv_text(["lambda", "f"], zip(self.frequencies.tolist(), self.density.tolist()))

    def low_frequency_slope(self, lo: float | None = None, decades: float = 1.0) -> float:
        """Log-log slope of the density over ``[lo, lo * 10**decades]``.

        ``lo`` defaults to ``2 pi / bandwidth``, the lowest frequency the
        lag window resolves.
        """
        lo = 2.0 * np.pi / self.bandwidth if lo is None else lo
        mask = (self.frequencies >= lo) & (self.frequencies <= lo * 10.0**decades)
        if np.count_nonzero(mask) < 3:
            raise InsufficientDataError("fewer than three frequencies in the fitting band")
        return float(np.polyfit(np.log(self.frequencies[mask]), np.log(self.density[mask]), 1)[0])


def acf(series, max_lag: int) -> AcfResult:
    x = _values(series)
    if not 0 <= max_lag < x.size:
        raise ValueError(f"max_lag must lie in 0..{x.size - 1}")
    gamma = autocovariance(x, max_lag)
    if gamma[0] <= 0.0:
        raise DegenerateError("autocorrelation is undefined for a constant series")
    rho = gamma / gamma[0]
    rho[0] = 1.0
    return AcfResult(np.arange(max_lag + 1), np.clip(rho, -1.0, 1.0), x.size)


def bartlett_weights(bandwidth: int, lags: np.ndarray) -> np.ndarray:
    return np.clip(1.0 - np.abs(lags) / bandwidth, 0.0, None)


def smoothed_periodogram(series, bandwidth: int | None = None) -> SpectrumResult:
    """Lag-window estimate ``(1/2pi) sum_{|k|<m} (1 - |k|/m) gamma(k) cos(k lambda)``.

    ``bandwidth`` defaults to ``round(0.1 * T)``. The tapered autocovariance
    is folded onto a length-``T`` circle and transformed once, so the cost
    is ``O(T log T)``.
    """
    x = _values(series)
    n = x.size
    if bandwidth is None:
        bandwidth = max(1, int(round(0.1 * n)))
    if not 1 <= bandwidth < n:
        raise ValueError(f"bandwidth must lie in 1..{n - 1}")
    gamma = autocovariance(x, bandwidth - 1)
    if gamma[0] <= 0.0:
        raise DegenerateError("spectrum is undefined for a constant series")
    lags = np.arange(bandwidth)
    tapered = bartlett_weights(bandwidth, lags) * gamma
    circle = np.zeros(n)
    np.add.at(circle, lags % n, tapered)
    np.add.at(circle, (-lags[1:]) % n, tapered[1:])
    dens = _fft.rfft(circle).real / (2.0 * np.pi)
    j = np.arange(1, n // 2 + 1)
    dens = np.clip(dens[j], 0.0, None)
    return SpectrumResult(2.0 * np.pi * j / n, dens, int(bandwidth))
