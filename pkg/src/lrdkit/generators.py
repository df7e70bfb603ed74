"""Synthetic series with known memory structure.

Randomness comes from numpy's PCG64 bit generator seeded with the 64-bit
``GeneratorSpec.seed``. Only ``Generator.random`` (53-bit uniforms) is
used; Gaussian variates are produced from those by the Box-Muller
transform, so the output depends on nothing but PCG64 and IEEE arithmetic.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from enum import Enum

import numpy as np

from . import _kernels
from .core import TimeSeries
from .errors import ConfigError, DegenerateError

DEFAULT_START = 1230768000  # 2009-01-01T00:00:00Z
CHOLESKY_MAX_N = 4096
BURN_IN_CAP = 1_000_000
_EIG_TOL = 1e-10


class Kind(str, Enum):
    FGN = "fgn"
    FBM = "fbm"
    AR1 = "ar1"
    SINUSOID_PLUS_FGN = "sinusoid-plus-fgn"
    CASCADE = "cascade"


@dataclass(frozen=True)
class GeneratorSpec:
    """What to generate.

    ``hurst`` is used by fgn, fbm and sinusoid-plus-fgn; ``phi`` by ar1;
    ``period`` and ``amplitude`` by sinusoid-plus-fgn; ``p`` by cascade.
    """

    kind: Kind
    n: int
    seed: int = 0
    hurst: float = 0.5
    phi: float = 0.5
    period: float = 24.0
    amplitude: float = 1.0
    p: float = 0.7
    spacing: int = 3600
    start: int = DEFAULT_START

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        if self.n < 2:
            raise ConfigError("n must be >= 2")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must fit in an unsigned 64-bit integer")
        k = self.kind
        if k in (Kind.FGN, Kind.FBM, Kind.SINUSOID_PLUS_FGN) and not 0.0 < self.hurst < 1.0:
            raise ConfigError(f"hurst must lie in (0, 1), got {self.hurst}")
        if k is Kind.AR1 and not -1.0 < self.phi < 1.0:
            raise ConfigError(f"phi must lie in (-1, 1), got {self.phi}")
        if k is Kind.SINUSOID_PLUS_FGN and self.period <= 0.0:
            raise ConfigError("period must be positive")
        if k is Kind.CASCADE and not 0.5 < self.p < 1.0:
            raise ConfigError(f"cascade weight p must lie in (0.5, 1), got {self.p}")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["kind"] = self.kind.value
        return d


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def standard_normal(rng: np.random.Generator, size: int) -> np.ndarray:
    """Box-Muller normals from pairs of uniforms."""
    m = (size + 1) // 2
    u = rng.random(2 * m)
    radius = np.sqrt(-2.0 * np.log1p(-u[:m]))  # 1 - u lies in (0, 1]
    angle = 2.0 * np.pi * u[m:]
    return np.concatenate([radius * np.cos(angle), radius * np.sin(angle)])[:size]


def fgn_autocovariance(hurst: float, k) -> np.ndarray:
    """Autocovariance of unit-variance fractional Gaussian noise at lag ``k``."""
    k = np.abs(np.asarray(k, dtype=np.float64))
    h2 = 2.0 * hurst
    return 0.5 * (np.abs(k + 1.0) ** h2 - 2.0 * k**h2 + np.abs(k - 1.0) ** h2)


def fgn(n: int, hurst: float, rng: np.random.Generator) -> np.ndarray:
    """Exact fGn sample by circulant embedding of size ``2n``.

    Falls back to a Cholesky factor of the covariance matrix for
    ``n <= 4096`` if the embedding has negative eigenvalues.
    """
    gamma = fgn_autocovariance(hurst, np.arange(n + 1))
    row = np.concatenate([gamma, gamma[-2:0:-1]])
    eig = np.fft.fft(row).real
    if eig.min() < -_EIG_TOL * eig.max():
        if n > CHOLESKY_MAX_N:
            raise DegenerateError(
                f"circulant embedding of size {row.size} is not non-negative definite "
                f"(min eigenvalue {eig.min():.3g}); use a larger embedding"
            )
        from scipy.linalg import toeplitz

        chol = np.linalg.cholesky(toeplitz(gamma[:n]))
        return chol @ standard_normal(rng, n)
    eig = np.clip(eig, 0.0, None)
    m = row.size
    z = standard_normal(rng, 2 * m)
    w = np.sqrt(eig / m) * (z[:m] + 1j * z[m:])
    return np.fft.fft(w).real[:n]


def ar1(n: int, phi: float, rng: np.random.Generator) -> np.ndarray:
    """AR(1) with unit-variance innovations after a burn-in of ``10 n / (1 - |phi|)`` steps."""
    burn = min(int(np.ceil(10 * n / (1.0 - abs(phi)))), BURN_IN_CAP)
    e = standard_normal(rng, burn + n)
    return _kernels.ar1(phi, e)[burn:]


def cascade(n: int, p: float, rng: np.random.Generator) -> np.ndarray:
    """Binomial multiplicative measure on ``2**ceil(log2 n)`` cells, cut to ``n``.

    At each level every cell splits in two, one half taking weight ``p``
    and the other ``1 - p``; which half gets ``p`` is a fair coin flip.
    """
    levels = max(1, int(np.ceil(np.log2(n))))
    mass = np.ones(1)
    for _ in range(levels):
        left = rng.random(mass.size) < 0.5
        wl = np.where(left, p, 1.0 - p)
        mass = np.column_stack([mass * wl, mass * (1.0 - wl)]).ravel()
    return mass[:n]


def generate_values(spec: GeneratorSpec) -> np.ndarray:
    rng = _rng(spec.seed)
    k = spec.kind
    if k is Kind.FGN:
        return fgn(spec.n, spec.hurst, rng)
    if k is Kind.FBM:
        return np.cumsum(fgn(spec.n, spec.hurst, rng))
    if k is Kind.AR1:
        return ar1(spec.n, spec.phi, rng)
    if k is Kind.SINUSOID_PLUS_FGN:
        t = np.arange(1, spec.n + 1, dtype=np.float64)
        return spec.amplitude * np.sin(2.0 * np.pi * t / spec.period) + fgn(spec.n, spec.hurst, rng)
    if k is Kind.CASCADE:
        return cascade(spec.n, spec.p, rng)
    raise ConfigError(f"unknown generator kind {k}")


def generate(spec: GeneratorSpec) -> TimeSeries:
    values = generate_values(spec)
    return TimeSeries.from_values(values, start=spec.start, spacing=spec.spacing, name=spec.kind.value)
