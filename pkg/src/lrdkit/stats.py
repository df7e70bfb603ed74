"""Descriptive moments and the normality / unit-root / stationarity battery."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import stats as _sps

from .core import TimeSeries
from .errors import DegenerateError, InsufficientDataError

LEVELS = ("0.01", "0.05", "0.10")

# MacKinnon (2010) response surface, constant and no trend:
# cv(T) = b0 + b1/T + b2/T^2 + b3/T^3
_ADF_SURFACE = {
    "0.01": (-3.43035, -6.5393, -16.786, -79.433),
    "0.05": (-2.86154, -2.8903, -4.234, -40.040),
    "0.10": (-2.56677, -1.5384, -2.809, 0.0),
}

# Kwiatkowski et al. (1992), level stationarity
_KPSS_TABLE = {"0.01": 0.739, "0.05": 0.463, "0.10": 0.347}


@dataclass(frozen=True)
class DescriptiveStats:
    n: int
    mean: float
    sd: float
    skewness: float
    excess_kurtosis: float
    min: float
    max: float

    @property
    def degenerate(self) -> bool:
        return self.sd == 0.0

    def to_dict(self) -> dict:
        d = asdict(self)
        d["degenerate"] = self.degenerate
        return d


@dataclass(frozen=True)
class TestReport:
    """Outcome of a hypothesis test.

    ``reject`` maps each significance level in ``critical_values`` to the
    decision. ``p_value`` is set only where a continuous p-value is
    available (Jarque-Bera); ADF and KPSS carry ``p_bracket`` instead.
    """

    __test__ = False  # not a pytest class

    test: str
    statistic: float
    lags: int | None
    p_value: float | None = None
    critical_values: dict[str, float] = field(default_factory=dict)
    reject: dict[str, bool] = field(default_factory=dict)
    p_bracket: str | None = None

    def to_dict(self) -> dict:
        d = {"test": self.test, "statistic": self.statistic, "lags": self.lags}
        if self.p_value is not None:
            d["p_value"] = self.p_value
        d["critical_values"] = dict(self.critical_values)
        d["reject"] = dict(self.reject)
        if self.p_bracket is not None:
            d["p_bracket"] = self.p_bracket
        return d


def _values(series) -> np.ndarray:
    if isinstance(series, TimeSeries):
        return series.values
    return np.asarray(series, dtype=np.float64)


def _central_moments(x: np.ndarray) -> tuple[float, float, float, float]:
    mean = float(np.mean(x))
    d = x - mean
    d2 = d * d
    return mean, float(np.mean(d2)), float(np.mean(d2 * d)), float(np.mean(d2 * d2))


def describe(series) -> DescriptiveStats:
    """Sample moments. Skewness and kurtosis are NaN for constant input."""
    x = _values(series)
    n = x.size
    if n < 2:
        raise InsufficientDataError("describe needs at least two observations")
    mean, m2, m3, m4 = _central_moments(x)
    if m2 > 0.0:
        skew = m3 / m2**1.5
        kurt = m4 / m2**2 - 3.0
    else:
        skew = kurt = math.nan
    return DescriptiveStats(
        n=n,
        mean=mean,
        sd=math.sqrt(m2 * n / (n - 1)),
        skewness=skew,
        excess_kurtosis=kurt,
        min=float(x.min()),
        max=float(x.max()),
    )


def _bracket(reject: dict[str, bool]) -> str:
    if reject["0.01"]:
        return "<0.01"
    if reject["0.05"]:
        return "0.01-0.05"
    if reject["0.10"]:
        return "0.05-0.10"
    return ">0.10"


def jarque_bera(series) -> TestReport:
    x = _values(series)
    n = x.size
    if n < 8:
        raise InsufficientDataError("Jarque-Bera needs at least 8 observations")
    _, m2, m3, m4 = _central_moments(x)
    if m2 <= 0.0:
        raise DegenerateError("Jarque-Bera is undefined for a constant series")
    s = m3 / m2**1.5
    k = m4 / m2**2 - 3.0
    stat = n / 6.0 * (s * s + k * k / 4.0)
    p = float(_sps.chi2.sf(stat, 2))
    crit = {lvl: float(_sps.chi2.isf(float(lvl), 2)) for lvl in LEVELS}
    return TestReport(
        test="jarque-bera",
        statistic=float(stat),
        lags=None,
        p_value=p,
        critical_values=crit,
        reject={lvl: bool(stat > c) for lvl, c in crit.items()},
    )


def adf_critical_values(nobs: int) -> dict[str, float]:
    return {lvl: b0 + b1 / nobs + b2 / nobs**2 + b3 / nobs**3 for lvl, (b0, b1, b2, b3) in _ADF_SURFACE.items()}


def adf_test(series, lags: int) -> TestReport:
    """Augmented Dickey-Fuller test with a constant and ``lags`` lagged differences.

    The statistic is the OLS t-ratio of ``x[t-1]`` in the regression of
    ``dx[t]`` on a constant, ``x[t-1]`` and ``dx[t-1] .. dx[t-lags]``.
    """
    x = _values(series)
    if lags < 0:
        raise ValueError("lags must be >= 0")
    n = x.size
    if n <= lags + 2:
        raise InsufficientDataError(f"ADF with {lags} lags needs more than {lags + 2} observations")
    dx = np.diff(x)
    nobs = dx.size - lags
    if nobs <= lags + 2:
        raise InsufficientDataError(f"only {nobs} usable observations for {lags + 2} regressors")
    y = dx[lags:]
    cols = [np.ones(nobs), x[lags:-1]]
    cols += [dx[lags - j:-j] for j in range(1, lags + 1)]
    X = np.column_stack(cols)
    q, r = np.linalg.qr(X)
    diag = np.abs(np.diag(r))
    if diag.min() <= 1e-10 * diag.max():
        raise DegenerateError("ADF regressor matrix is singular")
    beta = np.linalg.solve(r, q.T @ y)
    resid = y - X @ beta
    dof = nobs - X.shape[1]
    sigma2 = float(resid @ resid) / dof
    if sigma2 <= 0.0:
        raise DegenerateError("ADF regression fits exactly; residual variance is zero")
    rinv = np.linalg.solve(r, np.eye(r.shape[0]))
    se = math.sqrt(sigma2 * float(rinv[1] @ rinv[1]))
    stat = float(beta[1] / se)
    crit = adf_critical_values(nobs)
    reject = {lvl: bool(stat < c) for lvl, c in crit.items()}
    return TestReport(
        test="adf",
        statistic=stat,
        lags=int(lags),
        critical_values=crit,
        reject=reject,
        p_bracket=_bracket(reject),
    )


def bartlett_long_run_variance(e: np.ndarray, bandwidth: int) -> float:
    """Newey-West long-run variance with weights ``1 - k/(bandwidth+1)``."""
    n = e.size
    lrv = float(e @ e) / n
    for k in range(1, bandwidth + 1):
        lrv += 2.0 * (1.0 - k / (bandwidth + 1.0)) * float(e[k:] @ e[:-k]) / n
    return lrv


def kpss_test(series, bandwidth: int) -> TestReport:
    """KPSS level-stationarity test with a Bartlett long-run variance."""
    x = _values(series)
    if bandwidth < 0:
        raise ValueError("bandwidth must be >= 0")
    n = x.size
    if n <= bandwidth + 1:
        raise InsufficientDataError(f"KPSS with bandwidth {bandwidth} needs more than {bandwidth + 1} observations")
    e = x - x.mean()
    lrv = bartlett_long_run_variance(e, bandwidth)
    if lrv <= 0.0:
        raise DegenerateError("KPSS is undefined: long-run variance is zero")
    partial = np.cumsum(e)
    stat = float(partial @ partial) / (n * n * lrv)
    crit = dict(_KPSS_TABLE)
    reject = {lvl: bool(stat > c) for lvl, c in crit.items()}
    return TestReport(
        test="kpss",
        statistic=stat,
        lags=int(bandwidth),
        critical_values=crit,
        reject=reject,
        p_bracket=_bracket(reject),
    )
