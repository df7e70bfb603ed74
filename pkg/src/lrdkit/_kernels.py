"""Inner loops shared by the MF-DFA engine and the generators.

Each kernel has a vectorised numpy implementation (``*_numpy``) and a loop
implementation compiled by numba (``*_jit``). The public names dispatch to
the compiled loop when numba is active and to numpy otherwise.
"""

from __future__ import annotations

import numpy as np
from scipy.signal import lfilter

from ._accel import HAVE_NUMBA, njit


def poly_basis(s: int, m: int) -> np.ndarray:
    """Orthonormal polynomial basis of degree ``m`` on ``s`` equispaced points.

    Column 0 is the constant vector ``1/sqrt(s)``; the remaining columns are
    orthogonal to it (and so sum to zero). Built from a QR factorisation of
    the Vandermonde matrix in a time index rescaled to [-1, 1], which keeps
    the fit well conditioned for large windows.
    """
    if m < 0:
        raise ValueError("detrend order must be >= 0")
    if m >= s:
        raise ValueError(f"detrend order {m} needs windows longer than {m}, got s={s}")
    t = np.linspace(-1.0, 1.0, s) if s > 1 else np.zeros(1)
    vander = np.vander(t, m + 1, increasing=True)
    q, r = np.linalg.qr(vander)
    # fix the sign convention so the constant column is +1/sqrt(s)
    q = q * np.sign(np.diag(r))
    return np.ascontiguousarray(q)


def window_f2_numpy(profile: np.ndarray, s: int, basis: np.ndarray) -> np.ndarray:
    T = profile.shape[0]
    ns = T // s
    fwd = profile[: ns * s].reshape(ns, s)
    bwd = profile[T - ns * s:].reshape(ns, s)[::-1]
    out = np.empty(2 * ns)
    slopes = basis[:, 1:]
    for dst, windows in ((out[:ns], fwd), (out[ns:], bwd)):
        centred = windows - windows.mean(axis=1, keepdims=True)
        resid = centred - (centred @ slopes) @ slopes.T
        dst[:] = np.mean(resid * resid, axis=1)
    return out


def _window_f2_loop(profile, s, basis):
    T = profile.shape[0]
    ns = T // s
    ncol = basis.shape[1]
    out = np.empty(2 * ns)
    coef = np.empty(ncol)
    for k in range(2 * ns):
        if k < ns:
            start = k * s
        else:
            start = T - (k - ns + 1) * s
        mean = 0.0
        for i in range(s):
            mean += profile[start + i]
        mean /= s
        for j in range(1, ncol):
            acc = 0.0
            for i in range(s):
                acc += basis[i, j] * (profile[start + i] - mean)
            coef[j] = acc
        ss = 0.0
        for i in range(s):
            r = profile[start + i] - mean
            for j in range(1, ncol):
                r -= coef[j] * basis[i, j]
            ss += r * r
        out[k] = ss / s
    return out


def _ar1_loop(phi, innovations, x0):
    n = innovations.shape[0]
    out = np.empty(n)
    prev = x0
    for t in range(n):
        prev = phi * prev + innovations[t]
        out[t] = prev
    return out


def ar1_numpy(phi: float, innovations: np.ndarray, x0: float = 0.0) -> np.ndarray:
    zi = np.array([phi * x0])
    out, _ = lfilter([1.0], [1.0, -phi], innovations, zi=zi)
    return out


window_f2_jit = njit(_window_f2_loop) if HAVE_NUMBA else None
ar1_jit = njit(_ar1_loop) if HAVE_NUMBA else None


def window_f2(profile: np.ndarray, s: int, basis: np.ndarray) -> np.ndarray:
    """Detrended mean squared deviation of each of the ``2*(T//s)`` windows.

    The first half holds windows cut from the start of ``profile``, the
    second half windows cut from its end (last window first).
    """
    if window_f2_jit is not None:
        return window_f2_jit(profile, s, basis)
    return window_f2_numpy(profile, s, basis)


def ar1(phi: float, innovations: np.ndarray, x0: float = 0.0) -> np.ndarray:
    """Run ``x[t] = phi * x[t-1] + e[t]`` starting from ``x[-1] = x0``."""
    if ar1_jit is not None:
        return ar1_jit(float(phi), innovations, float(x0))
    return ar1_numpy(phi, innovations, x0)
