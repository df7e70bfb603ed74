import numpy as np
import pytest

from helpers import fgn_values
from lrdkit.core import integrate
from lrdkit.errors import ConfigError, DegenerateError
from lrdkit.generators import (
    GeneratorSpec,
    _rng,
    ar1,
    fgn,
    fgn_autocovariance,
    generate,
    generate_values,
    standard_normal,
)
from lrdkit.spectral import acf

N14 = 2**14


def test_autocovariance_formula():
    assert fgn_autocovariance(0.5, [0, 1, 5]).tolist() == [1.0, 0.0, 0.0]
    assert fgn_autocovariance(0.75, 1) == pytest.approx(2**0.5 - 1)
    k = np.arange(1, 50)
    assert np.all(fgn_autocovariance(0.3, k) < 0) and np.all(fgn_autocovariance(0.8, k) > 0)


def test_standard_normal_moments():
    z = standard_normal(_rng(0), 200_001)
    assert z.size == 200_001
    assert abs(z.mean()) < 0.01 and abs(z.std() - 1) < 0.01
    assert abs(np.mean(z**4) - 3) < 0.05


def test_white_noise_lag_one():
    x = fgn_values(0.5, 0)
    assert abs(acf(x, 1).rho[1]) < 3 / np.sqrt(x.size)


def test_h075_lag_one():
    r1 = [acf(fgn_values(0.75, seed), 1).rho[1] for seed in range(100)]
    assert np.mean(r1) == pytest.approx(2 ** (2 * 0.75 - 1) - 1, abs=0.03)


def test_fbm_is_cumsum_of_fgn():
    fgn_s = generate(GeneratorSpec("fgn", 1000, seed=42, hurst=0.7))
    fbm_s = generate(GeneratorSpec("fbm", 1000, seed=42, hurst=0.7))
    np.testing.assert_array_equal(fbm_s.values, integrate(fgn_s).values)


@pytest.mark.parametrize("H", [0.3, 0.6, 0.9])
def test_exact_covariance(H):
    n, reps = 512, 2000
    X = np.array([fgn(n, H, _rng(seed)) for seed in range(reps)])
    for k in range(11):
        prods = np.mean(X[:, : n - k] * X[:, k:], axis=1)
        se = prods.std(ddof=1) / np.sqrt(reps)
        assert abs(prods.mean() - fgn_autocovariance(H, k)) <= 3 * se


def test_determinism():
    spec = GeneratorSpec("sinusoid-plus-fgn", 3000, seed=2**63 + 5, hurst=0.8, amplitude=2.0)
    assert generate_values(spec).tobytes() == generate_values(spec).tobytes()


@pytest.mark.parametrize("H", [0.5, 0.7])
def test_seed_independence_fgn(H):
    for seed in range(10):
        a = fgn(N14, H, _rng(seed))
        b = fgn(N14, H, _rng(seed + 1000))
        assert abs(np.corrcoef(a, b)[0, 1]) < 0.05


def test_seed_independence_ar1():
    for seed in range(10):
        a, b = ar1(N14, 0.5, _rng(seed)), ar1(N14, 0.5, _rng(seed + 1000))
        assert abs(np.corrcoef(a, b)[0, 1]) < 0.05


def test_ar1_moments():
    x = np.concatenate([ar1(20_000, 0.6, _rng(s)) for s in range(5)])
    assert np.var(x) == pytest.approx(1 / (1 - 0.36), rel=0.05)
    assert acf(x, 1).rho[1] == pytest.approx(0.6, abs=0.02)


def test_sinusoid_component():
    spec = GeneratorSpec("sinusoid-plus-fgn", 480, seed=3, hurst=0.6, period=24, amplitude=2.0)
    noise = fgn(480, 0.6, _rng(3))
    t = np.arange(1, 481)
    np.testing.assert_allclose(generate_values(spec) - noise, 2.0 * np.sin(2 * np.pi * t / 24), atol=1e-12)


def test_cascade_measure():
    v = generate_values(GeneratorSpec("cascade", 1024, seed=0, p=0.7))
    assert v.sum() == pytest.approx(1.0)
    assert v.max() == pytest.approx(0.7**10)
    assert v.min() == pytest.approx(0.3**10)
    cut = generate_values(GeneratorSpec("cascade", 1000, seed=0, p=0.7))
    np.testing.assert_array_equal(cut, v[:1000])
    for level in range(1, 10):
        block = v.reshape(2**level, -1).sum(axis=1)
        pairs = block.reshape(-1, 2)
        ratio = pairs.max(axis=1) / pairs.sum(axis=1)
        np.testing.assert_allclose(ratio, 0.7)


def test_cholesky_fallback(monkeypatch):
    from lrdkit import generators

    real_fft = np.fft.fft
    calls = {"n": 0}

    def fake_fft(a, *args, **kwargs):
        out = real_fft(a, *args, **kwargs)
        calls["n"] += 1
        if calls["n"] == 1:
            out = out.copy()
            out[1] = -1.0
        return out

    monkeypatch.setattr(generators.np.fft, "fft", fake_fft)
    x = generators.fgn(64, 0.7, _rng(0))
    assert calls["n"] == 1  # eigenvalue check only; no embedding transform
    assert x.shape == (64,) and np.all(np.isfinite(x))
    calls["n"] = 0
    with pytest.raises(DegenerateError, match="larger embedding"):
        generators.fgn(5000, 0.7, _rng(0))


def test_spec_validation():
    with pytest.raises(ConfigError):
        GeneratorSpec("fgn", 100, hurst=1.0)
    with pytest.raises(ConfigError):
        GeneratorSpec("ar1", 100, phi=1.0)
    with pytest.raises(ConfigError):
        GeneratorSpec("cascade", 100, p=0.4)
    with pytest.raises(ConfigError):
        GeneratorSpec("fgn", 1)
    with pytest.raises(ConfigError):
        GeneratorSpec("fgn", 10, seed=-1)
    with pytest.raises(ValueError):
        GeneratorSpec("arfima", 10)
    s = generate(GeneratorSpec("ar1", 10))
    assert s.spacing == 3600 and s.timestamps[0] == 1230768000
