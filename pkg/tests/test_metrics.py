import numpy as np
import pytest

from oracles import oracle_dft, oracle_dtw_exhaustive, oracle_histogram, oracle_sdl
from tsynth.errors import (
    BandInfeasible,
    ConfigError,
    InvalidSeries,
    InvalidWindow,
    ShapeMismatch,
)
from tsynth.metrics import (
    MetricConfig,
    dft_magnitude,
    dtw,
    evaluate,
    histogram_distance,
    mse,
    structural_dissimilarity,
)


def test_mse_examples_and_oracle():
    assert mse(np.zeros(4), np.zeros(4)) == 0.0
    assert mse(np.array([0.0, 0.0]), np.array([1.0, 1.0])) == 1.0
    rng = np.random.default_rng(2)
    a = rng.normal(size=64)
    b = rng.normal(size=64)
    want = sum((x - y) ** 2 for x, y in zip(a, b)) / 64
    assert abs(mse(a, b) - want) < 1e-12
    with pytest.raises(ShapeMismatch):
        mse(np.zeros(3), np.zeros(4))


def test_dtw_known_examples():
    assert dtw(np.array([0.0, 0.0, 1.0]), np.array([0.0, 1.0])) == 0.0
    assert dtw(np.array([0.0]), np.array([5.0])) == 5.0
    a = np.random.default_rng(1).normal(size=32)
    assert dtw(a, a) == 0.0


def test_dtw_matches_exhaustive_oracle():
    rng = np.random.default_rng(5)
    for _ in range(150):
        la = int(rng.integers(1, 9))
        lb = int(rng.integers(1, 9))
        a = rng.uniform(-1, 1, la)
        b = rng.uniform(-1, 1, lb)
        assert dtw(a, b) == pytest.approx(oracle_dtw_exhaustive(a, b), abs=1e-12)


def test_dtw_symmetry_and_l1_bound():
    rng = np.random.default_rng(6)
    for _ in range(50):
        n = int(rng.integers(2, 40))
        a = rng.normal(size=n)
        b = rng.normal(size=n)
        d = dtw(a, b)
        assert d == pytest.approx(dtw(b, a), abs=1e-12)
        assert d <= np.abs(a - b).sum() + 1e-12


def test_dtw_band_restricts_paths():
    rng = np.random.default_rng(7)
    for _ in range(30):
        a = rng.normal(size=20)
        b = rng.normal(size=20)
        free = dtw(a, b)
        for band in (0, 1, 3, 8, 19):
            banded = dtw(a, b, band=band)
            assert banded >= free - 1e-12
        assert dtw(a, b, band=19) == pytest.approx(free, abs=1e-12)
    # band 0 forces the diagonal
    a = rng.normal(size=12)
    b = rng.normal(size=12)
    assert dtw(a, b, band=0) == pytest.approx(np.abs(a - b).sum(), abs=1e-12)


def test_dtw_band_feasibility():
    with pytest.raises(BandInfeasible):
        dtw(np.zeros(10), np.zeros(4), band=2)
    dtw(np.zeros(10), np.zeros(4), band=6)
    with pytest.raises(ConfigError):
        dtw(np.zeros(4), np.zeros(4), band=-1)


def test_dtw_rejects_empty_and_nonfinite():
    with pytest.raises(InvalidSeries):
        dtw(np.array([]), np.array([1.0]))
    with pytest.raises(InvalidSeries):
        dtw(np.array([np.nan]), np.array([1.0]))


def test_histogram_examples_and_oracle():
    a = np.random.default_rng(11).normal(size=128)
    assert histogram_distance(a, a) == 0.0
    assert histogram_distance(np.zeros(10), np.ones(10)) == 2.0
    assert histogram_distance(np.full(6, 3.0), np.full(9, 3.0)) == 0.0  # zero width
    rng = np.random.default_rng(12)
    for _ in range(100):
        x = rng.normal(size=int(rng.integers(5, 200)))
        y = rng.normal(size=int(rng.integers(5, 200)))
        got = histogram_distance(x, y, bins=32)
        assert abs(got - oracle_histogram(x, y, 32)) < 1e-12
        assert 0.0 <= got <= 2.0
        assert got == pytest.approx(histogram_distance(y, x, 32), abs=1e-15)
    with pytest.raises(ConfigError):
        histogram_distance(a, a, bins=1)


def test_sdl_identity_is_exact_zero():
    rng = np.random.default_rng(13)
    for _ in range(20):
        a = rng.uniform(-1, 1, int(rng.integers(11, 300)))
        assert structural_dissimilarity(a, a) == 0.0


def test_sdl_matches_moment_oracle():
    rng = np.random.default_rng(14)
    for _ in range(60):
        n = int(rng.integers(12, 128))
        a = rng.uniform(-1, 1, n)
        b = rng.uniform(-1, 1, n)
        got = structural_dissimilarity(a, b, win=11)
        assert abs(got - oracle_sdl(list(a), list(b), 11)) < 1e-9
        assert 0.0 <= got <= 2.0


def test_sdl_anticorrelation_exceeds_one():
    # sign flip drives SSIM negative where the covariance term dominates,
    # i.e. wherever the window mean is ~0 so the luminance factor stays
    # positive; a sine whose period equals the window makes that every
    # window, pushing SDL above 1
    t = np.arange(200)
    a = np.sin(2 * np.pi * t / 11)
    sdl = structural_dissimilarity(a, -a, win=11)
    assert sdl > 1.0


def test_sdl_negative_ssim_needs_positive_luminance():
    # with a nonzero window mean, flipping the sign also flips the luminance
    # factor, so SSIM can return positive despite negative covariance
    t = np.linspace(0, 4 * np.pi, 200)
    a = np.sin(t)
    sdl = structural_dissimilarity(a, -a, win=11)
    assert 0.0 < sdl < 1.0


def test_sdl_window_validation():
    a = np.zeros(32)
    with pytest.raises(InvalidWindow):
        structural_dissimilarity(a, a, win=10)  # even
    with pytest.raises(InvalidWindow):
        structural_dissimilarity(a, a, win=33)  # longer than the series
    with pytest.raises(ShapeMismatch):
        structural_dissimilarity(np.zeros(32), np.zeros(31))


def test_dft_examples():
    mags = dft_magnitude(np.full(16, 2.0))
    assert abs(mags[0] - 32.0) < 1e-9
    assert np.max(mags[1:]) < 1e-9
    n = 64
    t = np.arange(n)
    sine = np.sin(2 * np.pi * 8 * t / n)
    mags = dft_magnitude(sine)
    assert abs(mags[8] - n / 2) < 1e-9
    others = np.delete(mags, 8)
    assert np.max(others) < 1e-9


def test_dft_matches_naive_oracle_and_parseval():
    rng = np.random.default_rng(15)
    for _ in range(20):
        n = int(rng.integers(4, 96))
        a = rng.normal(size=n)
        got = dft_magnitude(a)
        assert got.shape == (n // 2 + 1,)
        assert np.max(np.abs(got - oracle_dft(a))) < 1e-9
        full = np.abs(np.fft.fft(a))
        energy_time = float(np.sum(a * a))
        energy_freq = float(np.sum(full * full)) / n
        assert abs(energy_time - energy_freq) <= 1e-6 * max(energy_time, 1e-30)


def test_evaluate_bundles_config():
    a = np.random.default_rng(16).uniform(-1, 1, 64)
    report = evaluate(a, a)
    assert report.mse == 0.0 and report.dtw == 0.0 and report.dh == 0.0
    assert report.sdl <= 1e-12
    assert report.config == MetricConfig()
