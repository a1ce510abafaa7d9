"""Shared domain types, the deterministic RNG contract, and min-max standardization.

Every random draw in the engine flows through a counter-based Philox stream
keyed by ``(seed, stream_id)`` (plus a per-component tag inside one sample),
so any sample is reproducible on any worker in any order. Nothing reads
ambient entropy.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import numpy as np
from numpy.random import Generator, Philox, SeedSequence

from .errors import ConfigError, InvalidSeries

ENGINE_VERSION = "0.1.0"

# Component tags: sub-stream key for each random stage of one sample.
TAG_RHYTHM = 0
TAG_NOISE_SPEC = 1
TAG_NOISE_RENDER = 2
TAG_TREND_SPEC = 3
TAG_TREND_RENDER = 4
TAG_RATIOS = 5

_U64 = (1 << 64) - 1


def seeded_rng(seed: int, stream_id: int) -> Generator:
    """Independent, reproducible random stream for (seed, stream_id).

    Identical keys yield identical draws across runs, platforms, and worker
    counts; distinct stream_ids give statistically independent streams.
    """
    return Generator(Philox(SeedSequence((seed & _U64, stream_id & _U64))))


def component_rng(seed: int, stream_id: int, tag: int) -> Generator:
    """Sub-stream for one component stage of one sample."""
    return Generator(Philox(SeedSequence((seed & _U64, stream_id & _U64, tag))))


def splitmix64(x: int) -> int:
    """SplitMix64 finalizer; a bijection on 64-bit ints."""
    x = (x + 0x9E3779B97F4A7C15) & _U64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _U64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _U64
    return x ^ (x >> 31)


def epoch_stream_id(epoch: int, index: int) -> int:
    """Stream id for sample `index` of streaming epoch `epoch`.

    Hashed so unlimited-mode streams never recycle the base dataset's
    stream ids (which are the small ints 0..count-1).
    """
    return splitmix64(((epoch & 0xFFFFFFFF) << 32) ^ (index & 0xFFFFFFFF))


def standardize(series: np.ndarray) -> np.ndarray:
    """Affine min-max map onto [-1, 1]; a constant series maps to all zeros.

    Raises InvalidSeries on NaN/Inf input.
    """
    x = np.asarray(series, dtype=float)
    if x.size == 0 or not np.all(np.isfinite(x)):
        raise InvalidSeries("standardize requires a non-empty finite series")
    lo = x.min()
    hi = x.max()
    if hi == lo:
        return np.zeros_like(x)
    return (x - lo) / (hi - lo) * 2.0 - 1.0


def minmax01(series: np.ndarray) -> np.ndarray:
    """Affine min-max map onto [0, 1]; a constant series maps to all zeros."""
    x = np.asarray(series, dtype=float)
    if x.size == 0 or not np.all(np.isfinite(x)):
        raise InvalidSeries("minmax01 requires a non-empty finite series")
    lo = x.min()
    hi = x.max()
    if hi == lo:
        return np.zeros_like(x)
    return (x - lo) / (hi - lo)


@dataclass(frozen=True)
class MixRatios:
    """Contribution weights of rhythm/noise/trend; non-negative, summing to 1."""

    r_rhyth: float
    r_noise: float
    r_trend: float

    def as_array(self) -> np.ndarray:
        return np.array([self.r_rhyth, self.r_noise, self.r_trend])

    def validate(self) -> None:
        arr = self.as_array()
        if np.any(arr < 0) or np.any(arr > 1):
            raise ConfigError("mix ratios must lie in [0, 1]")
        if abs(float(arr.sum()) - 1.0) > 1e-12:
            raise ConfigError("mix ratios must sum to 1 within 1e-12")


@dataclass(frozen=True)
class EngineConfig:
    """Engine-wide knobs; defaults follow the synthesis contract.

    k-range bounds the rhythm sine count, kernel fractions separate the
    noise and trend smoothing regimes, and label_k_max freezes the label
    schema's sine-slot count independently of the engine's k_max.
    """

    k_min: int = 3
    k_max: int = 10
    max_noise_kernel_frac: float = 0.05
    trend_kernel_frac: tuple[float, float] = (0.2, 0.5)
    trend_sine_count: tuple[int, int] = (1, 3)
    trend_multiplier_max: float = 8.0
    label_k_max: int = 10
    schema_version: int = 1
    shard_size_mb: int = 512
    min_window: int = 8

    def validate(self) -> None:
        if not (1 <= self.k_min <= self.k_max <= 32):
            raise ConfigError("sine-count range must satisfy 1 <= k_min <= k_max <= 32")
        if self.k_max > self.label_k_max:
            raise ConfigError("k_max exceeds the label schema's sine slots")
        if not 0 < self.max_noise_kernel_frac < self.trend_kernel_frac[0]:
            raise ConfigError("noise kernel fraction must stay below the trend range")
        lo, hi = self.trend_kernel_frac
        if not 0 < lo <= hi <= 1:
            raise ConfigError("trend kernel fraction range invalid")
        a, b = self.trend_sine_count
        if not 1 <= a <= b:
            raise ConfigError("trend sine-count range invalid")
        if self.trend_multiplier_max <= 1:
            raise ConfigError("trend period multiplier cap must exceed 1")
        if self.shard_size_mb < 1:
            raise ConfigError("shard size cap must be at least 1 MB")

    def check_window(self, n: int) -> None:
        if n < self.min_window:
            raise ConfigError(f"window length {n} below minimum {self.min_window}")


def ensure_finite_window(series: np.ndarray, name: str = "series") -> np.ndarray:
    """Validate a 1-D finite float window and return it as float64."""
    x = np.asarray(series, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise InvalidSeries(f"{name} must be a non-empty 1-D vector")
    if not np.all(np.isfinite(x)):
        raise InvalidSeries(f"{name} contains NaN/Inf")
    return x
