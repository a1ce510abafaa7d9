"""Trend synthesis: long-period multi-sine curves or heavily smoothed noise.

Both branches keep the trend's structure slower than anything rhythm or noise
can produce: multi-sine frequencies stay strictly below 1/N (minimum period
longer than the window), and smoothed-noise kernels cover 20-50% of the
window versus the <=5% cap on noise kernels.
"""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np
from numpy.random import Generator

from .noise import NoiseSpec, render_noise, sample_dist_params, DISTRIBUTIONS
from .rhythm import TWO_PI, superpose_sines
from .core import minmax01

METHOD_MULTI_SINE = "multi_sine"
METHOD_SMOOTHED_NOISE = "smoothed_noise"


@dataclass(frozen=True)
class MultiSineTrend:
    """Long-period sines: every frequency below 1/N via a shared multiplier > 1."""

    frequencies: np.ndarray
    amplitudes: np.ndarray
    phases: np.ndarray
    period_multiplier: float

    @property
    def sine_count(self) -> int:
        return len(self.frequencies)


@dataclass(frozen=True)
class TrendSpec:
    """One trend draw; exactly one branch is populated, matching `method`."""

    method: str
    multi_sine: MultiSineTrend | None = None
    smoothed_noise: NoiseSpec | None = None


def trend_kernel_range(n: int, frac: tuple[float, float] = (0.2, 0.5)) -> tuple[int, int]:
    """Smoothing-kernel bounds for the noise-trend branch: ceil(frac*N)."""
    return math.ceil(frac[0] * n), math.ceil(frac[1] * n)


def sample_trend_spec(
    n: int,
    rng: Generator,
    sine_count_range: tuple[int, int] = (1, 3),
    multiplier_max: float = 8.0,
    kernel_frac: tuple[float, float] = (0.2, 0.5),
) -> TrendSpec:
    """Pick a method uniformly, then draw that branch's parameters.

    Multi-sine: base frequencies uniform in [1/(4N), 1/N] divided by a shared
    multiplier in (1, multiplier_max], so minimum period always exceeds N.
    Smoothed noise: a regular noise spec restricted to the enlarged kernel range.
    """
    if bool(rng.integers(0, 2)):
        k = int(rng.integers(sine_count_range[0], sine_count_range[1] + 1))
        f_base = rng.uniform(1.0 / (4.0 * n), 1.0 / n, size=k)
        mult = float(rng.uniform(1.0, multiplier_max))
        amps = rng.uniform(0.0, 1.0, size=k)
        phases = rng.uniform(0.0, TWO_PI, size=k)
        branch = MultiSineTrend(
            frequencies=f_base / mult,
            amplitudes=amps,
            phases=phases,
            period_multiplier=mult,
        )
        return TrendSpec(method=METHOD_MULTI_SINE, multi_sine=branch)
    dist = DISTRIBUTIONS[int(rng.integers(0, len(DISTRIBUTIONS)))]
    params = sample_dist_params(dist, rng)
    invert = bool(rng.integers(0, 2))
    k_lo, k_hi = trend_kernel_range(n, kernel_frac)
    kernel = int(rng.integers(k_lo, k_hi + 1))
    inner = NoiseSpec(
        distribution=dist.name, dist_params=params, invert=invert, smooth_kernel=kernel
    )
    return TrendSpec(method=METHOD_SMOOTHED_NOISE, smoothed_noise=inner)


def render_trend(spec: TrendSpec, n: int, rng: Generator) -> np.ndarray:
    """Render the chosen branch onto [0, 1]."""
    if spec.method == METHOD_MULTI_SINE:
        ms = spec.multi_sine
        raw = superpose_sines(ms.frequencies, ms.amplitudes, ms.phases, n)
        return minmax01(raw)
    return render_noise(spec.smoothed_noise, n, rng)
