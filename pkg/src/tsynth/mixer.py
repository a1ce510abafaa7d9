"""Simplex ratio sampling and composition of the final synthetic window.

The composite is a convex combination of the standardized components, so each
ratio is the exact contribution weight of its component; the composite is
deliberately not re-standardized, which is what keeps the label matrix an
exact record rather than an approximation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.random import Generator

from .core import (
    EngineConfig,
    MixRatios,
    TAG_NOISE_RENDER,
    TAG_NOISE_SPEC,
    TAG_RATIOS,
    TAG_RHYTHM,
    TAG_TREND_RENDER,
    TAG_TREND_SPEC,
    component_rng,
    standardize,
)
from .errors import ShapeMismatch
from .noise import NoiseSpec, render_noise, sample_noise_spec
from .rhythm import RhythmParams, render_rhythm, sample_rhythm_params
from .trend import TrendSpec, render_trend, sample_trend_spec


@dataclass(frozen=True)
class SynthesisParams:
    """The complete generative record for one sample; replay-exact with the engine.

    `seed` and `stream_id` identify the random streams, so re-running the
    engine on them reproduces the sample bit for bit.
    """

    rhythm: RhythmParams
    noise: NoiseSpec
    trend: TrendSpec
    ratios: MixRatios
    window_len: int
    seed: int
    stream_id: int


@dataclass(frozen=True)
class SyntheticSample:
    """One emitted sample: composite, standardized components, params, labels."""

    composite: np.ndarray
    rhythm: np.ndarray
    noise: np.ndarray
    trend: np.ndarray
    params: SynthesisParams
    labels: np.ndarray  # C x N label matrix


def sample_ratios(rng: Generator) -> MixRatios:
    """Uniform draw on the 2-simplex (flat Dirichlet)."""
    r = rng.dirichlet((1.0, 1.0, 1.0))
    return MixRatios(r_rhyth=float(r[0]), r_noise=float(r[1]), r_trend=float(r[2]))


def compose(
    rhythm: np.ndarray,
    noise: np.ndarray,
    trend: np.ndarray,
    ratios: MixRatios,
) -> np.ndarray:
    """Weighted sum of already-standardized components."""
    rhythm = np.asarray(rhythm, dtype=float)
    noise = np.asarray(noise, dtype=float)
    trend = np.asarray(trend, dtype=float)
    if not (rhythm.shape == noise.shape == trend.shape):
        raise ShapeMismatch("component windows must share one length")
    return ratios.r_rhyth * rhythm + ratios.r_noise * noise + ratios.r_trend * trend


def sample_params(
    seed: int, stream_id: int, n: int, config: EngineConfig | None = None
) -> SynthesisParams:
    """Draw the full generative record for one sample without rendering it."""
    config = config or EngineConfig()
    config.validate()
    config.check_window(n)
    rhythm = sample_rhythm_params(
        n, component_rng(seed, stream_id, TAG_RHYTHM), (config.k_min, config.k_max)
    )
    noise = sample_noise_spec(
        n, component_rng(seed, stream_id, TAG_NOISE_SPEC), config.max_noise_kernel_frac
    )
    trend = sample_trend_spec(
        n,
        component_rng(seed, stream_id, TAG_TREND_SPEC),
        config.trend_sine_count,
        config.trend_multiplier_max,
        config.trend_kernel_frac,
    )
    ratios = sample_ratios(component_rng(seed, stream_id, TAG_RATIOS))
    return SynthesisParams(
        rhythm=rhythm,
        noise=noise,
        trend=trend,
        ratios=ratios,
        window_len=n,
        seed=seed,
        stream_id=stream_id,
    )


def render_components(
    params: SynthesisParams,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Render and standardize the three components of a generative record."""
    n = params.window_len
    seed, sid = params.seed, params.stream_id
    rhythm = standardize(render_rhythm(params.rhythm, n))
    noise = standardize(
        render_noise(params.noise, n, component_rng(seed, sid, TAG_NOISE_RENDER))
    )
    trend = standardize(
        render_trend(params.trend, n, component_rng(seed, sid, TAG_TREND_RENDER))
    )
    return rhythm, noise, trend


def synthesize(
    seed: int, stream_id: int, n: int, config: EngineConfig | None = None
) -> SyntheticSample:
    """Generate one complete sample: components, composite, and label matrix."""
    from .labels import normalize_params

    config = config or EngineConfig()
    params = sample_params(seed, stream_id, n, config)
    rhythm, noise, trend = render_components(params)
    composite = compose(rhythm, noise, trend, params.ratios)
    labels = normalize_params(params, n, config)
    return SyntheticSample(
        composite=composite,
        rhythm=rhythm,
        noise=noise,
        trend=trend,
        params=params,
        labels=labels.values,
    )
