"""Parameter-to-label encoding and its inverse.

Every symbol drawn during synthesis occupies exactly one channel of a C x N
matrix, affinely mapped into [0, 1] (or {0, 1} for flags) and broadcast along
the time axis. Unused slots carry the sentinel -1: inside the global [-1, 1]
contract, outside every slot's valid sub-range, so absence is unambiguous.
Channel order and names are frozen per schema_version; reordering is a
schema break.

Decoding takes the per-channel median along the time axis, so predicted
matrices that are noisy or interpolated along time still decode, and discrete
channels survive moderate perturbation exactly.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .core import EngineConfig, MixRatios
from .errors import DecodeError, SchemaViolation
from .mixer import SynthesisParams
from .noise import DISTRIBUTIONS, DISTRIBUTION_INDEX, CATEGORIES, CATEGORY_INDEX, MAX_DIST_PARAMS, NoiseSpec, noise_kernel_cap
from .rhythm import TWO_PI, RhythmParams, frequency_bounds
from .trend import METHOD_MULTI_SINE, METHOD_SMOOTHED_NOISE, trend_kernel_range

SCHEMA_VERSION = 1
K_MAX = 10
SENTINEL = -1.0

# fixed channel layout, schema version 1
CH_SINE_COUNT = 0
CH_FREQ = 1                       # ..CH_FREQ+K_MAX-1
CH_AMP = CH_FREQ + K_MAX          # ..CH_AMP+K_MAX-1
CH_PHASE = CH_AMP + K_MAX         # ..CH_PHASE+K_MAX-1
CH_NOISE_CATEGORY = CH_PHASE + K_MAX
CH_NOISE_DISTRIBUTION = CH_NOISE_CATEGORY + 1
CH_NOISE_PARAM = CH_NOISE_DISTRIBUTION + 1    # ..CH_NOISE_PARAM+2
CH_NOISE_INVERT = CH_NOISE_PARAM + MAX_DIST_PARAMS
CH_NOISE_KERNEL = CH_NOISE_INVERT + 1
CH_TREND_METHOD = CH_NOISE_KERNEL + 1
CH_TREND_SCALE = CH_TREND_METHOD + 1
CH_RATIOS = CH_TREND_SCALE + 1                # ..CH_RATIOS+2
NUM_CHANNELS = CH_RATIOS + 3

CHANNEL_NAMES: tuple[str, ...] = (
    ("sine_count",)
    + tuple(f"freq_{i:02d}" for i in range(1, K_MAX + 1))
    + tuple(f"amp_{i:02d}" for i in range(1, K_MAX + 1))
    + tuple(f"phase_{i:02d}" for i in range(1, K_MAX + 1))
    + (
        "noise_category",
        "noise_distribution",
        "noise_param_1",
        "noise_param_2",
        "noise_param_3",
        "noise_invert",
        "noise_kernel",
        "trend_method",
        "trend_scale",
        "ratio_rhythm",
        "ratio_noise",
        "ratio_trend",
    )
)
assert len(CHANNEL_NAMES) == NUM_CHANNELS


@dataclass(frozen=True)
class LabelMatrix:
    """C x N label matrix plus the schema identity needed to decode it later."""

    values: np.ndarray
    schema_version: int = SCHEMA_VERSION
    channel_names: tuple[str, ...] = CHANNEL_NAMES


@dataclass(frozen=True)
class ParamsEstimate:
    """Decoded view of a label matrix.

    Rhythm and noise come back fully specified. The trend is summarized by
    its method and the branch scalar (period multiplier or smoothing kernel);
    the inner draw of a smoothed-noise trend is not part of the schema.
    """

    rhythm: RhythmParams
    noise: NoiseSpec
    trend_method: str
    trend_scale: float
    ratios: MixRatios
    window_len: int


def _affine01(value: float, lo: float, hi: float, what: str) -> float:
    if hi <= lo:
        return 0.0
    out = (value - lo) / (hi - lo)
    if not (-1e-12 <= out <= 1.0 + 1e-12):
        raise SchemaViolation(f"{what} = {value} outside [{lo}, {hi}]")
    return min(max(out, 0.0), 1.0)


def normalize_params(
    params: SynthesisParams, n: int, config: EngineConfig | None = None
) -> LabelMatrix:
    """Encode a generative record as the C x N label matrix.

    Raises SchemaViolation for any parameter outside its frozen range.
    """
    config = config or EngineConfig()
    if n != params.window_len:
        raise SchemaViolation(
            f"window length {n} does not match params.window_len {params.window_len}"
        )
    col = np.full(NUM_CHANNELS, SENTINEL)

    k = params.rhythm.sine_count
    if not (1 <= k <= K_MAX):
        raise SchemaViolation(f"sine count {k} not encodable with {K_MAX} slots")
    col[CH_SINE_COUNT] = _affine01(k, config.k_min, config.k_max, "sine_count")
    f_min, f_max = frequency_bounds(n)
    for i in range(k):
        col[CH_FREQ + i] = _affine01(
            float(params.rhythm.frequencies[i]), f_min, f_max, f"freq_{i + 1}"
        )
        col[CH_AMP + i] = _affine01(
            float(params.rhythm.amplitudes[i]), 0.0, 1.0, f"amp_{i + 1}"
        )
        phase = float(params.rhythm.phases[i])
        if not (0.0 <= phase < TWO_PI):
            raise SchemaViolation(f"phase_{i + 1} = {phase} outside [0, 2pi)")
        col[CH_PHASE + i] = phase / TWO_PI

    spec = params.noise
    dist_idx = DISTRIBUTION_INDEX.get(spec.distribution)
    if dist_idx is None:
        raise SchemaViolation(f"unknown distribution {spec.distribution!r}")
    dist = DISTRIBUTIONS[dist_idx]
    col[CH_NOISE_CATEGORY] = CATEGORY_INDEX[dist.category] / (len(CATEGORIES) - 1)
    col[CH_NOISE_DISTRIBUTION] = dist_idx / (len(DISTRIBUTIONS) - 1)
    if len(spec.dist_params) != len(dist.params):
        raise SchemaViolation(
            f"{dist.name} takes {len(dist.params)} params, got {len(spec.dist_params)}"
        )
    for i, ((pname, lo, hi), value) in enumerate(zip(dist.params, spec.dist_params)):
        col[CH_NOISE_PARAM + i] = _affine01(value, lo, hi, f"{dist.name}.{pname}")
    col[CH_NOISE_INVERT] = 1.0 if spec.invert else 0.0
    cap = noise_kernel_cap(n, config.max_noise_kernel_frac)
    if not (1 <= spec.smooth_kernel <= cap):
        raise SchemaViolation(f"noise kernel {spec.smooth_kernel} outside [1, {cap}]")
    col[CH_NOISE_KERNEL] = spec.smooth_kernel / n

    trend = params.trend
    if trend.method == METHOD_MULTI_SINE:
        if trend.multi_sine is None:
            raise SchemaViolation("multi-sine trend is missing its payload")
        col[CH_TREND_METHOD] = 0.0
        mult = trend.multi_sine.period_multiplier
        col[CH_TREND_SCALE] = _affine01(
            mult, 1.0, config.trend_multiplier_max, "period_multiplier"
        )
    elif trend.method == METHOD_SMOOTHED_NOISE:
        if trend.smoothed_noise is None:
            raise SchemaViolation("smoothed-noise trend is missing its payload")
        col[CH_TREND_METHOD] = 1.0
        k_lo, k_hi = trend_kernel_range(n, config.trend_kernel_frac)
        col[CH_TREND_SCALE] = _affine01(
            trend.smoothed_noise.smooth_kernel, k_lo, k_hi, "trend kernel"
        )
    else:
        raise SchemaViolation(f"unknown trend method {trend.method!r}")

    params.ratios.validate()
    col[CH_RATIOS] = params.ratios.r_rhyth
    col[CH_RATIOS + 1] = params.ratios.r_noise
    col[CH_RATIOS + 2] = params.ratios.r_trend

    return LabelMatrix(values=np.tile(col[:, None], (1, n)))


def _channel_medians(values: np.ndarray) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    if values.ndim != 2 or values.shape[0] != NUM_CHANNELS:
        raise DecodeError(
            f"expected a {NUM_CHANNELS} x N matrix, got shape {values.shape}"
        )
    with warnings.catch_warnings():
        # all-NaN channels are reported as DecodeError below, not as a warning
        warnings.simplefilter("ignore", RuntimeWarning)
        med = np.nanmedian(values, axis=1)
    bad = np.where(np.isnan(med))[0]
    if bad.size:
        raise DecodeError(f"channel {CHANNEL_NAMES[bad[0]]} is undecodable (all NaN)")
    return med


def denormalize_params(
    matrix: LabelMatrix | np.ndarray, n: int, config: EngineConfig | None = None
) -> ParamsEstimate:
    """Decode a label matrix (exact or predicted) back to parameter estimates.

    Works channel-wise on time-axis medians: sentinel slots (median < -0.5)
    decode as absent, discrete channels round to the nearest valid index.
    """
    config = config or EngineConfig()
    values = matrix.values if isinstance(matrix, LabelMatrix) else matrix
    med = _channel_medians(values)

    k = int(round(med[CH_SINE_COUNT] * (config.k_max - config.k_min))) + config.k_min
    k = min(max(k, 1), K_MAX)
    f_min, f_max = frequency_bounds(n)
    freqs = med[CH_FREQ : CH_FREQ + k] * (f_max - f_min) + f_min
    amps = med[CH_AMP : CH_AMP + k].copy()
    phases = med[CH_PHASE : CH_PHASE + k] * TWO_PI
    rhythm = RhythmParams(frequencies=freqs, amplitudes=amps, phases=phases)

    dist_idx = int(round(med[CH_NOISE_DISTRIBUTION] * (len(DISTRIBUTIONS) - 1)))
    dist_idx = min(max(dist_idx, 0), len(DISTRIBUTIONS) - 1)
    dist = DISTRIBUTIONS[dist_idx]
    dist_params = tuple(
        float(med[CH_NOISE_PARAM + i] * (hi - lo) + lo)
        for i, (_, lo, hi) in enumerate(dist.params)
    )
    noise = NoiseSpec(
        distribution=dist.name,
        dist_params=dist_params,
        invert=bool(round(med[CH_NOISE_INVERT])),
        smooth_kernel=int(round(med[CH_NOISE_KERNEL] * n)),
    )

    if round(med[CH_TREND_METHOD]) == 0:
        method = METHOD_MULTI_SINE
        scale = float(
            med[CH_TREND_SCALE] * (config.trend_multiplier_max - 1.0) + 1.0
        )
    else:
        method = METHOD_SMOOTHED_NOISE
        k_lo, k_hi = trend_kernel_range(n, config.trend_kernel_frac)
        scale = float(round(med[CH_TREND_SCALE] * (k_hi - k_lo) + k_lo))

    ratios = MixRatios(
        r_rhyth=float(med[CH_RATIOS]),
        r_noise=float(med[CH_RATIOS + 1]),
        r_trend=float(med[CH_RATIOS + 2]),
    )
    return ParamsEstimate(
        rhythm=rhythm,
        noise=noise,
        trend_method=method,
        trend_scale=scale,
        ratios=ratios,
        window_len=n,
    )
