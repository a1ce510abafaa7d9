"""Deterministic labeled synthetic time-series engine.

Seed-addressed synthesis of rhythm/noise/trend mixtures with exact parameter
label matrices, the evaluation losses used to score reconstructions, dataset
emission with manifests, and framed epoch streaming.
"""

from .core import (
    ENGINE_VERSION,
    EngineConfig,
    MixRatios,
    component_rng,
    epoch_stream_id,
    minmax01,
    seeded_rng,
    splitmix64,
    standardize,
)
from .dataset import (
    DatasetManifest,
    SampleRecord,
    generate_dataset,
    ingest_real,
    iter_dataset,
    read_shard,
    read_windows,
    write_windows,
)
from .errors import (
    BandInfeasible,
    ConfigError,
    DecodeError,
    EmptyIngest,
    InvalidSeries,
    InvalidWindow,
    ParseError,
    SchemaViolation,
    ShapeMismatch,
    StreamClosed,
    TsynthError,
    WriteError,
)
from .labels import (
    CHANNEL_NAMES,
    K_MAX,
    NUM_CHANNELS,
    SCHEMA_VERSION,
    LabelMatrix,
    ParamsEstimate,
    denormalize_params,
    normalize_params,
)
from .metrics import (
    MetricConfig,
    MetricsReport,
    dft_magnitude,
    dtw,
    evaluate,
    histogram_distance,
    mse,
    structural_dissimilarity,
)
from .mixer import (
    SynthesisParams,
    SyntheticSample,
    compose,
    sample_params,
    sample_ratios,
    synthesize,
)
from .noise import (
    CATEGORIES,
    DISTRIBUTIONS,
    NoiseSpec,
    noise_kernel_cap,
    render_noise,
    sample_noise_spec,
)
from .rhythm import (
    RhythmParams,
    frequency_bounds,
    render_rhythm,
    sample_rhythm_params,
    superpose_sines,
)
from .stream import iter_epoch_frames, parse_frames, stream_unlimited
from .trend import (
    METHOD_MULTI_SINE,
    METHOD_SMOOTHED_NOISE,
    MultiSineTrend,
    TrendSpec,
    render_trend,
    sample_trend_spec,
    trend_kernel_range,
)

__version__ = ENGINE_VERSION
