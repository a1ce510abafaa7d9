"""Dataset emission, manifests, and real-series ingestion.

Binary layout per shard: a 64-byte header (magic, format version, schema
version, channel count C, window length N, record count) followed by
records of little-endian float32, row-major:

    composite[N] | rhythm[N] | noise[N] | trend[N] | labels[C*N]

Record content depends only on (seed, sample index, N, config), and shard
boundaries depend only on (N, C, shard cap), so emission is byte-identical
for any worker count and any re-run. The manifest records everything needed
to regenerate the files bit-exactly under the same engine version.

CSV emission stores the same data as text: one row per sample in
series/rhythm/noise/trend files, and per-block label files holding each
channel's per-sample constant (label channels are broadcast along time, so
one scalar per channel is lossless; loaders re-broadcast). Values are
printed from float32 with enough digits to round-trip exactly.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
import os
import struct
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone

import numpy as np

from .core import ENGINE_VERSION, EngineConfig, standardize
from .errors import ConfigError, EmptyIngest, ParseError, WriteError
from .labels import (
    CH_NOISE_CATEGORY,
    CH_RATIOS,
    CH_TREND_METHOD,
    CHANNEL_NAMES,
    NUM_CHANNELS,
    SCHEMA_VERSION,
)
from .metrics import MetricConfig
from .mixer import synthesize
from .noise import DISTRIBUTIONS

MAGIC_SHARD = b"TSYNSHRD"
MAGIC_WINDOWS = b"TSYNWIND"
FORMAT_VERSION = 1
# magic, format version, schema version, channels, window len, record count
HEADER = struct.Struct("<8sIIIIQ")
HEADER_SIZE = 64
FLOAT_FMT = "%.9g"  # shortest text that round-trips binary32

LABEL_BLOCKS: tuple[tuple[str, int, int], ...] = (
    ("rhythm", 0, CH_NOISE_CATEGORY),
    ("noise", CH_NOISE_CATEGORY, CH_TREND_METHOD),
    ("trend", CH_TREND_METHOD, CH_RATIOS),
    ("ratios", CH_RATIOS, NUM_CHANNELS),
)


@dataclass(frozen=True)
class SampleRecord:
    """One decoded record: float32 views of the stored arrays."""

    composite: np.ndarray
    rhythm: np.ndarray
    noise: np.ndarray
    trend: np.ndarray
    labels: np.ndarray  # (C, N)


@dataclass
class DatasetManifest:
    """Everything needed to regenerate and decode a dataset bit-exactly."""

    engine_version: str
    format_version: int
    schema_version: int
    seed: int
    count: int
    window_len: int
    format: str
    created_utc: str
    config: dict
    channel_names: list[str]
    distribution_roster: list[dict]
    metric_defaults: dict
    record_layout: list[str]
    files: list[dict] = field(default_factory=list)  # name, records, sha256

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(asdict(self), fh, indent=2, sort_keys=True)
            fh.write("\n")

    @staticmethod
    def load(path: str) -> "DatasetManifest":
        with open(path, encoding="utf-8") as fh:
            return DatasetManifest(**json.load(fh))

    def engine_config(self) -> EngineConfig:
        cfg = dict(self.config)
        for key in ("trend_kernel_frac", "trend_sine_count"):
            cfg[key] = tuple(cfg[key])
        return EngineConfig(**cfg)


def record_floats(window_len: int, channels: int = NUM_CHANNELS) -> int:
    return window_len * (4 + channels)


def records_per_shard(
    window_len: int, channels: int = NUM_CHANNELS, cap_mb: int = 512
) -> int:
    cap_bytes = cap_mb * 1024 * 1024 - HEADER_SIZE
    return max(1, cap_bytes // (4 * record_floats(window_len, channels)))


def _pack_header(magic: bytes, channels: int, window_len: int, count: int) -> bytes:
    head = HEADER.pack(magic, FORMAT_VERSION, SCHEMA_VERSION, channels, window_len, count)
    return head + b"\x00" * (HEADER_SIZE - len(head))


def _unpack_header(blob: bytes, expect_magic: bytes, path: str):
    if len(blob) < HEADER_SIZE:
        raise ParseError(f"{path}: truncated header", line=0)
    magic, version, schema, channels, window_len, count = HEADER.unpack_from(blob)
    if magic != expect_magic:
        raise ParseError(f"{path}: bad magic {magic!r}", line=0)
    if version != FORMAT_VERSION:
        raise ParseError(f"{path}: unsupported format version {version}", line=0)
    return schema, channels, window_len, count


def _sample_record_bytes(seed: int, index: int, n: int, config: EngineConfig) -> bytes:
    s = synthesize(seed, index, n, config)
    parts = np.concatenate(
        [s.composite, s.rhythm, s.noise, s.trend, s.labels.ravel()]
    )
    return parts.astype("<f4").tobytes()


def _write_shard(
    path: str, seed: int, start: int, stop: int, n: int, config: EngineConfig
) -> str:
    """Generate samples [start, stop) into one shard; returns its sha256."""
    digest = hashlib.sha256()
    try:
        with open(path, "wb") as fh:
            head = _pack_header(MAGIC_SHARD, NUM_CHANNELS, n, stop - start)
            fh.write(head)
            digest.update(head)
            for index in range(start, stop):
                blob = _sample_record_bytes(seed, index, n, config)
                fh.write(blob)
                digest.update(blob)
    except OSError as exc:
        try:
            os.remove(path)
        except OSError:
            pass
        raise WriteError(f"failed writing {path}: {exc}") from exc
    return digest.hexdigest()


def _shard_task(args):
    path, seed, start, stop, n, config = args
    return _write_shard(path, seed, start, stop, n, config)


def _sha256_file(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _write_csv_files(
    out_dir: str, seed: int, count: int, n: int, config: EngineConfig
) -> list[dict]:
    names = ["series", "rhythm", "noise", "trend"] + [
        f"labels_{block}" for block, _, _ in LABEL_BLOCKS
    ]
    paths = {name: os.path.join(out_dir, f"{name}.csv") for name in names}
    try:
        handles = {name: open(path, "w", newline="") for name, path in paths.items()}
        try:
            writers = {name: csv.writer(handles[name]) for name in names}
            for block, lo, hi in LABEL_BLOCKS:
                writers[f"labels_{block}"].writerow(CHANNEL_NAMES[lo:hi])
            for index in range(count):
                s = synthesize(seed, index, n, config)
                rows = {
                    "series": s.composite,
                    "rhythm": s.rhythm,
                    "noise": s.noise,
                    "trend": s.trend,
                }
                for name, values in rows.items():
                    writers[name].writerow(
                        FLOAT_FMT % v for v in values.astype(np.float32)
                    )
                consts = s.labels[:, 0].astype(np.float32)
                for block, lo, hi in LABEL_BLOCKS:
                    writers[f"labels_{block}"].writerow(
                        FLOAT_FMT % v for v in consts[lo:hi]
                    )
        finally:
            for fh in handles.values():
                fh.close()
    except OSError as exc:
        for path in paths.values():
            try:
                os.remove(path)
            except OSError:
                pass
        raise WriteError(f"failed writing CSV dataset: {exc}") from exc
    return [
        {
            "name": os.path.basename(path),
            "records": count,
            "sha256": _sha256_file(path),
        }
        for path in paths.values()
    ]


def generate_dataset(
    seed: int,
    count: int,
    window_len: int,
    out_dir: str,
    format: str = "bin",
    config: EngineConfig | None = None,
    workers: int = 1,
) -> DatasetManifest:
    """Emit `count` samples plus a manifest into `out_dir`.

    Binary emission shards at the configured size cap and can fan shards out
    across a process pool; output bytes do not depend on the worker count.
    """
    config = config or EngineConfig()
    config.validate()
    config.check_window(window_len)
    if count < 1:
        raise ConfigError("count must be at least 1")
    if format not in ("bin", "csv"):
        raise ConfigError(f"unknown format {format!r}")
    if workers < 1:
        raise ConfigError("workers must be at least 1")

    try:
        os.makedirs(out_dir, exist_ok=True)
    except OSError as exc:
        raise WriteError(f"cannot create {out_dir}: {exc}") from exc

    if format == "bin":
        per_shard = records_per_shard(window_len, NUM_CHANNELS, config.shard_size_mb)
        bounds = [
            (lo, min(lo + per_shard, count)) for lo in range(0, count, per_shard)
        ]
        tasks = [
            (
                os.path.join(out_dir, f"shard_{i:04d}.bin"),
                seed,
                lo,
                hi,
                window_len,
                config,
            )
            for i, (lo, hi) in enumerate(bounds)
        ]
        if workers > 1 and len(tasks) > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                checksums = list(pool.map(_shard_task, tasks))
        else:
            checksums = [_shard_task(task) for task in tasks]
        files = [
            {"name": os.path.basename(t[0]), "records": t[3] - t[2], "sha256": c}
            for t, c in zip(tasks, checksums)
        ]
    else:
        files = _write_csv_files(out_dir, seed, count, window_len, config)

    manifest = DatasetManifest(
        engine_version=ENGINE_VERSION,
        format_version=FORMAT_VERSION,
        schema_version=SCHEMA_VERSION,
        seed=seed,
        count=count,
        window_len=window_len,
        format=format,
        created_utc=datetime.now(timezone.utc).isoformat(),
        config={
            k: list(v) if isinstance(v, tuple) else v
            for k, v in asdict(config).items()
        },
        channel_names=list(CHANNEL_NAMES),
        distribution_roster=[
            {
                "name": d.name,
                "category": d.category,
                "params": [{"name": p[0], "lo": p[1], "hi": p[2]} for p in d.params],
            }
            for d in DISTRIBUTIONS
        ],
        metric_defaults=asdict(MetricConfig()),
        record_layout=["composite", "rhythm", "noise", "trend", "labels"],
        files=files,
    )
    try:
        manifest.save(os.path.join(out_dir, "manifest.json"))
    except OSError as exc:
        raise WriteError(f"cannot write manifest: {exc}") from exc
    return manifest


def read_shard(path: str) -> list[SampleRecord]:
    """Decode one binary shard into per-sample float32 records."""
    with open(path, "rb") as fh:
        blob = fh.read()
    schema, channels, n, count = _unpack_header(blob, MAGIC_SHARD, path)
    floats = record_floats(n, channels)
    expected = HEADER_SIZE + 4 * floats * count
    if len(blob) != expected:
        raise ParseError(
            f"{path}: size {len(blob)} does not match header ({expected})", line=0
        )
    data = np.frombuffer(blob, dtype="<f4", offset=HEADER_SIZE).reshape(count, floats)
    out = []
    for row in data:
        out.append(
            SampleRecord(
                composite=row[:n],
                rhythm=row[n : 2 * n],
                noise=row[2 * n : 3 * n],
                trend=row[3 * n : 4 * n],
                labels=row[4 * n :].reshape(channels, n),
            )
        )
    return out


def _read_csv_rows(path: str, skip_header: bool = False) -> list[np.ndarray]:
    rows = []
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if skip_header and lineno == 1:
                continue
            if not row:
                raise ParseError(f"{path}: empty row", line=lineno)
            try:
                rows.append(np.array([float(v) for v in row], dtype=np.float32))
            except ValueError as exc:
                raise ParseError(f"{path}: {exc}", line=lineno) from exc
    return rows


def iter_dataset(out_dir: str):
    """Yield SampleRecords from a generated dataset directory, either format."""
    manifest = DatasetManifest.load(os.path.join(out_dir, "manifest.json"))
    if manifest.format == "bin":
        for entry in manifest.files:
            yield from read_shard(os.path.join(out_dir, entry["name"]))
        return
    n = manifest.window_len
    series = _read_csv_rows(os.path.join(out_dir, "series.csv"))
    parts = {
        name: _read_csv_rows(os.path.join(out_dir, f"{name}.csv"))
        for name in ("rhythm", "noise", "trend")
    }
    blocks = {
        block: _read_csv_rows(
            os.path.join(out_dir, f"labels_{block}.csv"), skip_header=True
        )
        for block, _, _ in LABEL_BLOCKS
    }
    for i in range(manifest.count):
        consts = np.concatenate([blocks[block][i] for block, _, _ in LABEL_BLOCKS])
        yield SampleRecord(
            composite=series[i],
            rhythm=parts["rhythm"][i],
            noise=parts["noise"][i],
            trend=parts["trend"][i],
            labels=np.repeat(consts[:, None], n, axis=1),
        )


def write_windows(path: str, windows: np.ndarray) -> None:
    """Store standardized windows, binary (TSYNWIND) or CSV by extension."""
    windows = np.asarray(windows, dtype=np.float32)
    if windows.ndim != 2:
        raise ConfigError("windows must be a 2-D array")
    try:
        if path.endswith(".csv"):
            with open(path, "w", newline="") as fh:
                writer = csv.writer(fh)
                for row in windows:
                    writer.writerow(FLOAT_FMT % v for v in row)
        else:
            with open(path, "wb") as fh:
                fh.write(
                    _pack_header(MAGIC_WINDOWS, 0, windows.shape[1], windows.shape[0])
                )
                fh.write(windows.astype("<f4").tobytes())
    except OSError as exc:
        raise WriteError(f"failed writing {path}: {exc}") from exc


def read_windows(path: str) -> np.ndarray:
    """Load a windows file written by write_windows (or any rows-as-windows CSV)."""
    if path.endswith(".csv"):
        rows = _read_csv_rows(path)
        if not rows:
            raise EmptyIngest(f"{path} holds no windows")
        lengths = {row.size for row in rows}
        if len(lengths) != 1:
            raise ParseError(f"{path}: ragged rows {sorted(lengths)}", line=0)
        return np.vstack(rows)
    with open(path, "rb") as fh:
        blob = fh.read()
    _, _, n, count = _unpack_header(blob, MAGIC_WINDOWS, path)
    if len(blob) != HEADER_SIZE + 4 * n * count:
        raise ParseError(f"{path}: size does not match header", line=0)
    return np.frombuffer(blob, dtype="<f4", offset=HEADER_SIZE).reshape(count, n)


def load_series(path: str) -> np.ndarray:
    """Read one long series: strict single-column CSV, or a shard's composites.

    CSV rows must each hold exactly one numeric value; anything else is a
    ParseError carrying the 1-based line number. A binary shard contributes
    its composite rows concatenated in record order.
    """
    with open(path, "rb") as fh:
        head = fh.read(8)
    if head == MAGIC_SHARD:
        records = read_shard(path)
        return np.concatenate([r.composite.astype(float) for r in records])
    values = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh.read().splitlines(), start=1):
            text = raw.strip()
            if text.count(",") or not text:
                raise ParseError(
                    f"{path}: expected one numeric value per line", line=lineno
                )
            try:
                values.append(float(text))
            except ValueError:
                raise ParseError(
                    f"{path}: non-numeric value {text!r}", line=lineno
                ) from None
    if not values:
        raise EmptyIngest(f"{path} holds no samples")
    return np.array(values, dtype=float)


def ingest_real(path: str, window_len: int, stride: int) -> np.ndarray:
    """Slice a real series into standardized windows; remainder is dropped."""
    if window_len < 2:
        raise ConfigError("window length must be at least 2")
    if stride < 1:
        raise ConfigError("stride must be at least 1")
    series = load_series(path)
    if series.size < window_len:
        raise EmptyIngest(
            f"series length {series.size} is shorter than window {window_len}"
        )
    num = (series.size - window_len) // stride + 1
    out = np.empty((num, window_len))
    for w in range(num):
        lo = w * stride
        out[w] = standardize(series[lo : lo + window_len])
    return out
