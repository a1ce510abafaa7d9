import hashlib
import json
import os
import struct

import numpy as np
import pytest

import tsynth.dataset as ds
from tsynth.core import EngineConfig
from tsynth.errors import ConfigError, EmptyIngest, ParseError, WriteError
from tsynth.labels import NUM_CHANNELS
from tsynth.mixer import synthesize


def test_records_per_shard_math():
    # one record at N=256: 256 * 47 floats = 48128 bytes
    assert ds.record_floats(256) == 256 * 47
    per = ds.records_per_shard(256, cap_mb=512)
    assert per == (512 * 1024 * 1024 - 64) // 48128
    assert ds.records_per_shard(256, cap_mb=1) >= 1


def test_header_is_64_bytes_and_round_trips():
    head = ds._pack_header(ds.MAGIC_SHARD, 43, 256, 1000)
    assert len(head) == 64
    schema, channels, n, count = ds._unpack_header(head, ds.MAGIC_SHARD, "x")
    assert (schema, channels, n, count) == (1, 43, 256, 1000)
    with pytest.raises(ParseError):
        ds._unpack_header(head, ds.MAGIC_WINDOWS, "x")
    with pytest.raises(ParseError):
        ds._unpack_header(head[:32], ds.MAGIC_SHARD, "x")


def test_generate_bin_reproducible(tmp_path):
    a = tmp_path / "a"
    b = tmp_path / "b"
    man_a = ds.generate_dataset(7, 30, 64, str(a))
    man_b = ds.generate_dataset(7, 30, 64, str(b))
    blob_a = (a / "shard_0000.bin").read_bytes()
    blob_b = (b / "shard_0000.bin").read_bytes()
    assert blob_a == blob_b
    assert man_a.files == man_b.files
    assert man_a.files[0]["sha256"] == hashlib.sha256(blob_a).hexdigest()


def test_shard_records_match_direct_synthesis(tmp_path):
    out = tmp_path / "d"
    ds.generate_dataset(3, 10, 32, str(out))
    records = ds.read_shard(str(out / "shard_0000.bin"))
    assert len(records) == 10
    for i, rec in enumerate(records):
        s = synthesize(3, i, 32)
        assert np.array_equal(rec.composite, s.composite.astype(np.float32))
        assert np.array_equal(rec.rhythm, s.rhythm.astype(np.float32))
        assert np.array_equal(rec.labels, s.labels.astype(np.float32))
        assert rec.labels.shape == (NUM_CHANNELS, 32)


def test_sharding_splits_at_cap(tmp_path):
    cfg = EngineConfig(shard_size_mb=1)
    out = tmp_path / "d"
    per = ds.records_per_shard(64, cap_mb=1)
    count = per + 3
    man = ds.generate_dataset(5, count, 64, str(out), config=cfg)
    assert len(man.files) == 2
    assert man.files[0]["records"] == per
    assert man.files[1]["records"] == 3
    assert sum(len(ds.read_shard(str(out / f["name"]))) for f in man.files) == count
    size = os.path.getsize(out / "shard_0000.bin")
    assert size <= 1024 * 1024


def test_csv_and_bin_decode_identically(tmp_path):
    ds.generate_dataset(9, 12, 48, str(tmp_path / "bin"), format="bin")
    ds.generate_dataset(9, 12, 48, str(tmp_path / "csv"), format="csv")
    bin_records = list(ds.iter_dataset(str(tmp_path / "bin")))
    csv_records = list(ds.iter_dataset(str(tmp_path / "csv")))
    assert len(bin_records) == len(csv_records) == 12
    for a, b in zip(bin_records, csv_records):
        for field in ("composite", "rhythm", "noise", "trend", "labels"):
            assert np.array_equal(getattr(a, field), getattr(b, field)), field


def test_manifest_contents(tmp_path):
    out = tmp_path / "d"
    man = ds.generate_dataset(11, 5, 64, str(out))
    loaded = ds.DatasetManifest.load(str(out / "manifest.json"))
    assert loaded.seed == 11
    assert loaded.count == 5
    assert loaded.window_len == 64
    assert loaded.schema_version == 1
    assert len(loaded.channel_names) == NUM_CHANNELS
    assert len(loaded.distribution_roster) == 15
    assert loaded.record_layout == ["composite", "rhythm", "noise", "trend", "labels"]
    assert loaded.engine_config() == EngineConfig()
    assert loaded.metric_defaults["bins"] == 32
    raw = json.loads((out / "manifest.json").read_text())
    assert raw["engine_version"] == man.engine_version


def test_generate_validates_before_writing(tmp_path):
    out = tmp_path / "should_not_exist"
    with pytest.raises(ConfigError):
        ds.generate_dataset(1, 0, 64, str(out))
    with pytest.raises(ConfigError):
        ds.generate_dataset(1, 10, 64, str(out), format="parquet")
    with pytest.raises(ConfigError):
        ds.generate_dataset(1, 10, 4, str(out))
    with pytest.raises(ConfigError):
        ds.generate_dataset(1, 10, 64, str(out), workers=0)
    assert not out.exists()


def test_partial_shard_cleanup(tmp_path, monkeypatch):
    real = ds._sample_record_bytes
    calls = {"n": 0}

    def exploding(seed, index, n, config):
        calls["n"] += 1
        if calls["n"] > 4:
            raise OSError("disk full")
        return real(seed, index, n, config)

    monkeypatch.setattr(ds, "_sample_record_bytes", exploding)
    out = tmp_path / "d"
    with pytest.raises(WriteError):
        ds.generate_dataset(2, 10, 32, str(out))
    assert not (out / "shard_0000.bin").exists()
    assert not (out / "manifest.json").exists()


def test_windows_round_trip(tmp_path):
    rng = np.random.default_rng(4)
    wins = rng.uniform(-1, 1, (7, 33)).astype(np.float32)
    bin_path = str(tmp_path / "w.bin")
    csv_path = str(tmp_path / "w.csv")
    ds.write_windows(bin_path, wins)
    ds.write_windows(csv_path, wins)
    assert np.array_equal(ds.read_windows(bin_path), wins)
    assert np.array_equal(ds.read_windows(csv_path), wins)


def test_load_series_csv_strict(tmp_path):
    good = tmp_path / "good.csv"
    good.write_text("1.5\n-2\n3e-1\n")
    assert np.array_equal(ds.load_series(str(good)), np.array([1.5, -2.0, 0.3]))

    bad = tmp_path / "bad.csv"
    bad.write_text("1.0\novertwo\n3.0\n")
    with pytest.raises(ParseError) as err:
        ds.load_series(str(bad))
    assert err.value.line == 2

    two_col = tmp_path / "two.csv"
    two_col.write_text("1.0,2.0\n")
    with pytest.raises(ParseError):
        ds.load_series(str(two_col))

    blank = tmp_path / "blank.csv"
    blank.write_text("1.0\n\n2.0\n")
    with pytest.raises(ParseError) as err:
        ds.load_series(str(blank))
    assert err.value.line == 2

    empty = tmp_path / "empty.csv"
    empty.write_text("")
    with pytest.raises(EmptyIngest):
        ds.load_series(str(empty))


def test_load_series_from_shard(tmp_path):
    out = tmp_path / "d"
    ds.generate_dataset(6, 4, 32, str(out))
    series = ds.load_series(str(out / "shard_0000.bin"))
    assert series.shape == (4 * 32,)
    assert np.array_equal(series[:32], synthesize(6, 0, 32).composite.astype(np.float32))


def test_ingest_window_counts(tmp_path):
    path = tmp_path / "series.csv"
    path.write_text("\n".join(str(float(v)) for v in range(1000)) + "\n")
    assert ds.ingest_real(str(path), 256, 256).shape == (3, 256)

    short = tmp_path / "short.csv"
    short.write_text("\n".join(str(float(v)) for v in range(300)) + "\n")
    assert ds.ingest_real(str(short), 256, 1).shape == (45, 256)

    with pytest.raises(EmptyIngest):
        ds.ingest_real(str(short), 400, 1)
    with pytest.raises(ConfigError):
        ds.ingest_real(str(short), 256, 0)


def test_ingest_windows_standardized(tmp_path):
    rng = np.random.default_rng(8)
    path = tmp_path / "series.csv"
    path.write_text("\n".join("%.9g" % v for v in rng.normal(size=500)) + "\n")
    wins = ds.ingest_real(str(path), 100, 50)
    for w in wins:
        assert w.min() == -1.0 and w.max() == 1.0


def test_ingest_constant_series_gives_zero_windows(tmp_path):
    path = tmp_path / "flat.csv"
    path.write_text("\n".join("5.0" for _ in range(64)) + "\n")
    wins = ds.ingest_real(str(path), 32, 32)
    assert np.array_equal(wins, np.zeros((2, 32)))


def test_worker_pool_output_matches_serial(tmp_path):
    cfg = EngineConfig(shard_size_mb=1)
    per = ds.records_per_shard(64, cap_mb=1)
    count = per * 2 + 5  # three shards
    ds.generate_dataset(21, count, 64, str(tmp_path / "serial"), config=cfg, workers=1)
    ds.generate_dataset(21, count, 64, str(tmp_path / "pooled"), config=cfg, workers=2)
    for name in (f"shard_{i:04d}.bin" for i in range(3)):
        assert (tmp_path / "serial" / name).read_bytes() == (
            tmp_path / "pooled" / name
        ).read_bytes()
