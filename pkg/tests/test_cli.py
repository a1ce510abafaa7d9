import json
import os
import signal
import subprocess
import sys

import numpy as np
import pytest

from tsynth.dataset import read_windows, write_windows

CLI = [sys.executable, "-m", "tsynth.cli"]


def run(*args, **kwargs):
    return subprocess.run(
        CLI + list(args), capture_output=True, text=True, timeout=120, **kwargs
    )


def test_generate_and_exit_codes(tmp_path):
    out = tmp_path / "ds"
    r = run(
        "generate", "--seed", "7", "--count", "5", "--window-len", "64",
        "--out", str(out), "--format", "bin",
    )
    assert r.returncode == 0, r.stderr
    assert (out / "manifest.json").exists()
    assert (out / "shard_0000.bin").exists()


def test_bad_flags_exit_1(tmp_path):
    r = run("generate", "--seed", "7", "--count", "0", "--window-len", "64",
            "--out", str(tmp_path / "x"))
    assert r.returncode == 1
    r = run("generate", "--nope")
    assert r.returncode == 1
    r = run("eval", "--pred", "a", "--truth", "b", "--metrics", "bogus")
    assert r.returncode == 1


def test_unwritable_out_exits_2(tmp_path):
    target = tmp_path / "file"
    target.write_text("x")
    # out_dir collides with an existing file: directory creation fails
    r = run("generate", "--seed", "1", "--count", "2", "--window-len", "64",
            "--out", str(target))
    assert r.returncode == 2


def test_bad_data_exits_3(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("1.0\nnope\n")
    r = run("ingest", "--in", str(bad), "--window-len", "2", "--stride", "1",
            "--out", str(tmp_path / "w.bin"))
    assert r.returncode == 3
    assert "line 2" in r.stderr


def test_ingest_then_eval_round(tmp_path):
    series = tmp_path / "series.csv"
    rng = np.random.default_rng(3)
    series.write_text("\n".join("%.9g" % v for v in rng.normal(size=600)) + "\n")
    wins = tmp_path / "wins.bin"
    r = run("ingest", "--in", str(series), "--window-len", "128", "--stride", "128",
            "--out", str(wins))
    assert r.returncode == 0, r.stderr
    assert read_windows(str(wins)).shape == (4, 128)

    r = run("eval", "--pred", str(wins), "--truth", str(wins),
            "--metrics", "mse", "dtw", "dh", "sdl")
    assert r.returncode == 0, r.stderr
    report = json.loads(r.stdout)
    assert report["pairs"] == 4
    assert report["mean"]["mse"] == 0.0
    assert report["mean"]["dtw"] == 0.0
    assert report["mean"]["dh"] == 0.0
    assert report["mean"]["sdl"] <= 1e-12
    assert report["config"]["bins"] == 32


def test_eval_shape_mismatch_exits_1(tmp_path):
    a = tmp_path / "a.bin"
    b = tmp_path / "b.bin"
    write_windows(str(a), np.zeros((2, 16), dtype=np.float32))
    write_windows(str(b), np.zeros((3, 16), dtype=np.float32))
    r = run("eval", "--pred", str(a), "--truth", str(b))
    assert r.returncode == 1


def test_eval_band_flag(tmp_path):
    a = tmp_path / "a.bin"
    rng = np.random.default_rng(5)
    write_windows(str(a), rng.uniform(-1, 1, (2, 32)).astype(np.float32))
    r = run("eval", "--pred", str(a), "--truth", str(a), "--metrics", "dtw",
            "--band", "3")
    assert r.returncode == 0, r.stderr
    assert json.loads(r.stdout)["config"]["dtw_band"] == 3


def test_spectrum_csv(tmp_path):
    wins = tmp_path / "w.csv"
    n = 64
    t = np.arange(n)
    write_windows(str(wins), np.sin(2 * np.pi * 8 * t / n)[None, :].astype(np.float32))
    out = tmp_path / "spec.csv"
    r = run("spectrum", "--in", str(wins), "--out", str(out))
    assert r.returncode == 0, r.stderr
    mags = np.loadtxt(str(out), delimiter=",")
    assert mags.shape == (n // 2 + 1,)
    assert np.argmax(mags) == 8


def test_stream_to_stdout_pipe():
    proc = subprocess.run(
        CLI + ["stream", "--seed", "3", "--epoch-size", "2", "--window-len", "32",
               "--epochs", "2", "--pipe", "-"],
        capture_output=True, timeout=120,
    )
    assert proc.returncode == 0, proc.stderr.decode()
    frame_head = 20
    sample_payload = 4 * 32 * (1 + 43)
    expected = 2 * (frame_head + 2 * (frame_head + sample_payload))
    assert len(proc.stdout) == expected


def test_stream_broken_pipe_exits_2():
    # reader that closes immediately: the writer must exit 2, not crash
    reader, writer = os.pipe()
    proc = subprocess.Popen(
        CLI + ["stream", "--seed", "3", "--epoch-size", "1000",
               "--window-len", "256", "--pipe", "-"],
        stdout=writer, stderr=subprocess.PIPE,
    )
    os.close(writer)
    os.read(reader, 1024)
    os.close(reader)
    try:
        code = proc.wait(timeout=60)
    except subprocess.TimeoutExpired:
        proc.send_signal(signal.SIGKILL)
        pytest.fail("stream did not stop after sink closed")
    assert code == 2
