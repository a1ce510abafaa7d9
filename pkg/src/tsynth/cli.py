"""Command-line entry points.

Exit codes: 0 success, 1 configuration error (bad flags or engine config),
2 I/O error (filesystem or sink), 3 data error (unparseable or invalid input).
"""

from __future__ import annotations

import argparse
import json
import os
import socket
import sys
import time
from dataclasses import asdict

import numpy as np

from .core import EngineConfig
from .dataset import generate_dataset, ingest_real, read_windows, write_windows
from .errors import ConfigError, StreamClosed, TsynthError, WriteError
from .metrics import (
    MetricConfig,
    dft_magnitude,
    dtw,
    histogram_distance,
    mse,
    structural_dissimilarity,
)
from .stream import stream_unlimited

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_IO = 2
EXIT_DATA = 3


class _Parser(argparse.ArgumentParser):
    """argparse that reports bad usage as a ConfigError (exit code 1)."""

    def error(self, message: str):
        raise ConfigError(message)


def _engine_config(args: argparse.Namespace) -> EngineConfig:
    cfg = EngineConfig(
        k_min=args.k_min,
        k_max=args.k_max,
        max_noise_kernel_frac=args.max_noise_kernel_frac,
        trend_kernel_frac=(args.trend_kernel_min, args.trend_kernel_max),
    )
    cfg.validate()
    return cfg


def _cmd_generate(args: argparse.Namespace) -> int:
    config = _engine_config(args)
    started = time.monotonic()
    manifest = generate_dataset(
        seed=args.seed,
        count=args.count,
        window_len=args.window_len,
        out_dir=args.out,
        format=args.format,
        config=config,
        workers=args.workers,
    )
    elapsed = time.monotonic() - started
    print(
        f"wrote {manifest.count} samples (N={manifest.window_len}, "
        f"format={manifest.format}, {len(manifest.files)} files) "
        f"to {args.out} in {elapsed:.1f}s"
    )
    return EXIT_OK


def _cmd_stream(args: argparse.Namespace) -> int:
    if (args.port is None) == (args.pipe is None):
        raise ConfigError("exactly one of --port or --pipe is required")
    kwargs = dict(
        seed=args.seed,
        epoch_size=args.epoch_size,
        n=args.window_len,
        epochs=args.epochs,
    )
    if args.pipe is not None:
        if args.pipe == "-":
            stream_unlimited(sys.stdout.buffer, **kwargs)
            return EXIT_OK
        try:
            sink = open(args.pipe, "wb")
        except OSError as exc:
            raise WriteError(f"cannot open pipe {args.pipe}: {exc}") from exc
        with sink:
            stream_unlimited(sink, **kwargs)
        return EXIT_OK
    with socket.create_server(("127.0.0.1", args.port)) as server:
        print(f"streaming on 127.0.0.1:{args.port}", file=sys.stderr)
        conn, _ = server.accept()
        with conn, conn.makefile("wb") as sink:
            stream_unlimited(sink, **kwargs)
    return EXIT_OK


def _cmd_ingest(args: argparse.Namespace) -> int:
    windows = ingest_real(args.infile, args.window_len, args.stride)
    write_windows(args.out, windows)
    print(f"wrote {windows.shape[0]} windows of length {windows.shape[1]} to {args.out}")
    return EXIT_OK


def _load_pairs(pred_path: str, truth_path: str) -> tuple[np.ndarray, np.ndarray]:
    pred = read_windows(pred_path)
    truth = read_windows(truth_path)
    if pred.shape != truth.shape:
        raise ConfigError(
            f"prediction {pred.shape} and truth {truth.shape} shapes differ"
        )
    return pred, truth


def _cmd_eval(args: argparse.Namespace) -> int:
    pred, truth = _load_pairs(args.pred, args.truth)
    config = MetricConfig(bins=args.bins, ssim_win=args.win, dtw_band=args.band)
    chosen = args.metrics
    rows = []
    for p, t in zip(pred.astype(float), truth.astype(float)):
        row = {}
        if "mse" in chosen:
            row["mse"] = mse(p, t)
        if "dtw" in chosen:
            row["dtw"] = dtw(p, t, config.dtw_band)
        if "dh" in chosen:
            row["dh"] = histogram_distance(p, t, config.bins)
        if "sdl" in chosen:
            row["sdl"] = structural_dissimilarity(p, t, config.ssim_win)
        rows.append(row)
    report = {
        "config": asdict(config),
        "pairs": len(rows),
        "mean": {m: float(np.mean([r[m] for r in rows])) for m in chosen},
        "per_pair": rows,
    }
    json.dump(report, sys.stdout, indent=2, sort_keys=True)
    print()
    return EXIT_OK


def _cmd_spectrum(args: argparse.Namespace) -> int:
    windows = read_windows(args.infile)
    if windows.shape[1] == 1:  # a single-column series file: one long window
        windows = windows.reshape(1, -1)
    mags = np.vstack([dft_magnitude(w.astype(float)) for w in windows])
    try:
        np.savetxt(args.out, mags, delimiter=",", fmt="%.9g")
    except OSError as exc:
        raise WriteError(f"cannot write {args.out}: {exc}") from exc
    print(f"wrote {mags.shape[0]} spectra with {mags.shape[1]} bins to {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tsynth", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="emit a labeled synthetic dataset")
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--count", type=int, required=True)
    gen.add_argument("--window-len", type=int, default=256)
    gen.add_argument("--out", required=True)
    gen.add_argument("--format", choices=("csv", "bin"), default="bin")
    gen.add_argument("--workers", type=int, default=1)
    gen.add_argument("--k-min", type=int, default=3)
    gen.add_argument("--k-max", type=int, default=10)
    gen.add_argument("--max-noise-kernel-frac", type=float, default=0.05)
    gen.add_argument("--trend-kernel-min", type=float, default=0.2)
    gen.add_argument("--trend-kernel-max", type=float, default=0.5)
    gen.set_defaults(func=_cmd_generate)

    stm = sub.add_parser("stream", help="stream fresh epochs over a pipe or socket")
    stm.add_argument("--seed", type=int, required=True)
    stm.add_argument("--epoch-size", type=int, required=True)
    stm.add_argument("--window-len", type=int, default=256)
    stm.add_argument("--epochs", type=int, default=None, help="stop after this many (default: run until the sink closes)")
    stm.add_argument("--port", type=int, default=None)
    stm.add_argument("--pipe", default=None, help="output path, or - for stdout")
    stm.set_defaults(func=_cmd_stream)

    ing = sub.add_parser("ingest", help="window a real series for evaluation")
    ing.add_argument("--in", dest="infile", required=True)
    ing.add_argument("--window-len", type=int, required=True)
    ing.add_argument("--stride", type=int, required=True)
    ing.add_argument("--out", required=True)
    ing.set_defaults(func=_cmd_ingest)

    ev = sub.add_parser("eval", help="score prediction windows against truth")
    ev.add_argument("--pred", required=True)
    ev.add_argument("--truth", required=True)
    ev.add_argument(
        "--metrics",
        nargs="+",
        choices=("sdl", "dtw", "dh", "mse"),
        default=["sdl", "dtw", "dh", "mse"],
    )
    ev.add_argument("--bins", type=int, default=32)
    ev.add_argument("--win", type=int, default=11)
    ev.add_argument("--band", type=int, default=None)
    ev.set_defaults(func=_cmd_eval)

    spec = sub.add_parser("spectrum", help="DFT magnitudes of stored windows")
    spec.add_argument("--in", dest="infile", required=True)
    spec.add_argument("--out", required=True)
    spec.set_defaults(func=_cmd_spectrum)
    return parser


def _defuse_stdout() -> None:
    """Point stdout at devnull so a broken pipe cannot fail the exit flush."""
    try:
        devnull = os.open(os.devnull, os.O_WRONLY)
        os.dup2(devnull, sys.stdout.fileno())
        os.close(devnull)
    except OSError:
        pass


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (WriteError, StreamClosed) as exc:
        print(f"error: {exc}", file=sys.stderr)
        _defuse_stdout()
        return EXIT_IO
    except TsynthError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
